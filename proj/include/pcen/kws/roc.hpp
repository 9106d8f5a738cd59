/*
 * Copyright 2026 The PCEN Frontend Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pcen/dsp/audio.hpp"
#include "pcen/errors.hpp"
#include "pcen/keyvalue.hpp"
#include "pcen/kws/dataset.hpp"
#include "pcen/kws/features.hpp"
#include "pcen/kws/model.hpp"

namespace pcen::kws {

struct RocPoint {
  double threshold = 0.0;
  double fa = 0.0;  // fraction of negatives with score >= threshold
  double fr = 0.0;  // fraction of positives with score < threshold
};

// Operating points in order of rising threshold: the first point accepts
// everything (FA = 1, FR = 0) and the last rejects everything (FA = 0, FR = 1).
struct RocCurve {
  std::vector<RocPoint> points;

  static RocCurve from_scores(const std::vector<double>& scores,
                              const std::vector<Label>& labels) {
    if (scores.size() != labels.size()) throw ShapeError("one score per label required");
    std::vector<std::pair<double, Label>> sorted;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!std::isfinite(scores[i])) throw ParameterError("ROC scores must be finite");
      sorted.emplace_back(scores[i], labels[i]);
      if (labels[i] == Label::kKeyword) ++n_pos;
    }
    const std::size_t n_neg = scores.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw ParameterError("ROC needs both classes");
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    RocCurve roc;
    std::size_t pos_below = 0;
    std::size_t neg_below = 0;
    auto emit = [&](double threshold) {
      roc.points.push_back({threshold,
                            static_cast<double>(n_neg - neg_below) / static_cast<double>(n_neg),
                            static_cast<double>(pos_below) / static_cast<double>(n_pos)});
    };
    for (std::size_t i = 0; i < sorted.size();) {
      const double t = sorted[i].first;
      emit(t);
      for (; i < sorted.size() && sorted[i].first == t; ++i) {
        (sorted[i].second == Label::kKeyword ? pos_below : neg_below) += 1;
      }
    }
    emit(std::nextafter(sorted.back().first, std::numeric_limits<double>::infinity()));
    return roc;
  }

  // FR at the given FA, interpolated linearly between neighbouring operating
  // points. Where several points share the target FA the lowest FR is used.
  double fr_at_fa(double fa_target) const {
    if (!(fa_target >= 0.0 && fa_target <= 1.0)) {
      throw ParameterError("FA target must be in [0, 1]");
    }
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (points[j].fa > fa_target) continue;
      if (points[j].fa == fa_target || j == 0) return points[j].fr;
      const RocPoint& a = points[j - 1];
      const RocPoint& b = points[j];
      const double u = (a.fa - fa_target) / (a.fa - b.fa);
      return a.fr + u * (b.fr - a.fr);
    }
    return points.back().fr;
  }

  // Area under the detection curve (FA against 1 - FR).
  double auc() const {
    double area = 0.0;
    for (std::size_t j = 1; j < points.size(); ++j) {
      const double width = points[j - 1].fa - points[j].fa;
      area += width * (2.0 - points[j - 1].fr - points[j].fr) / 2.0;
    }
    return area;
  }

  std::string to_csv() const {
    std::string out = "threshold,fa,fr\n";
    for (const auto& p : points) {
      out += format_real(p.threshold) + "," + format_real(p.fa) + "," + format_real(p.fr) + "\n";
    }
    return out;
  }
};

// Max keyword posterior over all full-context windows of one feature gram.
inline double clip_score(const ToyModel& model, const Gram& features,
                         std::size_t left = kLeftContext, std::size_t right = kRightContext) {
  const std::size_t n = window_count(features.rows(), left, right);
  if (n == 0) throw EmptyOutputError("clip is shorter than the context window");
  const std::size_t width = (left + right + 1) * features.cols();
  if (width != model.input_dim) {
    throw ShapeError("context window has " + std::to_string(width) +
                     " values, model expects " + std::to_string(model.input_dim));
  }
  double best = 0.0;
  for (std::size_t w = 0; w < n; ++w) {
    best = std::max(best,
                    keyword_posterior(model, features.flat().subspan(w * features.cols(), width)));
  }
  return best;
}

inline std::vector<double> clip_scores(const ToyModel& model, const FeatureFrontend& frontend,
                                       const std::vector<Gram>& energies) {
  std::vector<double> out;
  out.reserve(energies.size());
  for (const auto& e : energies) out.push_back(clip_score(model, frontend(e).values));
  return out;
}

inline RocCurve evaluate_roc(const ToyModel& model, const FeatureFrontend& frontend,
                             const std::vector<Gram>& energies,
                             const std::vector<Label>& labels) {
  return RocCurve::from_scores(clip_scores(model, frontend, energies), labels);
}

inline RocCurve evaluate_roc(const ToyModel& model, const FeatureFrontend& frontend,
                             const std::vector<LabeledClip>& clips,
                             const dsp::FrontendConfig& frontend_cfg = {}, unsigned jobs = 1) {
  std::vector<Label> labels;
  for (const auto& c : clips) labels.push_back(c.label);
  return evaluate_roc(model, frontend, clip_energies(clips, frontend_cfg, jobs), labels);
}

}  // namespace pcen::kws
