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
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pcen/errors.hpp"
#include "pcen/keyvalue.hpp"

namespace pcen::kws {

// One hidden ReLU layer and a 2-way softmax output. Class 1 is the keyword.
struct ToyModel {
  std::size_t input_dim = 0;
  std::size_t hidden = 64;
  std::vector<double> w1;  // hidden x input_dim
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // 2 x hidden
  std::vector<double> b2;  // 2

  static ToyModel init(std::size_t input_dim, std::size_t hidden, std::uint64_t seed) {
    if (input_dim == 0 || hidden == 0) throw ParameterError("model dimensions must be >= 1");
    ToyModel m;
    m.input_dim = input_dim;
    m.hidden = hidden;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g1(0.0, std::sqrt(2.0 / static_cast<double>(input_dim)));
    std::normal_distribution<double> g2(0.0, std::sqrt(1.0 / static_cast<double>(hidden)));
    m.w1.resize(hidden * input_dim);
    for (auto& v : m.w1) v = g1(rng);
    m.b1.assign(hidden, 0.0);
    m.w2.resize(2 * hidden);
    for (auto& v : m.w2) v = g2(rng);
    m.b2.assign(2, 0.0);
    return m;
  }

  std::size_t parameter_count() const { return w1.size() + b1.size() + w2.size() + b2.size(); }

  bool all_finite() const {
    for (const auto* v : {&w1, &b1, &w2, &b2}) {
      for (double x : *v) {
        if (!std::isfinite(x)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const ToyModel&, const ToyModel&) = default;
};

// Activations kept for the backward pass.
struct ModelActivations {
  std::vector<double> hidden;
  std::array<double, 2> probs{};
};

inline std::array<double, 2> softmax2(double a, double b) {
  const double m = std::max(a, b);
  const double ea = std::exp(a - m);
  const double eb = std::exp(b - m);
  return {ea / (ea + eb), eb / (ea + eb)};
}

inline ModelActivations model_forward(const ToyModel& m, std::span<const double> x) {
  if (x.size() != m.input_dim) {
    throw ShapeError("model input has " + std::to_string(x.size()) + " values, expected " +
                     std::to_string(m.input_dim));
  }
  ModelActivations a;
  a.hidden.resize(m.hidden);
  for (std::size_t h = 0; h < m.hidden; ++h) {
    const double* w = m.w1.data() + h * m.input_dim;
    double acc = m.b1[h];
    for (std::size_t i = 0; i < m.input_dim; ++i) acc += w[i] * x[i];
    a.hidden[h] = acc > 0.0 ? acc : 0.0;
  }
  double logit[2];
  for (std::size_t c = 0; c < 2; ++c) {
    const double* w = m.w2.data() + c * m.hidden;
    double acc = m.b2[c];
    for (std::size_t h = 0; h < m.hidden; ++h) acc += w[h] * a.hidden[h];
    logit[c] = acc;
  }
  a.probs = softmax2(logit[0], logit[1]);
  return a;
}

inline double keyword_posterior(const ToyModel& m, std::span<const double> x) {
  return model_forward(m, x).probs[1];
}

inline double cross_entropy(const ModelActivations& a, int label) {
  return -std::log(std::max(a.probs[static_cast<std::size_t>(label)], 1e-300));
}

// Gradient accumulator with the model's shapes.
struct ModelGrad {
  std::vector<double> w1, b1, w2, b2;

  static ModelGrad zeros_like(const ToyModel& m) {
    return {std::vector<double>(m.w1.size(), 0.0), std::vector<double>(m.b1.size(), 0.0),
            std::vector<double>(m.w2.size(), 0.0), std::vector<double>(m.b2.size(), 0.0)};
  }
};

// Accumulates scale * d(cross-entropy)/d(params) into grad and, when d_input
// is non-empty, scale * d(cross-entropy)/d(input) into d_input.
inline void model_backward(const ToyModel& m, std::span<const double> x,
                           const ModelActivations& a, int label, double scale, ModelGrad& grad,
                           std::span<double> d_input = {}) {
  double d_logit[2] = {a.probs[0] * scale, a.probs[1] * scale};
  d_logit[label] -= scale;
  std::vector<double> d_hidden(m.hidden, 0.0);
  for (std::size_t c = 0; c < 2; ++c) {
    grad.b2[c] += d_logit[c];
    double* gw = grad.w2.data() + c * m.hidden;
    const double* w = m.w2.data() + c * m.hidden;
    for (std::size_t h = 0; h < m.hidden; ++h) {
      gw[h] += d_logit[c] * a.hidden[h];
      d_hidden[h] += d_logit[c] * w[h];
    }
  }
  for (std::size_t h = 0; h < m.hidden; ++h) {
    if (a.hidden[h] <= 0.0) continue;
    const double d = d_hidden[h];
    grad.b1[h] += d;
    double* gw = grad.w1.data() + h * m.input_dim;
    for (std::size_t i = 0; i < m.input_dim; ++i) gw[i] += d * x[i];
    if (!d_input.empty()) {
      const double* w = m.w1.data() + h * m.input_dim;
      for (std::size_t i = 0; i < m.input_dim; ++i) d_input[i] += d * w[i];
    }
  }
}

inline void apply_sgd(ToyModel& m, const ModelGrad& g, double lr) {
  auto step = [lr](std::vector<double>& p, const std::vector<double>& d) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * d[i];
  };
  step(m.w1, g.w1);
  step(m.b1, g.b1);
  step(m.w2, g.w2);
  step(m.b2, g.b2);
}

inline KeyValueDoc model_to_doc(const ToyModel& m) {
  KeyValueDoc doc;
  doc.set("format", "toy-model");
  doc.set_integer("version", 1);
  doc.set_integer("input_dim", static_cast<std::int64_t>(m.input_dim));
  doc.set_integer("hidden", static_cast<std::int64_t>(m.hidden));
  doc.set_reals("w1", m.w1);
  doc.set_reals("b1", m.b1);
  doc.set_reals("w2", m.w2);
  doc.set_reals("b2", m.b2);
  return doc;
}

inline ToyModel model_from_doc(const KeyValueDoc& doc) {
  if (doc.get("format") != "toy-model") throw ParseError("not a toy-model document");
  if (doc.get_integer("version") != 1) throw ParseError("unsupported toy-model version");
  ToyModel m;
  m.input_dim = static_cast<std::size_t>(doc.get_integer("input_dim"));
  m.hidden = static_cast<std::size_t>(doc.get_integer("hidden"));
  m.w1 = doc.get_reals("w1", m.hidden * m.input_dim);
  m.b1 = doc.get_reals("b1", m.hidden);
  m.w2 = doc.get_reals("w2", 2 * m.hidden);
  m.b2 = doc.get_reals("b2", 2);
  return m;
}

}  // namespace pcen::kws
