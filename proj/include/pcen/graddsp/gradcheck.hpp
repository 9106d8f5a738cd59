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
#include <cstdint>
#include <functional>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pcen/frontend/pcen.hpp"
#include "pcen/graddsp/trainable.hpp"
#include "pcen/keyvalue.hpp"
#include "pcen/matrix.hpp"

namespace pcen::graddsp {

struct GradCheckOptions {
  double step = 1e-6;
  // Matches BackwardOptions::through_smoother. When false the numerical
  // energy derivative holds M fixed, mirroring the analytic path.
  bool through_smoother = true;
  // Replace the random loss weights by zeros.
  bool zero_upstream = false;
  // Applied to the analytic gradients before comparison. Used for negative
  // controls.
  std::function<void(GradBundle&)> tamper;
};

struct GroupError {
  std::string name;
  double max_error = 0.0;
  std::size_t worst_index = 0;
  std::size_t count = 0;
};

struct GradCheckReport {
  std::vector<GroupError> groups;

  bool passed(double tolerance = 1e-5) const {
    return std::all_of(groups.begin(), groups.end(),
                       [&](const GroupError& g) { return g.max_error < tolerance; });
  }

  double max_error() const {
    double m = 0.0;
    for (const auto& g : groups) m = std::max(m, g.max_error);
    return m;
  }

  std::string to_text(double tolerance = 1e-5) const {
    std::ostringstream os;
    os << "group        entries  max_error    worst  status\n";
    for (const auto& g : groups) {
      char line[128];
      std::snprintf(line, sizeof(line), "%-12s %7zu  %.3e  %6zu  %s\n",
                    g.name.c_str(), g.count, g.max_error, g.worst_index,
                    g.max_error < tolerance ? "ok" : "FAIL");
      os << line;
    }
    return os.str();
  }
};

// Relative error, falling back to absolute error when the analytic value is
// below 1e-8 in magnitude.
inline double gradient_error(double analytic, double numeric) {
  const double diff = std::abs(analytic - numeric);
  if (std::abs(analytic) < 1e-8) return diff;
  return diff / std::max(std::abs(analytic), std::abs(numeric));
}

namespace gradcheck_detail {

// sum(weights .* (a - b)), differenced per bin before summation so that the
// round-off scales with the perturbed bins rather than with the whole loss.
inline double weighted_difference(const Gram& a, const Gram& b, const Gram& weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += weights.flat()[i] * (a.flat()[i] - b.flat()[i]);
  }
  return acc;
}

inline Gram forward_values(const TrainablePcen& layer, const Gram& energies) {
  return trainable_forward(energies, layer).first.values;
}

// Features with M taken from `reference` energies rather than `energies`.
inline Gram features_fixed_smoother(const TrainablePcen& layer, const Gram& energies,
                                    const Gram& reference) {
  const ForwardCache c = trainable_forward(reference, layer).second;
  Gram y(energies.rows(), energies.cols());
  for (std::size_t t = 0; t < energies.rows(); ++t) {
    for (std::size_t f = 0; f < energies.cols(); ++f) {
      y(t, f) = frontend::pcen_bin(energies(t, f), c.combined(t, f), c.eps, c.alpha[f],
                                   c.delta[f], c.r[f]);
    }
  }
  return y;
}

}  // namespace gradcheck_detail

// Seeded T x F energy gram, log-uniform in [0.1, 10]. The canonical input
// for gradient checks: a realistic dynamic range keeps the loss magnitude,
// and with it the finite-difference round-off, small.
inline Gram seeded_check_gram(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  Gram g(rows, cols);
  for (auto& v : g.flat()) v = std::exp(u(rng));
  return g;
}

// Compares trainable_backward against central differences of a seeded random
// linear loss sum(c .* features), group by group.
inline GradCheckReport finite_diff_check(const TrainablePcen& layer,
                                         const Gram& energies, std::uint64_t seed,
                                         const GradCheckOptions& options = {}) {
  using namespace gradcheck_detail;
  Gram weights(energies.rows(), energies.cols(), 0.0);
  if (!options.zero_upstream) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : weights.flat()) v = u(rng);
  }

  const ForwardCache cache = trainable_forward(energies, layer).second;
  BackwardOptions bopts;
  bopts.energy_gradient = true;
  bopts.through_smoother = options.through_smoother;
  GradBundle analytic = trainable_backward(cache, weights, bopts);
  if (options.tamper) options.tamper(analytic);

  const double h = options.step;
  GradCheckReport report;
  auto check_vector = [&](const char* name, std::vector<double> TrainablePcen::*member,
                          const std::vector<double>& grad) {
    GroupError ge{name};
    ge.count = grad.size();
    for (std::size_t i = 0; i < grad.size(); ++i) {
      TrainablePcen plus = layer;
      TrainablePcen minus = layer;
      (plus.*member)[i] += h;
      (minus.*member)[i] -= h;
      const double numeric =
          weighted_difference(forward_values(plus, energies), forward_values(minus, energies),
                              weights) /
          (2.0 * h);
      const double err = gradient_error(grad[i], numeric);
      if (err > ge.max_error) {
        ge.max_error = err;
        ge.worst_index = i;
      }
    }
    report.groups.push_back(ge);
  };
  check_vector("log_alpha", &TrainablePcen::log_alpha, analytic.d_log_alpha);
  check_vector("log_delta", &TrainablePcen::log_delta, analytic.d_log_delta);
  check_vector("log_r", &TrainablePcen::log_r, analytic.d_log_r);

  {
    GroupError ge{"z"};
    ge.count = layer.z.size();
    for (std::size_t i = 0; i < layer.z.size(); ++i) {
      TrainablePcen plus = layer;
      TrainablePcen minus = layer;
      plus.z.flat()[i] += h;
      minus.z.flat()[i] -= h;
      const double numeric =
          weighted_difference(forward_values(plus, energies), forward_values(minus, energies),
                              weights) /
          (2.0 * h);
      const double err = gradient_error(analytic.d_z.flat()[i], numeric);
      if (err > ge.max_error) {
        ge.max_error = err;
        ge.worst_index = i;
      }
    }
    report.groups.push_back(ge);
  }

  {
    GroupError ge{"energies"};
    ge.count = energies.size();
    for (std::size_t i = 0; i < energies.size(); ++i) {
      Gram plus = energies;
      Gram minus = energies;
      plus.flat()[i] += h;
      minus.flat()[i] -= h;
      const double numeric =
          options.through_smoother
              ? weighted_difference(forward_values(layer, plus), forward_values(layer, minus),
                                    weights) /
                    (2.0 * h)
              : weighted_difference(features_fixed_smoother(layer, plus, energies),
                                    features_fixed_smoother(layer, minus, energies),
                                    weights) /
                    (2.0 * h);
      const double err = gradient_error(analytic.d_energies.flat()[i], numeric);
      if (err > ge.max_error) {
        ge.max_error = err;
        ge.worst_index = i;
      }
    }
    report.groups.push_back(ge);
  }
  return report;
}

}  // namespace pcen::graddsp
