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

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pcen/errors.hpp"
#include "pcen/frontend/feature_gram.hpp"
#include "pcen/frontend/params.hpp"
#include "pcen/frontend/pcen.hpp"
#include "pcen/frontend/smoothing.hpp"
#include "pcen/matrix.hpp"

namespace pcen::graddsp {

using frontend::FeatureGram;
using frontend::PcenParams;
using frontend::SmootherInit;

// PCEN layer with per-channel parameters held in unconstrained form:
// alpha = exp(log_alpha), delta = exp(log_delta), r = exp(log_r), and smoother
// weights softmax(z) over fixed coefficients. The parameters are leaves; they
// do not depend on the input.
struct TrainablePcen {
  std::vector<double> log_alpha;
  std::vector<double> log_delta;
  std::vector<double> log_r;
  Gram z;  // K x F
  std::vector<double> smoother_coefficients;
  double eps = 1e-6;
  SmootherInit init = SmootherInit::kFirstFrame;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;

  std::size_t channels() const noexcept { return log_alpha.size(); }
  std::size_t smoothers() const noexcept { return smoother_coefficients.size(); }

  std::vector<double> alpha() const { return exp_of(log_alpha); }
  std::vector<double> delta() const { return exp_of(log_delta); }
  std::vector<double> r() const { return exp_of(log_r); }

  void validate() const {
    const std::size_t f = channels();
    if (f == 0) throw ParameterError("trainable layer has no channels");
    if (log_delta.size() != f || log_r.size() != f) {
      throw ShapeError("trainable layer parameter vectors differ in length");
    }
    if (smoother_coefficients.empty()) {
      throw ParameterError("trainable layer needs K >= 1 smoothers");
    }
    for (double s : smoother_coefficients) frontend::validate_coefficient(s);
    if (z.rows() != smoothers() || z.cols() != f) {
      throw ShapeError("logits must be K x F");
    }
  }

  // Parameters only; bookkeeping (seed, steps) is ignored.
  bool same_parameters(const TrainablePcen& o) const {
    return log_alpha == o.log_alpha && log_delta == o.log_delta &&
           log_r == o.log_r && z == o.z &&
           smoother_coefficients == o.smoother_coefficients && eps == o.eps &&
           init == o.init;
  }

 private:
  static std::vector<double> exp_of(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::exp(v[i]);
    return out;
  }
};

// Coefficients for K predetermined smoothers: the slow/fast pair for K = 2,
// {0.015, 0.02, 0.04, 0.08} for K = 4, otherwise geometric spacing over
// [0.015, 0.08]; K = 1 uses 0.025.
inline std::vector<double> default_smoother_coefficients(std::size_t k_count) {
  if (k_count == 1) return {0.025};
  if (k_count == 2) return {0.015, 0.08};
  if (k_count == 4) return {0.015, 0.02, 0.04, 0.08};
  std::vector<double> out(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    out[k] = 0.015 * std::pow(0.08 / 0.015, static_cast<double>(k) / (k_count - 1));
  }
  return out;
}

// alpha, delta, r ~ Normal(1.0, 0.1) per channel (non-positive draws are
// redrawn) stored as logs; z ~ Normal(log(1/K), 0.1).
inline TrainablePcen init_trainable(std::size_t channels, std::size_t k_count,
                                    std::uint64_t seed) {
  if (channels < 1 || k_count < 1) {
    throw ParameterError("init_trainable needs F >= 1 and K >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> positive(1.0, 0.1);
  auto draw_log = [&] {
    double v = positive(rng);
    while (!(v > 0.0)) v = positive(rng);
    return std::log(v);
  };
  TrainablePcen layer;
  layer.seed = seed;
  layer.log_alpha.resize(channels);
  layer.log_delta.resize(channels);
  layer.log_r.resize(channels);
  for (auto& v : layer.log_alpha) v = draw_log();
  for (auto& v : layer.log_delta) v = draw_log();
  for (auto& v : layer.log_r) v = draw_log();
  std::normal_distribution<double> logit(std::log(1.0 / static_cast<double>(k_count)), 0.1);
  layer.z = Gram(k_count, channels);
  for (auto& v : layer.z.flat()) v = logit(rng);
  layer.smoother_coefficients = default_smoother_coefficients(k_count);
  return layer;
}

// Everything the backward pass reads.
struct ForwardCache {
  Gram energies;
  std::vector<Gram> smoothed;  // M_k, one T x F gram per coefficient
  Gram combined;               // M
  Gram weights;                // softmax(z), K x F
  Gram ratio;                  // E / (eps + M)^alpha
  Gram pre_root;               // ratio + delta
  std::vector<double> alpha, delta, r;
  std::vector<double> coefficients;
  double eps = 0.0;
  SmootherInit init = SmootherInit::kFirstFrame;
};

inline std::pair<FeatureGram, ForwardCache> trainable_forward(
    const Gram& energies, const TrainablePcen& layer) {
  layer.validate();
  if (energies.cols() != layer.channels()) {
    throw ShapeError("energies have " + std::to_string(energies.cols()) +
                     " channels, layer has " + std::to_string(layer.channels()));
  }
  frontend::validate_energies(energies);
  ForwardCache c;
  c.energies = energies;
  c.alpha = layer.alpha();
  c.delta = layer.delta();
  c.r = layer.r();
  c.coefficients = layer.smoother_coefficients;
  c.eps = layer.eps;
  c.init = layer.init;
  for (double s : layer.smoother_coefficients) {
    c.smoothed.push_back(frontend::iir_smooth(energies, s, layer.init));
  }
  c.weights = frontend::softmax_weights(layer.z);
  c.combined = frontend::mix_smoothed(c.smoothed, c.weights);

  const std::size_t rows = energies.rows();
  const std::size_t cols = energies.cols();
  c.ratio = Gram(rows, cols);
  c.pre_root = Gram(rows, cols);
  FeatureGram out{Gram(rows, cols), frontend::FeatureKind::kPcen};
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t f = 0; f < cols; ++f) {
      const double q = energies(t, f) / std::pow(c.eps + c.combined(t, f), c.alpha[f]);
      const double u = q + c.delta[f];
      c.ratio(t, f) = q;
      c.pre_root(t, f) = u;
      out.values(t, f) = std::pow(u, c.r[f]) - std::pow(c.delta[f], c.r[f]);
    }
  }
  return {std::move(out), std::move(c)};
}

// Gradients of a scalar loss in the unconstrained parameter domains.
struct GradBundle {
  std::vector<double> d_log_alpha;
  std::vector<double> d_log_delta;
  std::vector<double> d_log_r;
  Gram d_z;
  Gram d_energies;  // empty when not requested

  static GradBundle zeros(std::size_t channels, std::size_t k_count) {
    GradBundle g;
    g.d_log_alpha.assign(channels, 0.0);
    g.d_log_delta.assign(channels, 0.0);
    g.d_log_r.assign(channels, 0.0);
    g.d_z = Gram(k_count, channels, 0.0);
    return g;
  }

  // Summation for data-parallel accumulation. Serial accumulation in a fixed
  // order is bit-deterministic; parallel reduction is only associative up to
  // floating-point reordering.
  GradBundle& operator+=(const GradBundle& o) {
    auto add = [](std::vector<double>& a, const std::vector<double>& b) {
      if (a.size() != b.size()) throw ShapeError("gradient size mismatch");
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    };
    add(d_log_alpha, o.d_log_alpha);
    add(d_log_delta, o.d_log_delta);
    add(d_log_r, o.d_log_r);
    require_same_shape(d_z, o.d_z, "GradBundle d_z");
    for (std::size_t i = 0; i < d_z.size(); ++i) d_z.flat()[i] += o.d_z.flat()[i];
    if (!o.d_energies.empty()) {
      if (d_energies.empty()) {
        d_energies = o.d_energies;
      } else {
        require_same_shape(d_energies, o.d_energies, "GradBundle d_energies");
        for (std::size_t i = 0; i < d_energies.size(); ++i) {
          d_energies.flat()[i] += o.d_energies.flat()[i];
        }
      }
    }
    return *this;
  }

  bool all_finite() const {
    auto ok = [](std::span<const double> v) {
      for (double x : v) {
        if (!std::isfinite(x)) return false;
      }
      return true;
    };
    return ok(d_log_alpha) && ok(d_log_delta) && ok(d_log_r) && ok(d_z.flat()) &&
           ok(d_energies.flat());
  }
};

struct BackwardOptions {
  // Produce d_energies at all.
  bool energy_gradient = true;
  // Propagate d_energies through the IIR recursion (a reverse scan over
  // time). When false, M is treated as a constant and only the direct path
  // through the numerator of the ratio contributes.
  bool through_smoother = true;
};

inline GradBundle trainable_backward(const ForwardCache& c, const Gram& upstream,
                                     const BackwardOptions& options = {}) {
  require_same_shape(c.energies, upstream, "trainable_backward upstream");
  const std::size_t rows = c.energies.rows();
  const std::size_t cols = c.energies.cols();
  const std::size_t k_count = c.coefficients.size();
  GradBundle g = GradBundle::zeros(cols, k_count);
  Gram d_combined(rows, cols, 0.0);
  if (options.energy_gradient) g.d_energies = Gram(rows, cols, 0.0);

  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t f = 0; f < cols; ++f) {
      const double up = upstream(t, f);
      if (up == 0.0) continue;
      const double alpha = c.alpha[f];
      const double delta = c.delta[f];
      const double r = c.r[f];
      const double q = c.ratio(t, f);
      const double u = c.pre_root(t, f);
      const double denom = c.eps + c.combined(t, f);
      const double dy_dq = r * std::pow(u, r - 1.0);
      const double g_q = up * dy_dq;
      // Each partial is multiplied by the parameter itself for the log domain.
      g.d_log_alpha[f] += g_q * (-q * std::log(denom)) * alpha;
      g.d_log_delta[f] += up * (dy_dq - r * std::pow(delta, r - 1.0)) * delta;
      g.d_log_r[f] += up * (std::pow(u, r) * std::log(u) -
                            std::pow(delta, r) * std::log(delta)) * r;
      d_combined(t, f) = g_q * (-alpha * q / denom);
      if (options.energy_gradient) {
        g.d_energies(t, f) = g_q * std::pow(denom, -alpha);
      }
    }
  }

  // Softmax: dL/dz_j = w_j (dL/dw_j - sum_k w_k dL/dw_k), dL/dw_k = sum_t gM M_k.
  std::vector<double> d_w(k_count);
  for (std::size_t f = 0; f < cols; ++f) {
    double mean = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      double acc = 0.0;
      for (std::size_t t = 0; t < rows; ++t) acc += d_combined(t, f) * c.smoothed[k](t, f);
      d_w[k] = acc;
      mean += c.weights(k, f) * acc;
    }
    for (std::size_t k = 0; k < k_count; ++k) {
      g.d_z(k, f) = c.weights(k, f) * (d_w[k] - mean);
    }
  }

  if (options.energy_gradient && options.through_smoother && rows > 0) {
    for (std::size_t k = 0; k < k_count; ++k) {
      const double s = c.coefficients[k];
      for (std::size_t f = 0; f < cols; ++f) {
        const double w = c.weights(k, f);
        double adjoint = 0.0;
        for (std::size_t t = rows; t-- > 0;) {
          adjoint = w * d_combined(t, f) + (1.0 - s) * adjoint;
          const bool seeded = t == 0 && c.init == SmootherInit::kFirstFrame;
          g.d_energies(t, f) += seeded ? adjoint : s * adjoint;
        }
      }
    }
  }
  return g;
}

// p <- p - lr * g on every unconstrained parameter. Positivity of the
// effective parameters and the simplex constraint on the weights hold by
// construction.
inline TrainablePcen sgd_step(const TrainablePcen& layer, const GradBundle& grads,
                              double lr) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) {
    throw ParameterError("learning rate must be finite and >= 0");
  }
  if (!grads.all_finite()) {
    throw TrainingError("non-finite gradient passed to sgd_step");
  }
  TrainablePcen out = layer;
  auto apply = [lr](std::vector<double>& p, const std::vector<double>& g) {
    if (p.size() != g.size()) throw ShapeError("gradient size mismatch in sgd_step");
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
  };
  apply(out.log_alpha, grads.d_log_alpha);
  apply(out.log_delta, grads.d_log_delta);
  apply(out.log_r, grads.d_log_r);
  require_same_shape(out.z, grads.d_z, "sgd_step logits");
  for (std::size_t i = 0; i < out.z.size(); ++i) out.z.flat()[i] -= lr * grads.d_z.flat()[i];
  return out;
}

struct FreezeOptions {
  // A channel counts as one-hot when its largest weight is >= 1 - tolerance.
  double one_hot_tolerance = 1e-6;
};

// Exports the effective parameters for the fixed frontend. When every
// channel's smoother weights are one-hot the bank collapses to one
// per-channel coefficient vector.
inline PcenParams freeze(const TrainablePcen& layer, const FreezeOptions& options = {}) {
  layer.validate();
  PcenParams p;
  p.eps = layer.eps;
  p.init = layer.init;
  p.alpha = layer.alpha();
  p.delta = layer.delta();
  p.r = layer.r();
  const Gram w = frontend::softmax_weights(layer.z);
  std::vector<double> chosen(layer.channels());
  bool one_hot = true;
  for (std::size_t f = 0; f < layer.channels() && one_hot; ++f) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < layer.smoothers(); ++k) {
      if (w(k, f) > w(best, f)) best = k;
    }
    one_hot = w(best, f) >= 1.0 - options.one_hot_tolerance;
    chosen[f] = layer.smoother_coefficients[best];
  }
  if (one_hot) {
    p.smoother = frontend::PerChannelSmoother{std::move(chosen)};
  } else {
    p.smoother = frontend::SmootherBank{layer.smoother_coefficients, layer.z};
  }
  return p;
}

}  // namespace pcen::graddsp
