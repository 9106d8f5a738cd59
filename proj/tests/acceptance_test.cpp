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

// Acceptance suite: one PASS/FAIL line per criterion, with its measured
// value, tolerance and wall time. Exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "pcen/dsp/energy.hpp"
#include "pcen/frontend/params.hpp"
#include "pcen/frontend/params_io.hpp"
#include "pcen/frontend/pcen.hpp"
#include "pcen/frontend/smoothing.hpp"
#include "pcen/frontend/stream.hpp"
#include "pcen/graddsp/gradcheck.hpp"
#include "pcen/graddsp/trainable.hpp"
#include "pcen/kws/dataset.hpp"
#include "pcen/kws/features.hpp"
#include "pcen/kws/roc.hpp"
#include "pcen/kws/train.hpp"
#include "test_util.hpp"

namespace {

using namespace pcen;
using frontend::PcenParams;
using frontend::SmootherInit;
using testing::max_relative_diff;
using testing::random_gram;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

// 1. pcen_forward against the scalar-loop reference.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> a(0.5, 1.0), d(0.5, 3.0), r(0.2, 0.8), z(-2.0, 2.0);
  double worst = 0.0;
  for (std::uint64_t g = 0; g < 50; ++g) {
    const Gram e = random_gram(16, 8, 1000 + g);
    PcenParams p = PcenParams::fixed_defaults(8);
    testing::ReferencePcen ref{p.eps, p.alpha, p.delta, p.r, {0.025}, Gram(1, 8, 1.0)};
    if (g % 2 == 1) {
      for (std::size_t f = 0; f < 8; ++f) {
        p.alpha[f] = a(rng);
        p.delta[f] = d(rng);
        p.r[f] = r(rng);
      }
      frontend::SmootherBank bank{{0.015, 0.04, 0.08}, Gram(3, 8)};
      for (auto& v : bank.logits.flat()) v = z(rng);
      p.smoother = bank;
      ref = {p.eps, p.alpha, p.delta, p.r, bank.coefficients,
             testing::reference_softmax(bank.logits)};
    }
    if (g % 4 >= 2) {
      p.init = SmootherInit::kZero;
      ref.zero_init = true;
    }
    worst = std::max(worst, max_relative_diff(frontend::pcen_forward(e, p).values, ref(e)));
  }
  return {worst <= 1e-12, fmt("max relative error %.3g over 50 grams 16x8 (tol 1e-12)", worst)};
}

// 2. Finite-difference gradient check.
Outcome gradient_correctness() {
  double worst = 0.0;
  std::string worst_at;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (bool through : {true, false}) {
      const auto layer = graddsp::init_trainable(4, 2, seed);
      const Gram e = graddsp::seeded_check_gram(10, 4, seed);
      graddsp::GradCheckOptions opts;
      opts.through_smoother = through;
      const auto report = graddsp::finite_diff_check(layer, e, seed, opts);
      for (const auto& g : report.groups) {
        if (g.max_error > worst) {
          worst = g.max_error;
          worst_at = fmt("seed %llu %s %s", static_cast<unsigned long long>(seed),
                         through ? "through-smoother" : "direct", g.name.c_str());
        }
      }
    }
  }
  return {worst < 1e-5, fmt("max error %.3g at %s; 20 seeds x 2 modes x 5 groups (tol 1e-5)",
                            worst, worst_at.c_str())};
}

// 3. Gain invariance with alpha = 1, eps = 0.
Outcome gain_invariance() {
  const Gram e = random_gram(100, 8, 3);
  const PcenParams p = PcenParams::uniform(8, 1.0, 2.0, 0.5, 0.025, 0.0);
  const Gram base = frontend::pcen_forward(e, p).values;
  double worst = 0.0;
  for (double gain : {0.01, 0.1, 10.0, 100.0}) {
    Gram scaled = e;
    for (auto& v : scaled.flat()) v *= gain;
    worst = std::max(worst, max_relative_diff(frontend::pcen_forward(scaled, p).values, base));
  }
  return {worst <= 1e-9, fmt("max relative deviation %.3g for gains 0.01..100 (tol 1e-9)", worst)};
}

// 4. Unit-step time constant of s = 0.025.
Outcome time_constant() {
  const double target = 1.0 - 1.0 / std::exp(1.0);
  const Gram m = frontend::iir_smooth(Gram(100, 1, 1.0), 0.025, SmootherInit::kZero);
  std::size_t first = 0;
  while (first < m.rows() && m(first, 0) <= target) ++first;
  std::size_t closed = 0;
  while (1.0 - std::pow(0.975, static_cast<double>(closed + 1)) <= target) ++closed;
  return {first == 39 && closed == 39,
          fmt("first frame above 1-1/e: %zu (closed form %zu, expected 39)", first, closed)};
}

// 5. Streaming equals batch, bit for bit.
Outcome streaming_equals_batch() {
  const std::size_t F = 8;
  const Gram e = random_gram(200, F, 5);
  std::vector<PcenParams> modes(3, PcenParams::fixed_defaults(F));
  modes[1].smoother = frontend::PerChannelSmoother{frontend::alternating_coefficients(F)};
  frontend::SmootherBank bank{{0.015, 0.08}, Gram(2, F)};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> z(-2.0, 2.0);
  for (auto& v : bank.logits.flat()) v = z(rng);
  modes[2].smoother = bank;
  std::size_t mismatches = 0;
  for (const auto& p : modes) {
    const Gram batch = frontend::pcen_forward(e, p).values;
    auto stream = frontend::stream_init(p, F);
    for (std::size_t t = 0; t < e.rows(); ++t) {
      const auto y = frontend::stream_step(stream, e.row(t));
      for (std::size_t f = 0; f < F; ++f) mismatches += y[f] != batch(t, f);
    }
  }
  return {mismatches == 0,
          fmt("%zu differing bins over 200 frames x 3 smoother modes (need 0)", mismatches)};
}

// 6. One-hot alternating bank equals per-channel alternating smoothers.
Outcome two_smoother_reduction() {
  const std::size_t F = 40;
  const Gram e = random_gram(200, F, 6);
  PcenParams per_channel = PcenParams::fixed_defaults(F);
  per_channel.smoother = frontend::PerChannelSmoother{frontend::alternating_coefficients(F)};
  PcenParams bank = per_channel;
  frontend::SmootherBank b{{0.015, 0.08}, Gram(2, F, 0.0)};
  for (std::size_t f = 0; f < F; ++f) b.logits(f % 2, f) = 1000.0;
  bank.smoother = b;
  const Gram x = frontend::pcen_forward(e, per_channel).values;
  const Gram y = frontend::pcen_forward(e, bank).values;
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mismatches += x.flat()[i] != y.flat()[i];
  return {mismatches == 0, fmt("%zu differing bins, one-hot bank vs alternating 0.015/0.08",
                               mismatches)};
}

// 7. Feature change between -45 and -15 dBFS versions of the same clips.
// Steady state: frames at or after one smoother time constant (index >= 40).
Outcome loudness_stability() {
  constexpr std::size_t kSteadyFrom = 40;
  kws::SynthConfig cfg;
  cfg.clip_seconds = 1.0;
  const auto clips = kws::synth_dataset(20, 77, 16000, cfg);
  const auto quiet = kws::clip_energies(kws::at_level(clips, -45.0), {});
  const auto loud = kws::clip_energies(kws::at_level(clips, -15.0), {});
  const auto pcen = kws::FeatureFrontend::pcen_with(PcenParams::fixed_defaults(40));
  const auto logmel = kws::FeatureFrontend::log_mel(0.1, frontend::LogMode::kStabilized);
  double d_pcen = 0.0, d_log = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const Gram pq = pcen(quiet[i]).values, pl = pcen(loud[i]).values;
    const Gram lq = logmel(quiet[i]).values, ll = logmel(loud[i]).values;
    for (std::size_t t = kSteadyFrom; t < pq.rows(); ++t) {
      for (std::size_t f = 0; f < pq.cols(); ++f) {
        d_pcen += std::abs(pq(t, f) - pl(t, f));
        d_log += std::abs(lq(t, f) - ll(t, f));
        ++n;
      }
    }
  }
  d_pcen /= static_cast<double>(n);
  d_log /= static_cast<double>(n);
  const double ratio = d_pcen / d_log;
  return {ratio < 0.25, fmt("mean |dPCEN| %.4g, mean |dlog-mel| %.4g, ratio %.4g (need < 0.25)",
                            d_pcen, d_log, ratio)};
}

// 8. Directional ROC ordering on the synthetic benchmark.
//
// Training: 100 clips per class at -30 dBFS (single loudness) or the same
// clips rescaled uniformly in [-45, -15] dBFS (multi loudness). Evaluation:
// 100 fresh clips per class, each at -50 and at -10 dBFS. Fixed frontends
// train for bootstrap + joint epochs so every model gets the same number of
// passes over the data.
Outcome roc_ordering() {
  constexpr std::size_t kBootstrap = 5, kJoint = 10;
  const auto train = kws::synth_dataset(100, 1);
  const auto eval_clips = kws::synth_dataset(100, 2);
  auto mismatched = kws::at_level(eval_clips, -50.0);
  const auto loud = kws::at_level(eval_clips, -10.0);
  mismatched.insert(mismatched.end(), loud.begin(), loud.end());
  const auto e_eval = kws::clip_energies(mismatched, {});
  const auto l_eval = kws::labels_of(mismatched);

  std::string detail;
  double fr[2][3];
  for (int bench = 0; bench < 2; ++bench) {
    const auto set = bench == 0 ? train : kws::multi_loudness(train, 11);
    const auto e_train = kws::clip_energies(set, {});
    const auto l_train = kws::labels_of(set);
    int m = 0;
    for (auto mode : {kws::FrontendMode::kLogMel, kws::FrontendMode::kFixedPcen,
                      kws::FrontendMode::kTrainablePcen}) {
      kws::TrainConfig cfg;
      cfg.mode = mode;
      cfg.lr = 0.01;
      cfg.seed = 3;
      cfg.window_stride = 2;
      cfg.bootstrap_epochs = kBootstrap;
      cfg.epochs = mode == kws::FrontendMode::kTrainablePcen ? kJoint : kBootstrap + kJoint;
      const auto result = kws::train_on_energies(e_train, l_train, cfg);
      fr[bench][m++] =
          kws::evaluate_roc(result.model, result.frontend(), e_eval, l_eval).fr_at_fa(0.05);
    }
    detail += fmt("%s FR@FA=5%%: log-mel %.3f, fixed %.3f, trained %.3f; ",
                  bench == 0 ? "single-loudness" : "multi-loudness", fr[bench][0], fr[bench][1],
                  fr[bench][2]);
  }
  const bool single_ok = fr[0][2] <= fr[0][1] && fr[0][1] <= fr[0][0];
  const bool multi_ok = fr[1][2] < fr[1][1];
  detail += single_ok ? "single ordering holds" : "single ordering VIOLATED";
  detail += multi_ok ? ", multi margin > 0" : ", multi margin NOT positive";
  return {single_ok && multi_ok, detail};
}

// 9. Initialization statistics.
Outcome init_statistics() {
  const std::size_t F = 4000, K = 2;
  const auto layer = graddsp::init_trainable(F, K, 2024);
  const auto alpha = layer.alpha();
  double mean = 0.0;
  for (double a : alpha) mean += a;
  mean /= static_cast<double>(F);
  double var = 0.0;
  for (double a : alpha) var += (a - mean) * (a - mean);
  const double sd = std::sqrt(var / static_cast<double>(F - 1));
  double zmean = 0.0;
  for (double v : layer.z.flat()) zmean += v;
  zmean /= static_cast<double>(layer.z.size());
  const double zt = std::log(1.0 / K);
  const bool ok = std::abs(mean - 1.0) <= 0.01 && std::abs(sd - 0.1) <= 0.01 &&
                  std::abs(zmean - zt) <= 0.01;
  return {ok, fmt("alpha mean %.4f sd %.4f (1 +- 0.01, 0.1 +- 0.01); z mean %.4f (%.4f +- 0.01)",
                  mean, sd, zmean, zt)};
}

// 10. Freeze -> serialize -> load -> fixed frontend.
Outcome freeze_fidelity() {
  double worst = 0.0;
  std::size_t per_channel = 0;
  for (std::uint64_t g = 0; g < 20; ++g) {
    auto layer = graddsp::init_trainable(8, 2, 500 + g);
    if (g % 2 == 1) {
      for (std::size_t f = 0; f < 8; ++f) {
        layer.z(0, f) = (f % 2 == 0) ? 1000.0 : 0.0;
        layer.z(1, f) = (f % 2 == 0) ? 0.0 : 1000.0;
      }
    }
    const Gram e = random_gram(50, 8, 600 + g);
    const auto loaded = frontend::parse_params(frontend::serialize_params(graddsp::freeze(layer)));
    per_channel += std::holds_alternative<frontend::PerChannelSmoother>(loaded.smoother);
    const Gram expect = graddsp::trainable_forward(e, layer).first.values;
    worst = std::max(worst, max_relative_diff(frontend::pcen_forward(e, loaded).values, expect));
  }
  return {worst <= 1e-12 && per_channel == 10,
          fmt("max relative error %.3g over 20 grams (tol 1e-12); %zu exported as per-channel",
              worst, per_channel)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 1.0, oracle_equivalence},
      {2, "gradient correctness", 10.0, gradient_correctness},
      {3, "gain invariance", 1.0, gain_invariance},
      {4, "time constant", 1.0, time_constant},
      {5, "streaming equals batch", 1.0, streaming_equals_batch},
      {6, "two-smoother reduction", 1.0, two_smoother_reduction},
      {7, "loudness stability", 5.0, loudness_stability},
      {8, "ROC ordering", 300.0, roc_ordering},
      {9, "initialization statistics", 5.0, init_statistics},
      {10, "freeze fidelity", 5.0, freeze_fidelity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < c.budget_seconds;
    const bool pass = o.pass && in_budget;
    failures += !pass;
    std::printf("[%s] AC%-2d %-26s %s [%.2f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs, c.budget_seconds,
                in_budget ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
