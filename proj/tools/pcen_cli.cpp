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

// Command-line front end: feature extraction, feature comparison, gradient
// checking, synthetic data generation, keyword-spotter training/evaluation
// and parameter inspection.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcen/dsp/energy.hpp"
#include "pcen/dsp/wav.hpp"
#include "pcen/errors.hpp"
#include "pcen/frontend/params_io.hpp"
#include "pcen/frontend/pcen.hpp"
#include "pcen/frontend/smoothing.hpp"
#include "pcen/graddsp/checkpoint.hpp"
#include "pcen/graddsp/gradcheck.hpp"
#include "pcen/graddsp/trainable.hpp"
#include "pcen/gram_io.hpp"
#include "pcen/keyvalue.hpp"
#include "pcen/kws/dataset.hpp"
#include "pcen/kws/features.hpp"
#include "pcen/kws/manifest.hpp"
#include "pcen/kws/model_io.hpp"
#include "pcen/kws/roc.hpp"
#include "pcen/kws/train.hpp"

namespace {

using namespace pcen;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

enum class GramFormat { kFgrm, kEgrm, kCsv };

GramFormat format_for(const std::string& path, const std::string& override_name) {
  std::string name = override_name;
  if (name.empty()) {
    name = std::filesystem::path(path).extension().string();
    if (!name.empty()) name.erase(0, 1);
  }
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (name == "fgrm") return GramFormat::kFgrm;
  if (name == "egrm") return GramFormat::kEgrm;
  if (name == "csv") return GramFormat::kCsv;
  throw ConfigurationError("cannot infer the output format of '" + path +
                           "'; use a .fgrm, .egrm or .csv extension or --format");
}

void require_readable(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw IoError("cannot open '" + path + "'");
  }
}

// Loads any gram file; binary formats are recognized by magic, anything
// else is parsed as CSV.
Gram load_any_gram(const std::string& path) {
  require_readable(path);
  const auto bytes = dsp::read_binary_file(path);
  auto has_magic = [&](const char* m) {
    return bytes.size() >= 4 && std::equal(m, m + 4, bytes.begin());
  };
  if (has_magic("FGRM")) return decode_feature_gram(bytes).values;
  if (has_magic("EGRM")) return decode_energy_gram(bytes);
  return gram_from_csv(std::string(bytes.begin(), bytes.end()));
}

struct FrontendFlags {
  dsp::FrontendConfig cfg;

  void add(CLI::App* app) {
    app->add_option("--window-ms", cfg.window_ms, "analysis window length (ms)")
        ->capture_default_str();
    app->add_option("--hop-ms", cfg.hop_ms, "frame hop (ms)")->capture_default_str();
    app->add_option("--fft-size", cfg.fft_size, "FFT size, 0 = next power of two")
        ->capture_default_str();
    app->add_option("--n-mels", cfg.n_mels, "number of mel channels")->capture_default_str();
    app->add_option("--fmin", cfg.fmin_hz, "lowest mel edge (Hz)")->capture_default_str();
    app->add_option("--fmax", cfg.fmax_hz, "highest mel edge (Hz)")->capture_default_str();
  }
};

struct PcenFlags {
  std::string params_path;
  std::optional<double> alpha, delta, r, s, eps;
  bool zero_init = false;

  void add(CLI::App* app) {
    app->add_option("--params", params_path, "PCEN parameter file (pcen-params format)");
    app->add_option("--alpha", alpha, "AGC strength (default 0.98)");
    app->add_option("--delta", delta, "compression bias (default 2)");
    app->add_option("--r", r, "compression root (default 0.5)");
    app->add_option("--s", s, "smoother coefficient (default 0.025)");
    app->add_option("--eps", eps, "AGC floor (default 1e-6)");
    app->add_flag("--zero-init", zero_init, "start the smoother at s*E(0) instead of E(0)");
  }

  // Starts from --params or the fixed defaults and applies overrides.
  frontend::PcenParams resolve(std::size_t channels) const {
    frontend::PcenParams p;
    if (!params_path.empty()) {
      require_readable(params_path);
      p = frontend::load_params(params_path);
      if (p.channels() != channels) {
        throw ConfigurationError("parameter file has " + std::to_string(p.channels()) +
                                 " channels, frontend has " + std::to_string(channels));
      }
    } else {
      p = frontend::PcenParams::fixed_defaults(channels);
    }
    if (alpha) p.alpha.assign(channels, *alpha);
    if (delta) p.delta.assign(channels, *delta);
    if (r) p.r.assign(channels, *r);
    if (s) p.smoother = frontend::SingleSmoother{*s};
    if (eps) p.eps = *eps;
    if (zero_init) p.init = frontend::SmootherInit::kZero;
    p.validate(channels);
    return p;
  }
};

frontend::LogMode parse_log_mode(const std::string& s) {
  try {
    return kws::log_mode_from_string(s);
  } catch (const ParseError& e) {
    throw ConfigurationError(e.what());
  }
}

// ---- extract ---------------------------------------------------------------

struct ExtractArgs {
  std::string input, output, mode = "pcen", format, log = "stabilized";
  double offset = 0.1;
  FrontendFlags frontend;
  PcenFlags pcen;
};

int run_extract(const ExtractArgs& a) {
  require_readable(a.input);
  const dsp::AudioBuffer audio = dsp::read_wav(a.input);
  const GramFormat fmt = format_for(a.output, a.format);
  const dsp::EnergyGram energies = dsp::filterbank_energies(audio, a.frontend.cfg);
  const Gram& e = energies.values;

  std::vector<std::uint8_t> bytes;
  std::string text;
  if (a.mode == "energy") {
    if (fmt == GramFormat::kFgrm) throw ConfigurationError("energy output needs .egrm or .csv");
    if (fmt == GramFormat::kEgrm) bytes = encode_energy_gram(e);
    else text = gram_to_csv(e);
  } else {
    frontend::FeatureGram features;
    if (a.mode == "pcen") {
      features = frontend::pcen_forward(e, a.pcen.resolve(e.cols()));
    } else if (a.mode == "logmel") {
      features = frontend::log_mel(e, a.offset, parse_log_mode(a.log));
    } else {
      throw ConfigurationError("unknown mode '" + a.mode + "'");
    }
    if (fmt == GramFormat::kEgrm) throw ConfigurationError("feature output needs .fgrm or .csv");
    if (fmt == GramFormat::kFgrm) bytes = encode_feature_gram(features);
    else text = gram_to_csv(features.values);
  }
  if (fmt == GramFormat::kCsv) write_text_file(a.output, text);
  else dsp::write_binary_file(a.output, bytes);
  std::cout << "T=" << e.rows() << " F=" << e.cols() << " mode=" << a.mode << "\n";
  return kExitOk;
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
  std::string a, b;
  std::optional<double> tolerance;
  bool per_channel = false;
};

int run_compare(const CompareArgs& args) {
  const Gram a = load_any_gram(args.a);
  const Gram b = load_any_gram(args.b);
  require_same_shape(a, b, "compare");
  double max_abs = 0.0, sum_abs = 0.0, sum_sq = 0.0, max_rel = 0.0;
  std::vector<double> ch_max(a.cols(), 0.0), ch_mean(a.cols(), 0.0);
  for (std::size_t t = 0; t < a.rows(); ++t) {
    for (std::size_t f = 0; f < a.cols(); ++f) {
      const double d = std::abs(a(t, f) - b(t, f));
      const double scale = std::max(std::abs(a(t, f)), std::abs(b(t, f)));
      max_abs = std::max(max_abs, d);
      sum_abs += d;
      sum_sq += d * d;
      if (scale > 0.0) max_rel = std::max(max_rel, d / scale);
      ch_max[f] = std::max(ch_max[f], d);
      ch_mean[f] += d;
    }
  }
  const double n = static_cast<double>(std::max<std::size_t>(a.size(), 1));
  std::printf("shape %zux%zu\n", a.rows(), a.cols());
  std::printf("max_abs %.9g\nmean_abs %.9g\nrms %.9g\nmax_rel %.9g\n", max_abs, sum_abs / n,
              std::sqrt(sum_sq / n), max_rel);
  if (args.per_channel) {
    std::printf("channel max_abs mean_abs\n");
    for (std::size_t f = 0; f < a.cols(); ++f) {
      std::printf("%zu %.9g %.9g\n", f, ch_max[f],
                  ch_mean[f] / static_cast<double>(std::max<std::size_t>(a.rows(), 1)));
    }
  }
  if (args.tolerance && max_abs > *args.tolerance) {
    std::printf("FAIL max_abs %.9g > tolerance %.9g\n", max_abs, *args.tolerance);
    return kExitCheckFailed;
  }
  return kExitOk;
}

// ---- gradcheck -------------------------------------------------------------

struct GradcheckArgs {
  std::uint64_t seed = 0;
  std::size_t frames = 10, channels = 4, smoothers = 2;
  double tolerance = 1e-5;
  bool no_through_smoother = false, zero_init = false, corrupt = false;
};

int run_gradcheck(const GradcheckArgs& a) {
  if (a.frames < 1 || a.channels < 1 || a.smoothers < 1) {
    throw ConfigurationError("--frames, --channels and --smoothers must be >= 1");
  }
  auto layer = graddsp::init_trainable(a.channels, a.smoothers, a.seed);
  if (a.zero_init) layer.init = frontend::SmootherInit::kZero;
  const Gram energies = graddsp::seeded_check_gram(a.frames, a.channels, a.seed);
  graddsp::GradCheckOptions opts;
  opts.through_smoother = !a.no_through_smoother;
  if (a.corrupt) {
    opts.tamper = [](graddsp::GradBundle& g) { g.d_log_alpha[0] = 2.0 * g.d_log_alpha[0] + 1.0; };
  }
  const auto report = graddsp::finite_diff_check(layer, energies, a.seed, opts);
  std::cout << "gradcheck seed=" << a.seed << " T=" << a.frames << " F=" << a.channels
            << " K=" << a.smoothers << "\n"
            << report.to_text(a.tolerance);
  return report.passed(a.tolerance) ? kExitOk : kExitCheckFailed;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  std::size_t per_class = 50;
  std::uint64_t seed = 0;
  double level = -30.0;
  std::size_t loudness_copies = 0;
  double lo = -45.0, hi = -15.0;
  std::uint64_t loudness_seed = 1;
};

int run_synth(const SynthArgs& a) {
  kws::SynthConfig cfg;
  cfg.level_dbfs = a.level;
  auto clips = kws::synth_dataset(a.per_class, a.seed, 16000, cfg);
  if (a.loudness_copies > 0) {
    clips = kws::multi_loudness(clips, a.loudness_seed, a.loudness_copies, a.lo, a.hi);
  }
  const auto manifest = kws::write_dataset(a.out_dir, clips);
  std::cout << "wrote " << clips.size() << " clips, manifest " << manifest << "\n";
  return kExitOk;
}

// ---- train / eval ------------------------------------------------------------

struct TrainArgs {
  std::string manifest, mode = "trainable-pcen", model_out, layer_out, loss_out, log = "stabilized";
  kws::TrainConfig cfg;
  bool no_bootstrap = false;
  unsigned jobs = 1;
  FrontendFlags frontend;
  PcenFlags pcen;
};

std::vector<kws::LabeledClip> load_manifest_clips(const std::string& path) {
  require_readable(path);
  return kws::load_dataset(path);
}

int run_train(TrainArgs a) {
  const auto clips = load_manifest_clips(a.manifest);
  if (clips.empty()) throw TrainingError("manifest lists no clips");
  a.cfg.mode = kws::frontend_mode_from_string(a.mode);
  a.cfg.bootstrap = !a.no_bootstrap;
  a.cfg.log_mode = parse_log_mode(a.log);
  const auto energies = kws::clip_energies(clips, a.frontend.cfg, a.jobs);
  if (a.cfg.mode == kws::FrontendMode::kFixedPcen) {
    a.cfg.fixed_params = a.pcen.resolve(energies.front().cols());
  }
  if (a.cfg.mode == kws::FrontendMode::kTrainablePcen && a.layer_out.empty()) {
    throw ConfigurationError("trainable-pcen training needs --layer-out");
  }
  const auto result = kws::train_on_energies(energies, kws::labels_of(clips), a.cfg);
  write_text_file(a.model_out, kws::serialize_trained_model(result));
  if (result.layer) graddsp::save_checkpoint(a.layer_out, *result.layer);
  if (!a.loss_out.empty()) {
    std::string csv = "epoch,loss\n";
    for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
      csv += std::to_string(i) + "," + format_real(result.loss_history[i]) + "\n";
    }
    write_text_file(a.loss_out, csv);
  }
  std::cout << "mode=" << a.mode << " clips=" << clips.size()
            << " loss " << format_real(result.loss_history.front()) << " -> "
            << format_real(result.loss_history.back()) << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string manifest, model, layer, roc_out;
  std::vector<double> fa_targets{0.05};
  unsigned jobs = 1;
  FrontendFlags frontend;
};

int run_eval(const EvalArgs& a) {
  require_readable(a.model);
  std::optional<graddsp::TrainablePcen> layer;
  if (!a.layer.empty()) {
    require_readable(a.layer);
    layer = graddsp::load_checkpoint(a.layer);
  }
  const auto trained = kws::parse_trained_model(read_text_file(a.model), layer);
  const auto clips = load_manifest_clips(a.manifest);
  const auto roc = kws::evaluate_roc(trained.model, trained.frontend(), clips, a.frontend.cfg,
                                     a.jobs);
  if (!a.roc_out.empty()) write_text_file(a.roc_out, roc.to_csv());
  std::cout << "mode=" << kws::to_string(trained.mode) << " clips=" << clips.size()
            << " auc=" << format_real(roc.auc()) << "\n";
  for (double fa : a.fa_targets) {
    std::cout << "fr_at_fa " << format_real(fa) << " " << format_real(roc.fr_at_fa(fa)) << "\n";
  }
  return kExitOk;
}

// ---- inspect-params ----------------------------------------------------------

void print_channel_table(const std::vector<double>& alpha, const std::vector<double>& delta,
                         const std::vector<double>& r, const Gram* weights,
                         const std::vector<double>& coefficients) {
  std::printf("%-8s %-12s %-12s %-12s", "channel", "alpha", "delta", "r");
  if (weights) {
    for (double s : coefficients) std::printf(" w(s=%-6g)", s);
  }
  std::printf("\n");
  for (std::size_t f = 0; f < alpha.size(); ++f) {
    std::printf("%-8zu %-12.6g %-12.6g %-12.6g", f, alpha[f], delta[f], r[f]);
    if (weights) {
      for (std::size_t k = 0; k < weights->rows(); ++k) std::printf(" %-10.6f", (*weights)(k, f));
    }
    std::printf("\n");
  }
}

int run_inspect(const std::string& path) {
  require_readable(path);
  const std::string text = read_text_file(path);
  const KeyValueDoc doc = KeyValueDoc::parse(text);
  const std::string& format = doc.get("format");
  if (format == "trainable-pcen") {
    const auto layer = graddsp::parse_checkpoint(text);
    const Gram w = frontend::softmax_weights(layer.z);
    std::printf("trainable-pcen layer: F=%zu K=%zu eps=%g init=%s seed=%llu steps=%lld\n",
                layer.channels(), layer.smoothers(), layer.eps,
                layer.init == frontend::SmootherInit::kZero ? "zero" : "first-frame",
                static_cast<unsigned long long>(layer.seed),
                static_cast<long long>(layer.steps));
    print_channel_table(layer.alpha(), layer.delta(), layer.r(), &w,
                        layer.smoother_coefficients);
  } else if (format == "pcen-params") {
    const auto p = frontend::parse_params(text);
    std::printf("pcen-params: F=%zu eps=%g init=%s\n", p.channels(), p.eps,
                p.init == frontend::SmootherInit::kZero ? "zero" : "first-frame");
    if (const auto* bank = std::get_if<frontend::SmootherBank>(&p.smoother)) {
      const Gram w = frontend::softmax_weights(bank->logits);
      print_channel_table(p.alpha, p.delta, p.r, &w, bank->coefficients);
    } else {
      print_channel_table(p.alpha, p.delta, p.r, nullptr, {});
      if (const auto* one = std::get_if<frontend::SingleSmoother>(&p.smoother)) {
        std::printf("smoother s=%g (all channels)\n", one->s);
      } else {
        const auto& s = std::get<frontend::PerChannelSmoother>(p.smoother).s;
        std::printf("per-channel s:");
        for (double v : s) std::printf(" %g", v);
        std::printf("\n");
      }
    }
  } else if (format == "toy-model") {
    const auto m = kws::model_from_doc(doc);
    std::printf("toy-model: input=%zu hidden=%zu parameters=%zu", m.input_dim, m.hidden,
                m.parameter_count());
    if (doc.has("frontend")) std::printf(" frontend=%s", doc.get("frontend").c_str());
    std::printf("\n");
  } else {
    throw ParseError("unknown format '" + format + "'");
  }
  return kExitOk;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case Error::Category::kIo:
    case Error::Category::kDecode:
    case Error::Category::kUnsupportedFormat:
    case Error::Category::kParse:
      return kExitIo;
    case Error::Category::kConfiguration:
    case Error::Category::kParameter:
      return kExitUsage;
    default:
      return kExitCheckFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PCEN audio frontend toolkit"};
  app.require_subcommand(1);

  ExtractArgs extract;
  auto* ex = app.add_subcommand("extract", "compute a feature gram from a WAV file");
  ex->add_option("input", extract.input, "input WAV file")->required();
  ex->add_option("-o,--output", extract.output, "output file (.fgrm, .egrm or .csv)")
      ->required();
  ex->add_option("--mode", extract.mode, "pcen, logmel or energy")
      ->check(CLI::IsMember({"pcen", "logmel", "energy"}))
      ->capture_default_str();
  ex->add_option("--format", extract.format, "override the output format")
      ->check(CLI::IsMember({"fgrm", "egrm", "csv"}));
  ex->add_option("--offset", extract.offset, "log-mel offset")->capture_default_str();
  ex->add_option("--log", extract.log, "log-mel variant: stabilized or clipped")
      ->check(CLI::IsMember({"stabilized", "clipped"}))
      ->capture_default_str();
  extract.frontend.add(ex);
  extract.pcen.add(ex);

  CompareArgs compare;
  auto* cmp = app.add_subcommand("compare", "per-bin difference statistics of two grams");
  cmp->add_option("a", compare.a, "first gram file")->required();
  cmp->add_option("b", compare.b, "second gram file")->required();
  cmp->add_option("--tolerance", compare.tolerance, "exit 1 when max_abs exceeds this");
  cmp->add_flag("--per-channel", compare.per_channel, "print per-channel statistics");

  GradcheckArgs gradcheck;
  auto* gc = app.add_subcommand("gradcheck", "finite-difference check of the trainable layer");
  gc->add_option("--seed", gradcheck.seed, "seed for layer, energies and loss")
      ->capture_default_str();
  gc->add_option("--frames", gradcheck.frames, "frames T")->capture_default_str();
  gc->add_option("--channels", gradcheck.channels, "channels F")->capture_default_str();
  gc->add_option("--smoothers", gradcheck.smoothers, "smoothers K")->capture_default_str();
  gc->add_option("--tolerance", gradcheck.tolerance, "pass threshold")->capture_default_str();
  gc->add_flag("--no-through-smoother", gradcheck.no_through_smoother,
               "treat the smoother output as constant in the energy gradient");
  gc->add_flag("--zero-init", gradcheck.zero_init, "zero smoother initialization");
  gc->add_flag("--corrupt", gradcheck.corrupt,
               "perturb the analytic gradient (negative control, expect exit 1)");

  SynthArgs synth;
  auto* sy = app.add_subcommand("synth", "write a synthetic keyword dataset and manifest");
  sy->add_option("-o,--out-dir", synth.out_dir, "output directory")->required();
  sy->add_option("--per-class", synth.per_class, "clips per class")->capture_default_str();
  sy->add_option("--seed", synth.seed, "dataset seed")->capture_default_str();
  sy->add_option("--level", synth.level, "clip level (dBFS)")->capture_default_str();
  sy->add_option("--loudness-copies", synth.loudness_copies,
                 "replace the set by this many randomly leveled copies of each clip")
      ->capture_default_str();
  sy->add_option("--loudness-lo", synth.lo, "lowest augmented level (dBFS)")
      ->capture_default_str();
  sy->add_option("--loudness-hi", synth.hi, "highest augmented level (dBFS)")
      ->capture_default_str();
  sy->add_option("--loudness-seed", synth.loudness_seed, "augmentation seed")
      ->capture_default_str();

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "train the keyword classifier (and PCEN layer)");
  tr->add_option("--manifest", train.manifest, "dataset manifest")->required();
  tr->add_option("--mode", train.mode, "logmel, fixed-pcen or trainable-pcen")
      ->check(CLI::IsMember({"logmel", "fixed-pcen", "trainable-pcen"}))
      ->capture_default_str();
  tr->add_option("--model-out", train.model_out, "classifier output file")->required();
  tr->add_option("--layer-out", train.layer_out, "PCEN layer checkpoint (trainable-pcen)");
  tr->add_option("--loss-out", train.loss_out, "loss history CSV");
  tr->add_option("--epochs", train.cfg.epochs, "joint training epochs")->capture_default_str();
  tr->add_option("--lr", train.cfg.lr, "learning rate")->capture_default_str();
  tr->add_option("--seed", train.cfg.seed, "training seed")->capture_default_str();
  tr->add_option("--hidden", train.cfg.hidden, "hidden units")->capture_default_str();
  tr->add_option("--batch", train.cfg.batch_clips, "clips per mini-batch")
      ->capture_default_str();
  tr->add_option("--window-stride", train.cfg.window_stride, "use every n-th context window")
      ->capture_default_str();
  tr->add_option("--frontend-lr-scale", train.cfg.frontend_lr_scale,
                 "layer learning rate relative to --lr")
      ->capture_default_str();
  tr->add_flag("--no-bootstrap", train.no_bootstrap,
               "skip classifier-only epochs before joint training");
  tr->add_option("--bootstrap-epochs", train.cfg.bootstrap_epochs,
                 "classifier-only epochs on the initial layer")
      ->capture_default_str();
  tr->add_option("--smoothers", train.cfg.smoothers, "smoothers K of the trainable layer")
      ->capture_default_str();
  tr->add_option("--offset", train.cfg.log_offset, "log-mel offset")->capture_default_str();
  tr->add_option("--log", train.log, "log-mel variant: stabilized or clipped")
      ->check(CLI::IsMember({"stabilized", "clipped"}))
      ->capture_default_str();
  tr->add_option("--jobs", train.jobs, "threads for feature extraction")->capture_default_str();
  train.frontend.add(tr);
  train.pcen.add(tr);

  EvalArgs eval;
  auto* ev = app.add_subcommand("eval", "ROC evaluation of a trained classifier");
  ev->add_option("--manifest", eval.manifest, "dataset manifest")->required();
  ev->add_option("--model", eval.model, "classifier file from train")->required();
  ev->add_option("--layer", eval.layer, "PCEN layer checkpoint (trainable-pcen models)");
  ev->add_option("--roc-out", eval.roc_out, "ROC CSV (threshold,fa,fr)");
  ev->add_option("--fa", eval.fa_targets, "FA targets to report FR at")->capture_default_str();
  ev->add_option("--jobs", eval.jobs, "threads for feature extraction")->capture_default_str();
  eval.frontend.add(ev);

  std::string inspect_path;
  auto* ip = app.add_subcommand("inspect-params",
                                "print a layer checkpoint, parameter file or model summary");
  ip->add_option("file", inspect_path, "file to inspect")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ex) return run_extract(extract);
    if (*cmp) return run_compare(compare);
    if (*gc) return run_gradcheck(gradcheck);
    if (*sy) return run_synth(synth);
    if (*tr) return run_train(train);
    if (*ev) return run_eval(eval);
    if (*ip) return run_inspect(inspect_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}
