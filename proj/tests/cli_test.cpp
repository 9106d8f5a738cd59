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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "pcen/dsp/energy.hpp"
#include "pcen/dsp/wav.hpp"
#include "pcen/frontend/pcen.hpp"
#include "pcen/graddsp/checkpoint.hpp"
#include "pcen/gram_io.hpp"
#include "pcen/keyvalue.hpp"
#include "pcen/kws/dataset.hpp"
#include "pcen/kws/manifest.hpp"
#include "pcen/kws/model_io.hpp"
#include "pcen/kws/roc.hpp"

namespace pcen {
namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(PCEN_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe) != nullptr) r.out += buf;
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           (std::string("pcen_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_clip_wav(const std::string& name) const {
    const auto clip = kws::synth_dataset(1, 4).front();
    dsp::write_wav(path(name), clip.audio);
    return path(name);
  }

  static std::vector<std::uint8_t> bytes(const std::string& p) {
    return dsp::read_binary_file(p);
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, HelpAndUsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("gradcheck --no-such-flag").code, 2);
  EXPECT_EQ(run("extract in.wav").code, 2);
}

TEST_F(CliTest, ExtractMatchesLibraryBytes) {
  const auto wav = write_clip_wav("a.wav");
  const auto r = run("extract " + wav + " -o " + path("a.fgrm") + " --mode pcen");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "T=58 F=40 mode=pcen\n");
  const auto e = dsp::filterbank_energies(dsp::read_wav(wav), {}).values;
  const auto expected = encode_feature_gram(
      frontend::pcen_forward(e, frontend::PcenParams::fixed_defaults(40)));
  EXPECT_EQ(bytes(path("a.fgrm")), expected);
}

TEST_F(CliTest, ExtractLogMelCsvMatchesLibrary) {
  const auto wav = write_clip_wav("a.wav");
  ASSERT_EQ(run("extract " + wav + " -o " + path("a.csv") +
                " --mode logmel --offset 0.1 --log stabilized")
                .code,
            0);
  const auto e = dsp::filterbank_energies(dsp::read_wav(wav), {}).values;
  EXPECT_EQ(read_text_file(path("a.csv")),
            gram_to_csv(frontend::log_mel(e, 0.1, frontend::LogMode::kStabilized).values));
}

TEST_F(CliTest, ExtractEnergyAndFormatOverride) {
  const auto wav = write_clip_wav("a.wav");
  ASSERT_EQ(run("extract " + wav + " -o " + path("e.bin") + " --mode energy --format egrm").code,
            0);
  const auto e = dsp::filterbank_energies(dsp::read_wav(wav), {}).values;
  EXPECT_EQ(bytes(path("e.bin")), encode_energy_gram(e));
  EXPECT_EQ(run("extract " + wav + " -o " + path("x.unknown")).code, 2);
}

TEST_F(CliTest, ZeroSignalGivesZeroPcen) {
  dsp::write_wav(path("z.wav"), dsp::AudioBuffer{std::vector<double>(4000, 0.0), 16000});
  ASSERT_EQ(run("extract " + path("z.wav") + " -o " + path("z.fgrm")).code, 0);
  const auto g = decode_feature_gram(bytes(path("z.fgrm")));
  for (double v : g.values.flat()) EXPECT_EQ(v, 0.0);
}

TEST_F(CliTest, ExtractIoErrors) {
  EXPECT_EQ(run("extract " + path("missing.wav") + " -o " + path("o.fgrm")).code, 3);
  write_text_file(path("bad.wav"), "not a wav file");
  EXPECT_EQ(run("extract " + path("bad.wav") + " -o " + path("o.fgrm")).code, 3);
}

TEST_F(CliTest, ExtractHonorsParameterFile) {
  const auto wav = write_clip_wav("a.wav");
  auto p = frontend::PcenParams::uniform(40, 0.9, 1.5, 0.25, 0.04);
  frontend::save_params(path("p.txt"), p);
  ASSERT_EQ(run("extract " + wav + " -o " + path("a.fgrm") + " --params " + path("p.txt")).code,
            0);
  const auto e = dsp::filterbank_energies(dsp::read_wav(wav), {}).values;
  EXPECT_EQ(bytes(path("a.fgrm")), encode_feature_gram(frontend::pcen_forward(e, p)));
}

TEST_F(CliTest, CompareReportsDifferences) {
  write_text_file(path("a.csv"), "1,2\n3,4\n");
  write_text_file(path("b.csv"), "1,2\n3,4.5\n");
  const auto same = run("compare " + path("a.csv") + " " + path("a.csv"));
  EXPECT_EQ(same.code, 0);
  EXPECT_NE(same.out.find("max_abs 0\n"), std::string::npos);
  const auto diff = run("compare " + path("a.csv") + " " + path("b.csv") +
                        " --per-channel --tolerance 0.1");
  EXPECT_EQ(diff.code, 1);
  EXPECT_NE(diff.out.find("max_abs 0.5\n"), std::string::npos);
  EXPECT_NE(diff.out.find("1 0.5 0.25\n"), std::string::npos);
  write_text_file(path("c.csv"), "1,2,3\n");
  EXPECT_NE(run("compare " + path("a.csv") + " " + path("c.csv")).code, 0);
}

TEST_F(CliTest, GradcheckPassesAndNegativeControlFails) {
  const auto ok = run("gradcheck");
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_EQ(run("gradcheck --corrupt").code, 1);
  EXPECT_EQ(run("gradcheck --seed 3 --zero-init --no-through-smoother").code, 0);
}

TEST_F(CliTest, GradcheckReportIsDeterministic) {
  const auto a = run("gradcheck --seed 7");
  const auto b = run("gradcheck --seed 7");
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
}

TEST_F(CliTest, TrainEvalRoundTripMatchesInProcess) {
  ASSERT_EQ(run("synth -o " + path("data") + " --per-class 12 --seed 5").code, 0);
  const auto manifest = path("data/manifest.txt");
  ASSERT_EQ(run("train --manifest " + manifest + " --mode trainable-pcen --epochs 2" +
                " --bootstrap-epochs 1 --window-stride 4 --model-out " + path("m.txt") +
                " --layer-out " + path("l.txt") + " --loss-out " + path("loss.csv"))
                .code,
            0);
  const auto r = run("eval --manifest " + manifest + " --model " + path("m.txt") + " --layer " +
                     path("l.txt") + " --roc-out " + path("roc.csv") + " --fa 0.05 --fa 0.1");
  ASSERT_EQ(r.code, 0);

  const auto clips = kws::load_dataset(manifest);
  const auto trained = kws::parse_trained_model(read_text_file(path("m.txt")),
                                                graddsp::load_checkpoint(path("l.txt")));
  const auto roc = kws::evaluate_roc(trained.model, trained.frontend(), clips);
  EXPECT_EQ(read_text_file(path("roc.csv")), roc.to_csv());
  EXPECT_NE(r.out.find("fr_at_fa 0.05 " + format_real(roc.fr_at_fa(0.05)) + "\n"),
            std::string::npos);
  EXPECT_EQ(read_text_file(path("loss.csv")).rfind("epoch,loss\n0,", 0), 0u);

  // Training in-process from the same manifest gives the same model.
  kws::TrainConfig cfg;
  cfg.epochs = 2;
  cfg.bootstrap_epochs = 1;
  cfg.window_stride = 4;
  const auto direct = kws::train_joint(clips, cfg);
  EXPECT_EQ(direct.model, trained.model);
  EXPECT_TRUE(direct.layer->same_parameters(*trained.layer));
}

TEST_F(CliTest, ZeroEpochsEvaluatesInitialModel) {
  ASSERT_EQ(run("synth -o " + path("data") + " --per-class 6").code, 0);
  const auto manifest = path("data/manifest.txt");
  ASSERT_EQ(run("train --manifest " + manifest + " --mode fixed-pcen --epochs 0 --model-out " +
                path("m.txt"))
                .code,
            0);
  ASSERT_EQ(run("eval --manifest " + manifest + " --model " + path("m.txt") + " --roc-out " +
                path("roc.csv"))
                .code,
            0);
  const auto trained = kws::parse_trained_model(read_text_file(path("m.txt")));
  EXPECT_EQ(trained.model, kws::ToyModel::init(32 * 40, 64, kws::synth_detail::splitmix64(0)));
  EXPECT_EQ(trained.loss_history.size(), 1u);
  const std::string roc = read_text_file(path("roc.csv"));
  EXPECT_EQ(roc.rfind("threshold,fa,fr\n", 0), 0u);
  EXPECT_NE(roc.find(",0,1\n"), std::string::npos);
}

TEST_F(CliTest, TrainErrors) {
  EXPECT_EQ(run("train --manifest " + path("none.txt") + " --model-out " + path("m.txt")).code,
            3);
  ASSERT_EQ(run("synth -o " + path("data") + " --per-class 2").code, 0);
  // The first two entries are the positives.
  const auto entries = kws::parse_manifest(read_text_file(path("data/manifest.txt")));
  std::vector<kws::ManifestEntry> positives(entries.begin(), entries.begin() + 2);
  write_text_file(path("data/pos.txt"), kws::render_manifest(positives));
  EXPECT_EQ(run("train --manifest " + path("data/pos.txt") + " --mode logmel --model-out " +
                path("m.txt"))
                .code,
            1);
  EXPECT_EQ(run("train --manifest " + path("data/manifest.txt") +
                " --mode trainable-pcen --model-out " + path("m.txt"))
                .code,
            2);
}

TEST_F(CliTest, FixedPcenBeatsLogMelUnderLoudnessMismatch) {
  ASSERT_EQ(run("synth -o " + path("train") + " --per-class 60 --seed 1").code, 0);
  ASSERT_EQ(run("synth -o " + path("quiet") + " --per-class 60 --seed 2 --level -50").code, 0);
  ASSERT_EQ(run("synth -o " + path("loud") + " --per-class 60 --seed 2 --level -10").code, 0);
  // One evaluation manifest covering both levels.
  auto quiet = kws::parse_manifest(read_text_file(path("quiet/manifest.txt")));
  auto loud = kws::parse_manifest(read_text_file(path("loud/manifest.txt")));
  for (auto& e : quiet) e.path = "quiet/" + e.path;
  for (auto& e : loud) e.path = "loud/" + e.path;
  quiet.insert(quiet.end(), loud.begin(), loud.end());
  write_text_file(path("eval.txt"), kws::render_manifest(quiet));

  double fr[2];
  const char* modes[2] = {"fixed-pcen", "logmel"};
  for (int i = 0; i < 2; ++i) {
    const std::string model = path(std::string(modes[i]) + ".txt");
    ASSERT_EQ(run("train --manifest " + path("train/manifest.txt") + " --mode " + modes[i] +
                  " --epochs 15 --window-stride 2 --seed 3 --model-out " + model)
                  .code,
              0);
    const auto r = run("eval --manifest " + path("eval.txt") + " --model " + model);
    ASSERT_EQ(r.code, 0);
    const auto pos = r.out.find("fr_at_fa 0.05 ");
    ASSERT_NE(pos, std::string::npos);
    fr[i] = std::stod(r.out.substr(pos + 14));
  }
  EXPECT_LE(fr[0], fr[1]) << "fixed-pcen " << fr[0] << " logmel " << fr[1];
}

TEST_F(CliTest, InspectParamsShowsSmootherWeights) {
  auto layer = graddsp::init_trainable(3, 2, 1);
  graddsp::save_checkpoint(path("l.txt"), layer);
  const auto r = run("inspect-params " + path("l.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("trainable-pcen layer: F=3 K=2"), std::string::npos);
  EXPECT_NE(r.out.find("w(s=0.015"), std::string::npos);
  frontend::save_params(path("p.txt"), frontend::PcenParams::fixed_defaults(2));
  EXPECT_EQ(run("inspect-params " + path("p.txt")).code, 0);
  write_text_file(path("junk.txt"), "format = other\n");
  EXPECT_EQ(run("inspect-params " + path("junk.txt")).code, 3);
  EXPECT_EQ(run("inspect-params " + path("nope.txt")).code, 3);
}

}  // namespace
}  // namespace pcen
