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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "pcen/dsp/wav.hpp"
#include "pcen/frontend/params_io.hpp"
#include "pcen/graddsp/checkpoint.hpp"
#include "pcen/graddsp/trainable.hpp"
#include "pcen/gram_io.hpp"
#include "pcen/kws/dataset.hpp"
#include "pcen/kws/manifest.hpp"
#include "pcen/kws/model_io.hpp"
#include "pcen/kws/train.hpp"
#include "test_util.hpp"

namespace pcen {
namespace {

using testing::random_gram;

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("pcen_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Rounds through float32, the precision of the binary gram formats.
Gram as_float(const Gram& g) {
  Gram out = g;
  for (auto& v : out.flat()) v = static_cast<double>(static_cast<float>(v));
  return out;
}

TEST(GramIoTest, EnergyGramRoundTrip) {
  const Gram g = random_gram(12, 5, 1);
  const auto bytes = encode_energy_gram(g);
  ASSERT_EQ(bytes.size(), 16u + 12u * 5u * 4u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "EGRM");
  EXPECT_EQ(decode_energy_gram(bytes), as_float(g));
}

TEST(GramIoTest, FeatureGramRoundTripKeepsKind) {
  const frontend::FeatureGram g{random_gram(7, 3, 2), frontend::FeatureKind::kLogMel};
  const auto bytes = encode_feature_gram(g);
  EXPECT_EQ(bytes[8], 1);
  const auto back = decode_feature_gram(bytes);
  EXPECT_EQ(back.kind, frontend::FeatureKind::kLogMel);
  EXPECT_EQ(back.values, as_float(g.values));
}

TEST(GramIoTest, FeatureGramHeaderLayout) {
  const frontend::FeatureGram g{Gram(2, 3, 1.0), frontend::FeatureKind::kPcen};
  const auto bytes = encode_feature_gram(g);
  const std::vector<std::uint8_t> header = {'F', 'G', 'R', 'M', 1, 0, 0, 0, 0,
                                            2,   0,   0,   0,   3, 0, 0, 0};
  ASSERT_EQ(bytes.size(), header.size() + 24u);
  EXPECT_TRUE(std::equal(header.begin(), header.end(), bytes.begin()));
  // 1.0f little-endian
  EXPECT_EQ(bytes[17], 0x00);
  EXPECT_EQ(bytes[19], 0x80);
  EXPECT_EQ(bytes[20], 0x3f);
}

TEST(GramIoTest, MalformedBinaryIsRejected) {
  const auto good = encode_energy_gram(random_gram(3, 2, 3));
  EXPECT_THROW(decode_feature_gram(good), ParseError);
  auto truncated = good;
  truncated.resize(truncated.size() - 1);
  EXPECT_THROW(decode_energy_gram(truncated), ParseError);
  auto bad_version = good;
  bad_version[4] = 9;
  EXPECT_THROW(decode_energy_gram(bad_version), ParseError);
  EXPECT_THROW(decode_energy_gram(std::vector<std::uint8_t>{'E', 'G'}), ParseError);
  auto bad_kind = encode_feature_gram({Gram(1, 1, 0.0), frontend::FeatureKind::kPcen});
  bad_kind[8] = 7;
  EXPECT_THROW(decode_feature_gram(bad_kind), ParseError);
}

TEST(GramIoTest, CsvRoundTripIsExact) {
  const Gram g = random_gram(9, 4, 5);
  const std::string csv = gram_to_csv(g);
  EXPECT_EQ(gram_from_csv(csv), g);
  EXPECT_EQ(gram_to_csv(Gram(1, 2, 0.5)), "0.5,0.5\n");
}

TEST(GramIoTest, RaggedCsvIsRejected) {
  EXPECT_THROW(gram_from_csv("1,2\n3\n"), ParseError);
  EXPECT_THROW(gram_from_csv("1,x\n"), ParseError);
}

TEST(ParamsIoTest, RoundTripIsBitExactForEverySmootherKind) {
  auto bank = graddsp::freeze(graddsp::init_trainable(6, 3, 7));
  auto single = frontend::PcenParams::fixed_defaults(6);
  auto per_channel = single;
  per_channel.smoother = frontend::PerChannelSmoother{frontend::alternating_coefficients(6)};
  per_channel.init = frontend::SmootherInit::kZero;
  for (const auto& p : {bank, single, per_channel}) {
    const auto text = frontend::serialize_params(p);
    const auto back = frontend::parse_params(text);
    EXPECT_EQ(back.alpha, p.alpha);
    EXPECT_EQ(back.delta, p.delta);
    EXPECT_EQ(back.r, p.r);
    EXPECT_EQ(back.eps, p.eps);
    EXPECT_EQ(back.init, p.init);
    EXPECT_EQ(back.smoother.index(), p.smoother.index());
    EXPECT_EQ(frontend::serialize_params(back), text);
  }
}

TEST(ParamsIoTest, FileRoundTripAndErrors) {
  TempDir dir;
  const auto p = frontend::PcenParams::fixed_defaults(4);
  frontend::save_params(dir.file("p.txt"), p);
  EXPECT_EQ(frontend::load_params(dir.file("p.txt")).alpha, p.alpha);
  EXPECT_THROW(frontend::load_params(dir.file("missing.txt")), IoError);
  EXPECT_THROW(frontend::parse_params("format = pcen-params\nversion = 1\n"), ParseError);
}

TEST(ParamsIoTest, NegativeAlphaFailsValidation) {
  auto text = frontend::serialize_params(frontend::PcenParams::fixed_defaults(1));
  text.replace(text.find("alpha = 0.98"), 12, "alpha = -1");
  EXPECT_THROW(frontend::parse_params(text), ParameterError);
}

TEST(CheckpointIoTest, FileRoundTrip) {
  TempDir dir;
  auto layer = graddsp::init_trainable(5, 2, 3);
  layer.steps = 40;
  graddsp::save_checkpoint(dir.file("layer.txt"), layer);
  const auto back = graddsp::load_checkpoint(dir.file("layer.txt"));
  EXPECT_TRUE(back.same_parameters(layer));
  EXPECT_EQ(back.steps, 40);
}

TEST(ModelIoTest, TrainedModelRoundTrip) {
  kws::TrainResult r;
  r.mode = kws::FrontendMode::kFixedPcen;
  r.model = kws::ToyModel::init(12, 5, 4);
  r.fixed_params = frontend::PcenParams::fixed_defaults(3);
  r.loss_history = {0.7, 0.5, 0.25};
  const auto back = kws::parse_trained_model(kws::serialize_trained_model(r));
  EXPECT_EQ(back.model, r.model);
  EXPECT_EQ(back.mode, r.mode);
  EXPECT_EQ(back.loss_history, r.loss_history);
  EXPECT_EQ(frontend::serialize_params(back.fixed_params),
            frontend::serialize_params(r.fixed_params));
}

TEST(ModelIoTest, TrainableModelNeedsLayer) {
  kws::TrainResult r;
  r.mode = kws::FrontendMode::kTrainablePcen;
  r.model = kws::ToyModel::init(8, 2, 1);
  r.layer = graddsp::init_trainable(2, 2, 1);
  const auto text = kws::serialize_trained_model(r);
  EXPECT_THROW(kws::parse_trained_model(text), ConfigurationError);
  const auto back = kws::parse_trained_model(text, r.layer);
  EXPECT_TRUE(back.layer->same_parameters(*r.layer));
}

TEST(ModelIoTest, WrongShapeIsRejected) {
  auto doc = kws::model_to_doc(kws::ToyModel::init(4, 3, 1));
  doc.set_integer("hidden", 4);
  EXPECT_THROW(kws::model_from_doc(doc), ParseError);
}

TEST(ManifestTest, RenderAndParse) {
  std::vector<kws::ManifestEntry> entries = {
      {"a.wav", kws::Label::kKeyword, {11, kws::ClipTemplate::kKeyword, -30.0}},
      {"sub/b.wav", kws::Label::kNonKeyword, {12, kws::ClipTemplate::kSingleChirp, -42.5}},
  };
  const auto text = kws::render_manifest(entries);
  EXPECT_EQ(text,
            "# path label seed template dbfs\n"
            "a.wav 1 11 keyword -30\n"
            "sub/b.wav 0 12 single-chirp -42.5\n");
  const auto back = kws::parse_manifest(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].path, "sub/b.wav");
  EXPECT_EQ(back[1].metadata.seed, 12u);
  EXPECT_EQ(back[1].metadata.dbfs, -42.5);
}

TEST(ManifestTest, MalformedLines) {
  EXPECT_THROW(kws::parse_manifest("a.wav 1 2 keyword\n"), ParseError);
  EXPECT_THROW(kws::parse_manifest("a.wav 3 2 keyword -30\n"), ParseError);
  EXPECT_THROW(kws::parse_manifest("a.wav 1 2 speech -30\n"), ParseError);
  EXPECT_THROW(kws::render_manifest({{"has space.wav", kws::Label::kKeyword, {}}}),
               ParameterError);
}

TEST(ManifestTest, DatasetRoundTripThroughWavFiles) {
  TempDir dir;
  const auto clips = kws::synth_dataset(2, 8);
  const auto manifest = kws::write_dataset(dir.file("data"), clips);
  const auto back = kws::load_dataset(manifest);
  ASSERT_EQ(back.size(), clips.size());
  for (std::size_t i = 0; i < clips.size(); ++i) {
    EXPECT_EQ(back[i].label, clips[i].label);
    EXPECT_EQ(back[i].metadata.seed, clips[i].metadata.seed);
    ASSERT_EQ(back[i].audio.samples.size(), clips[i].audio.samples.size());
    for (std::size_t n = 0; n < clips[i].audio.samples.size(); n += 97) {
      EXPECT_EQ(back[i].audio.samples[n],
                static_cast<double>(static_cast<float>(clips[i].audio.samples[n])));
    }
  }
}

TEST(ManifestTest, MissingClipIsIoError) {
  TempDir dir;
  write_text_file(dir.file("m.txt"), "nope.wav 1 0 keyword -30\n");
  EXPECT_THROW(kws::load_dataset(dir.file("m.txt")), IoError);
}

}  // namespace
}  // namespace pcen
