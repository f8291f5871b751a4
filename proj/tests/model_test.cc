// Copyright (c) 2026 The Hotword Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hotword/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "hotword/errors.h"
#include "json.hpp"
#include "test_support.h"
#include "util.h"

namespace hotword {
namespace {

using testing::FixtureEmbedder;
using testing::FixtureWeights;

MelSpectrogram RandomSpec(std::mt19937& rng) {
  std::uniform_real_distribution<float> dist(-23.0f, 5.0f);
  MelSpectrogram spec;
  for (float& v : spec.values.data) v = dist(rng);
  return spec;
}

double Distance(const Embedding& a, const Embedding& b) {
  double sq = 0.0;
  for (int i = 0; i < kEmbeddingDim; ++i) {
    const double d = static_cast<double>(a.values[i]) - b.values[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

template <typename E>
void ExpectErrorNaming(const std::vector<std::uint8_t>& bytes, const std::string& needle) {
  try {
    ParseWeights(bytes);
    FAIL() << "expected an error mentioning " << needle;
  } catch (const E& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(ArchTest, ShapeChain) {
  const std::vector<LayerShape> expected = {
      {"stem", 49, 32, 32},  {"stage1", 49, 32, 16}, {"stage2", 25, 16, 24},
      {"stage3", 13, 8, 40}, {"stage4", 7, 4, 80},   {"head1", 3, 2, 32},
      {"head2", 1, 1, 32},   {"embedding", 1, 1, 256}};
  EXPECT_EQ(IntermediateShapes(), expected);
  EXPECT_EQ(FixtureEmbedder().Shapes(), expected);
}

TEST(ArchTest, RecordsAreUniqueAndComplete) {
  const auto& records = ArchRecords();
  std::vector<std::string> names;
  for (const auto& r : records) names.push_back(r.name);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(std::adjacent_find(names.begin(), names.end()), names.end());
  EXPECT_EQ(records.front().name, "stem/conv/kernel");
  EXPECT_EQ(records.back().name, "head/dense/bias");
  EXPECT_EQ(records.back().shape, std::vector<int>{256});
  // One squeeze-excite pair per block: 1 + 2 + 2 + 3 blocks.
  EXPECT_EQ(std::count_if(records.begin(), records.end(),
                          [](const TensorRecord& r) {
                            return r.name.ends_with("/se_reduce/kernel");
                          }),
            8);
}

TEST(EmbedderTest, UnitNormOnRandomInputs) {
  std::mt19937 rng(21);
  for (int i = 0; i < 40; ++i) {
    const Embedding e = FixtureEmbedder().Embed(RandomSpec(rng));
    EXPECT_NEAR(e.Norm(), 1.0, 1e-5) << i;
  }
}

TEST(EmbedderTest, UnitNormOnAudio) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Embedding e = FixtureEmbedder().Embed(LogMel(testing::FixtureWord(seed)));
    EXPECT_NEAR(e.Norm(), 1.0, 1e-5);
  }
  const Embedding silent =
      FixtureEmbedder().Embed(LogMel(AudioClip{std::vector<float>(16000), kSampleRate}));
  EXPECT_NEAR(silent.Norm(), 1.0, 1e-5);
}

TEST(EmbedderTest, Deterministic) {
  std::mt19937 rng(22);
  const MelSpectrogram spec = RandomSpec(rng);
  EXPECT_EQ(FixtureEmbedder().Embed(spec), FixtureEmbedder().Embed(spec));
  const Embedder second(RandomWeights(testing::kFixtureSeed));
  EXPECT_EQ(second.Embed(spec), FixtureEmbedder().Embed(spec));
}

TEST(EmbedderTest, SmallPerturbationsStaySmall) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<float> nudge(-1e-6f, 1e-6f);
  for (int i = 0; i < 5; ++i) {
    const MelSpectrogram spec = LogMel(testing::FixtureWord(40 + i));
    MelSpectrogram moved = spec;
    for (float& v : moved.values.data) v += nudge(rng);
    EXPECT_LE(Distance(FixtureEmbedder().Embed(spec), FixtureEmbedder().Embed(moved)), 1e-2);
  }
}

TEST(EmbedderTest, DistinguishesInputs) {
  const Embedding a = FixtureEmbedder().Embed(LogMel(testing::FixtureWord(1)));
  const Embedding b = FixtureEmbedder().Embed(LogMel(testing::FixtureWord(2)));
  EXPECT_GT(Distance(a, b), 0.05);
}

TEST(EmbedderTest, RejectsBadInput) {
  MelSpectrogram spec;
  spec.values = Matrix(97, 64);
  EXPECT_THROW(FixtureEmbedder().Embed(spec), ShapeError);
  MelSpectrogram nan_spec;
  nan_spec.values.data[5] = NAN;
  EXPECT_THROW(FixtureEmbedder().Embed(nan_spec), ShapeError);
}

TEST(WeightsTest, SerializeRoundTripIsByteIdentical) {
  const std::vector<std::uint8_t> bytes = SerializeWeights(FixtureWeights());
  const ModelWeights parsed = ParseWeights(bytes);
  EXPECT_EQ(SerializeWeights(parsed), bytes);

  const auto dir = testing::TempDir("weights");
  SaveWeights(parsed, dir / "w.ewn");
  EXPECT_EQ(internal::ReadFileBytes(dir / "w.ewn"), bytes);
  EXPECT_EQ(SerializeWeights(LoadWeights(dir / "w.ewn")), bytes);
}

TEST(WeightsTest, HeaderLayout) {
  const std::vector<std::uint8_t> bytes = SerializeWeights(FixtureWeights());
  ASSERT_GT(bytes.size(), 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "EWN1");
  const std::uint32_t len = internal::GetU32(bytes.data() + 4);
  const auto manifest = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + len);
  ASSERT_TRUE(manifest.is_array());
  std::size_t expected_offset = 0;
  for (const auto& entry : manifest) {
    EXPECT_EQ(entry.at("byte_offset").get<std::size_t>(), expected_offset);
    std::size_t count = 1;
    for (int d : entry.at("shape")) count *= d;
    EXPECT_EQ(entry.at("byte_len").get<std::size_t>(), count * 4);
    expected_offset += count * 4;
  }
  EXPECT_EQ(bytes.size(), 8 + len + expected_offset);
}

TEST(WeightsTest, ShuffledPayloadLoadsIdentically) {
  const std::vector<std::uint8_t> bytes = SerializeWeights(FixtureWeights());
  const std::uint32_t len = internal::GetU32(bytes.data() + 4);
  auto manifest = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + len);
  const auto payload_begin = bytes.begin() + 8 + len;

  std::vector<std::size_t> order(manifest.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), std::mt19937(31));

  // Payload chunks in shuffled order; manifest entries in a second order.
  std::vector<std::uint8_t> payload;
  for (std::size_t idx : order) {
    auto& entry = manifest[idx];
    const std::size_t off = entry["byte_offset"], n = entry["byte_len"];
    entry["byte_offset"] = payload.size();
    payload.insert(payload.end(), payload_begin + off, payload_begin + off + n);
  }
  nlohmann::json reordered = nlohmann::json::array();
  for (std::size_t i = manifest.size(); i-- > 0;) reordered.push_back(manifest[i]);
  const std::string text = reordered.dump();
  std::vector<std::uint8_t> shuffled = {'E', 'W', 'N', '1'};
  internal::PutU32(&shuffled, static_cast<std::uint32_t>(text.size()));
  shuffled.insert(shuffled.end(), text.begin(), text.end());
  shuffled.insert(shuffled.end(), payload.begin(), payload.end());
  ASSERT_NE(shuffled, bytes);

  const ModelWeights parsed = ParseWeights(shuffled);
  for (const auto& r : ArchRecords())
    ASSERT_EQ(parsed.tensor(r.name), FixtureWeights().tensor(r.name)) << r.name;
  std::mt19937 rng(32);
  const MelSpectrogram spec = RandomSpec(rng);
  EXPECT_EQ(Embedder(parsed).Embed(spec), FixtureEmbedder().Embed(spec));
}

TEST(WeightsTest, AlteredShapeNamesTheLayer) {
  ModelWeights w = FixtureWeights();
  TensorRecord r = w.record("stage3/block1/depthwise/kernel");
  r.shape = {3, 3, 240};
  w.Set(r, Tensor(r.shape, 0.1f));
  ExpectErrorNaming<ManifestMismatch>(SerializeWeights(w), "stage3/block1/depthwise/kernel");
}

TEST(WeightsTest, MissingAndUnknownTensors) {
  ModelWeights w = FixtureWeights();
  TensorRecord extra{"head/extra", "dense", {{"units", 3}}, {3}};
  w.Set(extra, Tensor({3}));
  ExpectErrorNaming<ManifestMismatch>(SerializeWeights(w), "head/extra");

  ModelWeights missing;
  for (const auto& r : FixtureWeights().records())
    if (r.name != "stage2/block1/se_expand/bias") missing.Set(r, FixtureWeights().tensor(r.name));
  ExpectErrorNaming<ManifestMismatch>(SerializeWeights(missing), "stage2/block1/se_expand/bias");
}

TEST(WeightsTest, WrongHyperparams) {
  ModelWeights w = FixtureWeights();
  TensorRecord r = w.record("stage2/block1/depthwise/kernel");
  r.hyperparams["stride"] = 1;
  w.Set(r, w.tensor(r.name));
  ExpectErrorNaming<ManifestMismatch>(SerializeWeights(w), "stage2/block1/depthwise/kernel");
}

TEST(WeightsTest, TruncatedFileIsRejected) {
  const std::vector<std::uint8_t> bytes = SerializeWeights(FixtureWeights());
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{7}, std::size_t{100},
                          bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW(ParseWeights(std::span(bytes.data(), cut)), BadMagic) << cut;
  }
  std::vector<std::uint8_t> wrong = bytes;
  wrong[3] = '2';
  EXPECT_THROW(ParseWeights(wrong), BadMagic);
}

TEST(WeightsTest, NonFiniteTensorIsRejected) {
  std::vector<std::uint8_t> bytes = SerializeWeights(FixtureWeights());
  const std::uint32_t len = internal::GetU32(bytes.data() + 4);
  // First payload float belongs to stem/conv/kernel.
  const std::uint32_t nan_bits = 0x7fc00000u;
  std::memcpy(bytes.data() + 8 + len, &nan_bits, 4);
  ExpectErrorNaming<NonFiniteTensor>(bytes, "stem/conv/kernel");
  EXPECT_FALSE(std::isfinite(std::numeric_limits<float>::infinity()));
}

TEST(WeightsTest, HeadStrideOverride) {
  ModelWeights w = FixtureWeights();
  for (const char* suffix : {"/kernel", "/bias"}) {
    TensorRecord r = w.record(std::string("head/conv1") + suffix);
    r.hyperparams["stride"] = 2;
    w.Set(r, w.tensor(r.name));
  }
  // Accepted by validation, but the 7x4 map is then too small for two pools.
  const ModelWeights parsed = ParseWeights(SerializeWeights(w));
  EXPECT_EQ(parsed.record("head/conv1/kernel").hyperparams["stride"], 2);
  EXPECT_THROW(Embedder{parsed}, ManifestMismatch);

  TensorRecord bad = w.record("head/conv2/kernel");
  bad.hyperparams["stride"] = 4;
  w.Set(bad, w.tensor(bad.name));
  ExpectErrorNaming<ManifestMismatch>(SerializeWeights(w), "head/conv2");
}

TEST(WeightsTest, RandomWeightsAreSeeded) {
  EXPECT_EQ(SerializeWeights(RandomWeights(testing::kFixtureSeed)),
            SerializeWeights(FixtureWeights()));
  const ModelWeights other = RandomWeights(testing::kFixtureSeed + 1);
  EXPECT_NE(other.tensor("stem/conv/kernel"), FixtureWeights().tensor("stem/conv/kernel"));
  EXPECT_NO_THROW(other.Validate());
}

}  // namespace
}  // namespace hotword
