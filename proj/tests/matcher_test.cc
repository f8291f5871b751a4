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

#include "hotword/matcher.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "hotword/errors.h"
#include "test_support.h"
#include "util.h"

namespace hotword {
namespace {

using testing::FixtureEmbedder;
using testing::FixtureWord;

Embedding Basis(int i, float sign = 1.0f) {
  Embedding e;
  e.values[i] = sign;
  return e;
}

Embedding RandomUnit(std::mt19937& rng) {
  std::normal_distribution<float> dist;
  Embedding e;
  for (float& v : e.values) v = dist(rng);
  const double n = e.Norm();
  for (float& v : e.values) v = static_cast<float>(v / n);
  return e;
}

// The similarity as written: 1 - x^4 / (tau^4 + x^4).
double ReferenceF(double x, double tau) {
  const double x4 = std::pow(x, 4), t4 = std::pow(tau, 4);
  return 1.0 - x4 / (t4 + x4);
}

TEST(EuclideanTest, AnalyticCases) {
  EXPECT_EQ(Euclidean(Basis(3), Basis(3)), 0.0);
  EXPECT_NEAR(Euclidean(Basis(0), Basis(1)), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(Euclidean(Basis(7), Basis(7, -1.0f)), 2.0, 1e-12);
}

TEST(SimilarityTest, AnchorValues) {
  EXPECT_EQ(SimilarityScore(0.0, 0.2), 1.0);
  EXPECT_EQ(SimilarityScore(0.2, 0.2), 0.5);
  EXPECT_NEAR(SimilarityScore(0.4, 0.2), 1.0 - 0.0256 / 0.0272, 1e-12);
  EXPECT_NEAR(SimilarityScore(0.4, 0.2), 0.05882, 1e-5);
  EXPECT_NEAR(SimilarityScore(2.0, 0.2), 1.0 - 16.0 / 16.0016, 1e-12);
}

TEST(SimilarityTest, AgreesWithWrittenForm) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = dist(rng), tau = 0.01 + dist(rng) / 2.0;
    EXPECT_NEAR(SimilarityScore(x, tau), ReferenceF(x, tau), 1e-12);
  }
}

TEST(SimilarityTest, HalfAtTauForAnyTau) {
  for (int i = 1; i <= 20; ++i) {
    const double tau = 0.05 * i;
    EXPECT_NEAR(SimilarityScore(tau, tau), 0.5, 1e-9) << tau;
  }
}

TEST(SimilarityTest, StrictlyDecreasingAndBanded) {
  for (double tau : {0.05, 0.2, 0.7, 1.0}) {
    double prev = SimilarityScore(0.0, tau);
    for (int i = 1; i <= 1000; ++i) {
      const double x = 2.0 * i / 1000.0;
      const double f = SimilarityScore(x, tau);
      ASSERT_LT(f, prev) << tau << " " << x;
      ASSERT_GT(f, 0.0);
      ASSERT_LE(f, 1.0);
      if (x < tau) ASSERT_GT(f, 0.5);
      if (x > tau) ASSERT_LT(f, 0.5);
      prev = f;
    }
  }
}

TEST(SimilarityTest, RejectsBadArguments) {
  EXPECT_THROW(SimilarityScore(-0.1, 0.2), ParamError);
  EXPECT_THROW(SimilarityScore(0.1, 0.0), ParamError);
  EXPECT_THROW(SimilarityScore(NAN, 0.2), ParamError);
}

TEST(MatchTest, ExactReferenceMatches) {
  HotwordTemplate t{"w", {Basis(1)}};
  const MatchResult r = Match(Basis(1), t);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.score, 1.0);
  EXPECT_TRUE(r.accepted);
}

TEST(MatchTest, AntipodalIsRejected) {
  HotwordTemplate t{"w", {Basis(1)}};
  const MatchResult r = Match(Basis(1, -1.0f), t);
  EXPECT_NEAR(r.distance, 2.0, 1e-12);
  EXPECT_NEAR(r.score, 1.0e-4, 1e-7);
  EXPECT_FALSE(r.accepted);
}

TEST(MatchTest, BoundaryIsInclusive) {
  std::mt19937 rng(5);
  const Embedding a = RandomUnit(rng), b = RandomUnit(rng);
  HotwordTemplate t{"w", {a}};
  t.tau = Euclidean(a, b);
  const MatchResult r = Match(b, t);
  EXPECT_EQ(r.score, 0.5);
  EXPECT_TRUE(r.accepted);
  EXPECT_FALSE(Match(b, t, std::nextafter(0.5, 1.0)).accepted);
}

TEST(MatchTest, MinimumOverReferencesAndSymmetry) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    HotwordTemplate t{"w", {RandomUnit(rng), RandomUnit(rng), RandomUnit(rng)}};
    const Embedding e = RandomUnit(rng);
    double best = INFINITY;
    for (const Embedding& ref : t.refs) best = std::min(best, Euclidean(e, ref));
    EXPECT_EQ(Match(e, t).distance, best);

    HotwordTemplate single{"s", {t.refs[0]}}, reverse{"r", {e}};
    EXPECT_EQ(Match(e, single).distance, Match(t.refs[0], reverse).distance);
  }
}

TEST(MatchTest, DecisionEquivalence) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Embedding a = RandomUnit(rng), b = RandomUnit(rng);
    HotwordTemplate t{"w", {a}};
    t.tau = 0.1 + 0.01 * (trial % 150);
    const MatchResult r = Match(b, t);
    EXPECT_EQ(r.accepted, r.distance <= t.tau) << trial;
    EXPECT_EQ(r.accepted, r.score >= 0.5);
  }
}

TEST(EnrollTest, SelfMatch) {
  const AudioClip clip = FixtureWord(1);
  const HotwordTemplate t = Enroll("hey", std::span(&clip, 1), FixtureEmbedder());
  EXPECT_EQ(t.name, "hey");
  ASSERT_EQ(t.refs.size(), 1u);
  EXPECT_NEAR(t.refs[0].Norm(), 1.0, 1e-5);
  const MatchResult r = Match(EmbedClip(clip, FixtureEmbedder()), t);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.score, 1.0);
  EXPECT_TRUE(r.accepted);
}

TEST(EnrollTest, ThreeClipsUseClosestReference) {
  const std::vector<AudioClip> clips = {FixtureWord(1), FixtureWord(2), FixtureWord(3)};
  const HotwordTemplate t = Enroll("hey", clips, FixtureEmbedder());
  ASSERT_EQ(t.refs.size(), 3u);
  const Embedding probe = EmbedClip(FixtureWord(4), FixtureEmbedder());
  double best = INFINITY;
  for (const AudioClip& c : clips) best = std::min(best, Euclidean(probe, EmbedClip(c, FixtureEmbedder())));
  EXPECT_EQ(Match(probe, t).distance, best);
}

TEST(EnrollTest, ShortAndResampledClips) {
  AudioClip short_clip = SynthToneWord(9, 0.4, 8000);
  const HotwordTemplate t = Enroll("x", std::span(&short_clip, 1), FixtureEmbedder());
  EXPECT_EQ(Match(EmbedClip(short_clip, FixtureEmbedder()), t).score, 1.0);
  EXPECT_THROW(Enroll("x", std::span<const AudioClip>(), FixtureEmbedder()), ParamError);
}

class TemplateFileTest : public ::testing::Test {
 protected:
  TemplateFileTest() {
    std::mt19937 rng(8);
    t_ = HotwordTemplate{"lights on", {RandomUnit(rng), RandomUnit(rng)}, 0.25, 0.6};
  }
  HotwordTemplate t_;
};

TEST_F(TemplateFileTest, RoundTrip) {
  const std::vector<std::uint8_t> bytes = SerializeTemplate(t_);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "EWNT");
  EXPECT_EQ(internal::GetU32(bytes.data() + 4), 1u);
  const HotwordTemplate back = ParseTemplate(bytes);
  EXPECT_EQ(back.name, t_.name);
  EXPECT_EQ(back.refs, t_.refs);
  EXPECT_EQ(back.tau, t_.tau);
  EXPECT_EQ(back.cutoff, t_.cutoff);
  EXPECT_EQ(SerializeTemplate(back), bytes);

  const auto dir = testing::TempDir("templates");
  SaveTemplate(t_, dir / "b.ewnt");
  HotwordTemplate other = t_;
  other.name = "a {tricky} \"name\"";
  SaveTemplate(other, dir / "a.ewnt");
  const auto all = LoadTemplateDir(dir);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].name, other.name);
  EXPECT_EQ(all[1].refs, t_.refs);
}

TEST_F(TemplateFileTest, CorruptFilesAreRejected) {
  const std::vector<std::uint8_t> bytes = SerializeTemplate(t_);
  std::vector<std::uint8_t> bad = bytes;
  bad[1] = 'X';
  EXPECT_THROW(ParseTemplate(bad), TemplateError);
  EXPECT_THROW(ParseTemplate(std::span(bytes.data(), bytes.size() - 3)), TemplateError);
  EXPECT_THROW(ParseTemplate(std::span(bytes.data(), 20)), TemplateError);
  bad = bytes;
  bad.push_back(0);
  EXPECT_THROW(ParseTemplate(bad), TemplateError);
  bad = bytes;
  bad[9] = '[';
  EXPECT_THROW(ParseTemplate(bad), TemplateError);
}

TEST_F(TemplateFileTest, VersionMismatch) {
  std::vector<std::uint8_t> bytes = SerializeTemplate(t_);
  bytes[4] = 2;
  EXPECT_THROW(ParseTemplate(bytes), TemplateError);
}

TEST_F(TemplateFileTest, InvalidContentsAreRejected) {
  HotwordTemplate t = t_;
  t.refs[0].values[0] += 0.5f;
  EXPECT_THROW(SerializeTemplate(t), TemplateError);
  t = t_;
  t.cutoff = 1.0;
  EXPECT_THROW(t.Validate(), TemplateError);
  t = t_;
  t.refs.clear();
  EXPECT_THROW(t.Validate(), TemplateError);
}

}  // namespace
}  // namespace hotword
