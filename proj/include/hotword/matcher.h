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

#ifndef HOTWORD_MATCHER_H_
#define HOTWORD_MATCHER_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hotword/audio.h"
#include "hotword/model.h"

namespace hotword {

inline constexpr double kDefaultTau = 0.2;
inline constexpr double kDefaultCutoff = 0.5;
inline constexpr std::size_t kMaxReferences = 32;
inline constexpr std::uint32_t kTemplateVersion = 1;

// An enrolled hotword: one or more reference embeddings, the distance tau at
// which the similarity score is 0.5, and the score needed to accept.
struct HotwordTemplate {
  std::string name;
  std::vector<Embedding> refs;
  double tau = kDefaultTau;
  double cutoff = kDefaultCutoff;

  // Throws TemplateError unless 1 <= |refs| <= 32, refs are unit-norm,
  // 0 < tau <= 2 and 0 < cutoff < 1.
  void Validate() const;
};

struct MatchResult {
  double distance = 0.0;  // minimum over the references
  double score = 0.0;
  bool accepted = false;
};

double Euclidean(const Embedding& a, const Embedding& b);

// F(x) = 1 - x^4 / (tau^4 + x^4), evaluated as tau^4 / (tau^4 + x^4):
// 1 at x = 0, exactly 0.5 at x = tau, strictly decreasing towards 0.
double SimilarityScore(double distance, double tau);

// Resample to 16 kHz, fit to one second, log-mel, embed.
Embedding EmbedClip(const AudioClip& clip, const Embedder& embedder);

HotwordTemplate Enroll(std::string name, std::span<const AudioClip> clips,
                       const Embedder& embedder, double tau = kDefaultTau,
                       double cutoff = kDefaultCutoff);

// Accepts when score >= cutoff (inclusive).
MatchResult Match(const Embedding& e, const HotwordTemplate& t);
MatchResult Match(const Embedding& e, const HotwordTemplate& t, double cutoff);

// .ewnt: "EWNT" | u32 LE version | compact JSON {name, tau, cutoff,
// ref_count} | ref_count x 256 float32 LE.
std::vector<std::uint8_t> SerializeTemplate(const HotwordTemplate& t);
HotwordTemplate ParseTemplate(std::span<const std::uint8_t> bytes);
void SaveTemplate(const HotwordTemplate& t, const std::filesystem::path& path);
HotwordTemplate LoadTemplate(const std::filesystem::path& path);

// Every `*.ewnt` in dir, sorted by file name.
std::vector<HotwordTemplate> LoadTemplateDir(const std::filesystem::path& dir);

}  // namespace hotword

#endif  // HOTWORD_MATCHER_H_
