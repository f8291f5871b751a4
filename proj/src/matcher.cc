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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "hotword/errors.h"
#include "hotword/spectrogram.h"
#include "json.hpp"
#include "util.h"

namespace hotword {

namespace {

constexpr char kTemplateMagic[4] = {'E', 'W', 'N', 'T'};
constexpr std::size_t kRefBytes = kEmbeddingDim * 4;

// Length of the JSON object starting at text[0], found by brace matching
// outside string literals. Returns 0 when the object is not closed.
std::size_t JsonObjectLength(std::span<const std::uint8_t> text) {
  if (text.empty() || text[0] != '{') return 0;
  int depth = 0;
  bool in_string = false, escaped = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = static_cast<char>(text[i]);
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}' && --depth == 0) {
      return i + 1;
    }
  }
  return 0;
}

}  // namespace

void HotwordTemplate::Validate() const {
  if (refs.empty() || refs.size() > kMaxReferences) {
    throw TemplateError("template needs 1..32 references, has " + std::to_string(refs.size()));
  }
  for (const auto& ref : refs) {
    if (std::abs(ref.Norm() - 1.0) > 1e-4) throw TemplateError("reference is not unit-norm");
  }
  if (!(tau > 0.0 && tau <= 2.0)) throw TemplateError("tau must lie in (0, 2]");
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw TemplateError("cutoff must lie in (0, 1)");
}

double Euclidean(const Embedding& a, const Embedding& b) {
  double sq = 0.0;
  for (int i = 0; i < kEmbeddingDim; ++i) {
    const double d = static_cast<double>(a.values[i]) - b.values[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

double SimilarityScore(double distance, double tau) {
  if (!(distance >= 0.0)) throw ParamError("distance must be non-negative");
  if (!(tau > 0.0)) throw ParamError("tau must be positive");
  const double t4 = tau * tau * tau * tau;
  const double x4 = distance * distance * distance * distance;
  return t4 / (t4 + x4);
}

Embedding EmbedClip(const AudioClip& clip, const Embedder& embedder) {
  return embedder.Embed(LogMel(FitWindow(Resample(clip, kSampleRate))));
}

HotwordTemplate Enroll(std::string name, std::span<const AudioClip> clips,
                       const Embedder& embedder, double tau, double cutoff) {
  if (clips.empty()) throw ParamError("enrollment needs at least one clip");
  HotwordTemplate t;
  t.name = std::move(name);
  t.tau = tau;
  t.cutoff = cutoff;
  for (const auto& clip : clips) t.refs.push_back(EmbedClip(clip, embedder));
  t.Validate();
  return t;
}

MatchResult Match(const Embedding& e, const HotwordTemplate& t) { return Match(e, t, t.cutoff); }

MatchResult Match(const Embedding& e, const HotwordTemplate& t, double cutoff) {
  if (t.refs.empty()) throw TemplateError("template has no references");
  MatchResult result;
  result.distance = std::numeric_limits<double>::infinity();
  for (const auto& ref : t.refs) result.distance = std::min(result.distance, Euclidean(e, ref));
  result.score = SimilarityScore(result.distance, t.tau);
  result.accepted = result.score >= cutoff;
  return result;
}

std::vector<std::uint8_t> SerializeTemplate(const HotwordTemplate& t) {
  t.Validate();
  nlohmann::ordered_json header;
  header["name"] = t.name;
  header["tau"] = t.tau;
  header["cutoff"] = t.cutoff;
  header["ref_count"] = t.refs.size();
  std::vector<std::uint8_t> out(kTemplateMagic, kTemplateMagic + 4);
  internal::PutU32(&out, kTemplateVersion);
  internal::PutBytes(&out, header.dump());
  for (const auto& ref : t.refs) {
    for (float v : ref.values) internal::PutF32(&out, v);
  }
  return out;
}

HotwordTemplate ParseTemplate(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kTemplateMagic, 4) != 0) {
    throw TemplateError("bad magic");
  }
  const std::uint32_t version = internal::GetU32(bytes.data() + 4);
  if (version != kTemplateVersion) {
    throw TemplateError("unsupported version " + std::to_string(version));
  }
  const auto rest = bytes.subspan(8);
  const std::size_t header_len = JsonObjectLength(rest);
  if (header_len == 0) throw TemplateError("unterminated header");
  const auto header = nlohmann::json::parse(rest.begin(), rest.begin() + header_len, nullptr, false);
  if (header.is_discarded() || !header.is_object()) throw TemplateError("malformed header");

  HotwordTemplate t;
  std::size_t ref_count = 0;
  try {
    t.name = header.at("name").get<std::string>();
    t.tau = header.at("tau").get<double>();
    t.cutoff = header.at("cutoff").get<double>();
    ref_count = header.at("ref_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw TemplateError(std::string("malformed header: ") + e.what());
  }
  const auto payload = rest.subspan(header_len);
  if (ref_count > kMaxReferences || payload.size() != ref_count * kRefBytes) {
    throw TemplateError("payload holds " + std::to_string(payload.size()) + " bytes for " +
                        std::to_string(ref_count) + " references");
  }
  t.refs.resize(ref_count);
  for (std::size_t r = 0; r < ref_count; ++r) {
    for (int i = 0; i < kEmbeddingDim; ++i) {
      const float v = internal::GetF32(payload.data() + r * kRefBytes + 4 * i);
      if (!std::isfinite(v)) throw TemplateError("non-finite reference value");
      t.refs[r].values[i] = v;
    }
  }
  t.Validate();
  return t;
}

void SaveTemplate(const HotwordTemplate& t, const std::filesystem::path& path) {
  internal::WriteFileBytes(path, SerializeTemplate(t));
}

HotwordTemplate LoadTemplate(const std::filesystem::path& path) {
  return ParseTemplate(internal::ReadFileBytes(path));
}

std::vector<HotwordTemplate> LoadTemplateDir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ewnt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<HotwordTemplate> templates;
  for (const auto& f : files) templates.push_back(LoadTemplate(f));
  return templates;
}

}  // namespace hotword
