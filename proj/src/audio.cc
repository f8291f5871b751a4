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

#include "hotword/audio.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "hotword/errors.h"
#include "util.h"

namespace hotword {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

bool ChunkIs(const std::uint8_t* p, const char* id) {
  return std::memcmp(p, id, 4) == 0;
}

float Clamp1(float v) { return std::clamp(v, -1.0f, 1.0f); }

}  // namespace

AudioClip DecodeWav(std::span<const std::uint8_t> bytes) {
  using internal::GetU16;
  using internal::GetU32;
  if (bytes.size() < 12 || !ChunkIs(bytes.data(), "RIFF") ||
      !ChunkIs(bytes.data() + 8, "WAVE")) {
    throw DecodeError("missing RIFF/WAVE header");
  }
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = GetU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (ChunkIs(chunk, "fmt ")) {
      if (size < 16 || body + size > bytes.size()) {
        throw DecodeError("truncated fmt chunk");
      }
      const std::uint8_t* f = bytes.data() + body;
      format = GetU16(f);
      channels = GetU16(f + 2);
      rate = GetU32(f + 4);
      bits = GetU16(f + 14);
      if (format == kFormatExtensible) {
        // cbSize, valid bits, channel mask, then the sub-format GUID whose
        // first two bytes carry the plain format tag.
        if (size < 40) throw DecodeError("truncated extensible fmt chunk");
        format = GetU16(f + 24);
      }
      have_fmt = true;
    } else if (ChunkIs(chunk, "data")) {
      if (!have_fmt) throw DecodeError("data chunk before fmt chunk");
      if (rate == 0) throw DecodeError("zero sample rate");
      if (channels != 1 && channels != 2) {
        throw UnsupportedFormat(std::to_string(channels) + " channels");
      }
      const bool pcm16 = format == kFormatPcm && bits == 16;
      const bool float32 = format == kFormatFloat && bits == 32;
      if (!pcm16 && !float32) {
        throw UnsupportedFormat("format tag " + std::to_string(format) +
                                " with " + std::to_string(bits) + " bits");
      }
      // Streaming writers may leave the size unset; take whole frames that
      // are actually present.
      const std::size_t avail = std::min(size, bytes.size() - body);
      const std::size_t width = bits / 8;
      const std::size_t frames = avail / (width * channels);
      const std::uint8_t* d = bytes.data() + body;

      AudioClip clip;
      clip.sample_rate = static_cast<int>(rate);
      clip.samples.resize(frames);
      auto sample = [&](std::size_t i) -> float {
        if (pcm16) {
          return static_cast<std::int16_t>(GetU16(d + 2 * i)) / 32768.0f;
        }
        const float v = internal::GetF32(d + 4 * i);
        if (!std::isfinite(v)) throw DecodeError("non-finite float sample");
        return Clamp1(v);
      };
      for (std::size_t i = 0; i < frames; ++i) {
        if (channels == 1) {
          clip.samples[i] = sample(i);
        } else {
          clip.samples[i] = 0.5f * (sample(2 * i) + sample(2 * i + 1));
        }
      }
      return clip;
    }
    pos = body + size + (size & 1);
  }
  throw DecodeError(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

std::vector<std::uint8_t> EncodeWav(const AudioClip& clip,
                                    WavEncoding encoding) {
  using internal::PutU16;
  using internal::PutU32;
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const std::uint32_t width = pcm16 ? 2 : 4;
  const auto data_len = static_cast<std::uint32_t>(clip.samples.size() * width);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_len);
  internal::PutBytes(&out, "RIFF");
  PutU32(&out, 36 + data_len);
  internal::PutBytes(&out, "WAVEfmt ");
  PutU32(&out, 16);
  PutU16(&out, pcm16 ? kFormatPcm : kFormatFloat);
  PutU16(&out, 1);
  PutU32(&out, static_cast<std::uint32_t>(clip.sample_rate));
  PutU32(&out, static_cast<std::uint32_t>(clip.sample_rate) * width);
  PutU16(&out, static_cast<std::uint16_t>(width));
  PutU16(&out, static_cast<std::uint16_t>(width * 8));
  internal::PutBytes(&out, "data");
  PutU32(&out, data_len);
  for (float s : clip.samples) {
    if (pcm16) {
      const long v = std::lround(static_cast<double>(s) * 32768.0);
      PutU16(&out, static_cast<std::uint16_t>(
                       static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L))));
    } else {
      internal::PutF32(&out, s);
    }
  }
  return out;
}

AudioClip ReadWav(const std::filesystem::path& path) {
  return DecodeWav(internal::ReadFileBytes(path));
}

void WriteWav(const std::filesystem::path& path, const AudioClip& clip,
              WavEncoding encoding) {
  internal::WriteFileBytes(path, EncodeWav(clip, encoding));
}

AudioClip Resample(const AudioClip& clip, int target_rate) {
  if (target_rate <= 0) throw ParamError("target rate must be positive");
  if (target_rate == clip.sample_rate || clip.samples.empty()) {
    AudioClip out = clip;
    out.sample_rate = target_rate;
    return out;
  }
  const std::size_t n = clip.samples.size();
  const double ratio = static_cast<double>(clip.sample_rate) / target_rate;
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * target_rate / clip.sample_rate));
  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * ratio;
    const auto i0 = std::min(static_cast<std::size_t>(pos), n - 1);
    const std::size_t i1 = std::min(i0 + 1, n - 1);
    const double frac = pos - static_cast<double>(i0);
    out.samples[i] = static_cast<float>(clip.samples[i0] * (1.0 - frac) +
                                        clip.samples[i1] * frac);
  }
  return out;
}

AudioClip MixNoise(const AudioClip& clean, const AudioClip& noise,
                   float noise_factor) {
  if (clean.sample_rate != noise.sample_rate) {
    throw RateMismatch(std::to_string(clean.sample_rate) + " vs " +
                       std::to_string(noise.sample_rate));
  }
  if (!(noise_factor >= 0.0f && noise_factor <= 1.0f)) {
    throw ParamError("noise factor must lie in [0, 1]");
  }
  if (noise.samples.empty() && noise_factor > 0.0f) {
    throw ParamError("empty noise clip");
  }
  AudioClip out;
  out.sample_rate = clean.sample_rate;
  out.samples.resize(clean.samples.size());
  const double a = noise_factor;
  double peak = 0.0;
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    const double n = a > 0.0 ? noise.samples[i % noise.samples.size()] : 0.0;
    const double v = (1.0 - a) * clean.samples[i] + a * n;
    out.samples[i] = static_cast<float>(v);
    peak = std::max(peak, std::abs(v));
  }
  if (peak > 1.0) {
    for (float& s : out.samples) s = static_cast<float>(s / peak);
  }
  return out;
}

AudioClip FitWindow(const AudioClip& clip, double length_s) {
  if (clip.samples.empty()) throw ParamError("cannot fit an empty clip");
  const auto target =
      static_cast<std::size_t>(std::llround(length_s * clip.sample_rate));
  const std::size_t n = clip.samples.size();
  AudioClip out;
  out.sample_rate = clip.sample_rate;
  if (n == target) {
    out.samples = clip.samples;
  } else if (n < target) {
    out.samples.assign(target, 0.0f);
    std::copy(clip.samples.begin(), clip.samples.end(),
              out.samples.begin() + static_cast<std::ptrdiff_t>((target - n) / 2));
  } else {
    const auto begin = clip.samples.begin() + static_cast<std::ptrdiff_t>((n - target) / 2);
    out.samples.assign(begin, begin + static_cast<std::ptrdiff_t>(target));
  }
  return out;
}

AudioClip SynthToneWord(std::uint64_t seed, double length_s, int sample_rate) {
  internal::Rng rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(length_s * sample_rate));
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.assign(n, 0.0f);
  const int syllables = 2 + static_cast<int>(rng.Index(3));
  const std::size_t seg = n / syllables;
  for (int s = 0; s < syllables; ++s) {
    const double f0 = rng.Uniform(120.0, 320.0);
    const double f1 = f0 * rng.Uniform(0.7, 1.4);
    const double formant = rng.Uniform(500.0, 3000.0);
    double phase = 0.0;
    for (std::size_t i = 0; i < seg; ++i) {
      const double u = static_cast<double>(i) / seg;
      const double f = f0 + (f1 - f0) * u;
      phase += 2.0 * std::numbers::pi * f / sample_rate;
      double v = 0.0;
      for (int h = 1; h <= 8; ++h) {
        const double fh = f * h;
        // Crude formant emphasis so syllables differ spectrally, not only in pitch.
        const double g = 1.0 / (1.0 + std::pow((fh - formant) / 400.0, 2.0));
        v += (0.15 + g) * std::sin(h * phase) / h;
      }
      const double env = std::sin(std::numbers::pi * u);
      clip.samples[s * seg + i] = static_cast<float>(0.3 * env * env * v);
    }
  }
  return clip;
}

AudioClip SynthNoise(std::uint64_t seed, double length_s, float amplitude,
                     bool brown, int sample_rate) {
  internal::Rng rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(length_s * sample_rate));
  AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples.resize(n);
  double state = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = rng.Uniform(-1.0, 1.0);
    if (brown) {
      state = 0.98 * state + 0.2 * v;
      v = state;
    }
    clip.samples[i] = Clamp1(static_cast<float>(amplitude * v));
  }
  return clip;
}

std::vector<std::filesystem::path> ListWavFiles(
    const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<ManifestRow> SynthDataset(const std::filesystem::path& words_dir,
                                      const std::filesystem::path& noises_dir,
                                      const std::filesystem::path& out_dir,
                                      const SynthOptions& options) {
  namespace fs = std::filesystem;
  if (options.per_word < 1) throw ParamError("per_word must be >= 1");
  if (!(options.alpha_min >= 0.0 && options.alpha_min <= options.alpha_max &&
        options.alpha_max <= 1.0)) {
    throw ParamError("invalid noise factor range");
  }

  // word -> its clean recordings, in sorted order.
  std::vector<std::pair<std::string, std::vector<fs::path>>> words;
  for (const auto& file : ListWavFiles(words_dir)) {
    words.push_back({file.stem().string(), {file}});
  }
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(words_dir)) {
    if (entry.is_directory()) subdirs.push_back(entry.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& dir : subdirs) {
    auto files = ListWavFiles(dir);
    if (!files.empty()) words.push_back({dir.filename().string(), std::move(files)});
  }
  std::sort(words.begin(), words.end());
  const auto noises = ListWavFiles(noises_dir);
  if (words.empty()) throw EmptyCorpus("no word recordings in " + words_dir.string());
  if (noises.empty()) throw EmptyCorpus("no noise clips in " + noises_dir.string());

  std::vector<AudioClip> noise_clips;
  for (const auto& path : noises) {
    noise_clips.push_back(Resample(ReadWav(path), kSampleRate));
    if (noise_clips.back().samples.empty()) {
      throw EmptyCorpus("empty noise clip " + path.string());
    }
  }

  fs::create_directories(out_dir);
  internal::Rng rng(options.seed);
  std::vector<ManifestRow> rows;
  for (const auto& [word, recordings] : words) {
    fs::create_directories(out_dir / word);
    for (int i = 0; i < options.per_word; ++i) {
      const auto& recording = recordings[rng.Index(recordings.size())];
      const std::size_t noise_index = rng.Index(noise_clips.size());
      // Rounded to the precision written in the manifest so the manifest
      // states the exact factor that was applied.
      const double alpha =
          std::round(rng.Uniform(options.alpha_min, options.alpha_max) * 1e6) / 1e6;
      const AudioClip clean = FitWindow(Resample(ReadWav(recording), kSampleRate));
      const AudioClip mixed =
          MixNoise(clean, noise_clips[noise_index], static_cast<float>(alpha));
      const fs::path rel = fs::path(word) / (word + "_" + std::to_string(i) + ".wav");
      WriteWav(out_dir / rel, mixed);
      rows.push_back({word, rel.generic_string(),
                      noises[noise_index].generic_string(), alpha});
    }
  }
  const std::string manifest = FormatManifest(rows);
  internal::WriteFileBytes(
      out_dir / "manifest.csv",
      std::span(reinterpret_cast<const std::uint8_t*>(manifest.data()), manifest.size()));
  return rows;
}

std::string FormatManifest(const std::vector<ManifestRow>& rows) {
  std::string out = "word,path,noise_path,alpha\n";
  char alpha[32];
  for (const auto& row : rows) {
    std::snprintf(alpha, sizeof(alpha), "%.6f", row.alpha);
    out += row.word + "," + row.path + "," + row.noise_path + "," + alpha + "\n";
  }
  return out;
}

}  // namespace hotword
