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

#ifndef HOTWORD_AUDIO_H_
#define HOTWORD_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hotword {

inline constexpr int kSampleRate = 16000;

// Mono float samples plus their rate. Decoders and normalizing ops keep
// every sample finite and within [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kSampleRate;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class WavEncoding { kPcm16, kFloat32 };

// Accepts RIFF/WAVE with PCM-16 or IEEE float-32 samples (plain or
// WAVE_FORMAT_EXTENSIBLE), 1 or 2 channels. Stereo is averaged to mono.
AudioClip DecodeWav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodeWav(const AudioClip& clip,
                                    WavEncoding encoding = WavEncoding::kPcm16);

AudioClip ReadWav(const std::filesystem::path& path);
void WriteWav(const std::filesystem::path& path, const AudioClip& clip,
              WavEncoding encoding = WavEncoding::kPcm16);

// Linear interpolation; output length is round(len * target / source).
AudioClip Resample(const AudioClip& clip, int target_rate);

// (1 - noise_factor) * clean + noise_factor * noise, with the noise looped or
// truncated to the clean length. The result is peak-normalized only when its
// peak exceeds 1.0.
AudioClip MixNoise(const AudioClip& clean, const AudioClip& noise,
                   float noise_factor);

// Symmetric zero-pad or center-crop to exactly round(length_s * rate) samples.
AudioClip FitWindow(const AudioClip& clip, double length_s = 1.0);

// Synthetic stand-ins for recorded corpora: a few gliding harmonic
// "syllables" under a smooth envelope, and white or brown noise.
AudioClip SynthToneWord(std::uint64_t seed, double length_s = 0.6,
                        int sample_rate = kSampleRate);
AudioClip SynthNoise(std::uint64_t seed, double length_s, float amplitude,
                     bool brown = false, int sample_rate = kSampleRate);

struct SynthOptions {
  int per_word = 5;
  double alpha_min = 0.05;
  double alpha_max = 0.2;
  std::uint64_t seed = 0;
};

struct ManifestRow {
  std::string word;
  std::string path;        // relative to the output directory
  std::string noise_path;
  double alpha = 0.0;
};

// Builds per_word noisy 1-second variants of every word. Words are either
// `<words_dir>/<word>.wav` or `<words_dir>/<word>/*.wav`; noises are every
// `*.wav` under noises_dir. Writes `<out_dir>/<word>/<word>_<i>.wav` and
// `<out_dir>/manifest.csv`, and returns the manifest rows.
std::vector<ManifestRow> SynthDataset(const std::filesystem::path& words_dir,
                                      const std::filesystem::path& noises_dir,
                                      const std::filesystem::path& out_dir,
                                      const SynthOptions& options);

std::string FormatManifest(const std::vector<ManifestRow>& rows);

// Sorted list of `*.wav` files directly inside dir.
std::vector<std::filesystem::path> ListWavFiles(
    const std::filesystem::path& dir);

}  // namespace hotword

#endif  // HOTWORD_AUDIO_H_
