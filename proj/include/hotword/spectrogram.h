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

#ifndef HOTWORD_SPECTROGRAM_H_
#define HOTWORD_SPECTROGRAM_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "hotword/audio.h"

namespace hotword {

// Framing: 25 ms Hann window, 10 ms hop, 512-point FFT. One second at 16 kHz
// gives 98 frames, the network's input height.
inline constexpr int kWindowLength = 400;
inline constexpr int kHopLength = 160;
inline constexpr int kFftSize = 512;
inline constexpr int kNumBins = kFftSize / 2 + 1;
inline constexpr int kNumMels = 64;
inline constexpr int kNumFrames = 98;
inline constexpr double kMelFloor = 1e-10;

// Dense row-major float matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0f) {}
  float& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  float at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::span<const float> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

// 98 x 64 natural-log mel energies, frames by mel bands.
struct MelSpectrogram {
  Matrix values{kNumFrames, kNumMels};
};

struct FilterbankParams {
  int n_mels = kNumMels;
  int n_fft = kFftSize;
  int sample_rate = kSampleRate;
  double f_min = 80.0;
  double f_max = 7600.0;
};

// Triangular filters, equally spaced on the mel scale, each scaled so its
// largest weight is exactly 1.
class MelFilterbank {
 public:
  MelFilterbank(Matrix weights, std::vector<double> edges_hz);

  int num_mels() const { return weights_.rows; }
  int num_bins() const { return weights_.cols; }
  const Matrix& weights() const { return weights_; }
  // n_mels + 2 edge frequencies; filter i spans edges[i]..edges[i + 2] and
  // peaks at edges[i + 1].
  const std::vector<double>& edges_hz() const { return edges_hz_; }
  double center_hz(int mel) const { return edges_hz_[mel + 1]; }
  // [first, last) FFT bins with non-zero weight in filter mel.
  std::pair<int, int> support(int mel) const { return support_[mel]; }

 private:
  Matrix weights_;
  std::vector<double> edges_hz_;
  std::vector<std::pair<int, int>> support_;
};

double HzToMel(double hz);
double MelToHz(double mel);

MelFilterbank BuildFilterbank(const FilterbankParams& params = {});
// The default 64-band filterbank, built on first use and shared read-only.
const MelFilterbank& DefaultFilterbank();

// floor((n - 400) / 160) + 1, or 0 when n < 400.
int NumFrames(std::size_t num_samples);

// Power spectrum of every frame of an arbitrary-length signal (>= 400
// samples): NumFrames(n) x 257.
Matrix StftPower(std::span<const float> samples);
// Same for a network window; requires exactly 16000 samples at 16 kHz.
Matrix StftPower(const AudioClip& clip);

MelSpectrogram LogMel(const AudioClip& clip);
MelSpectrogram LogMel(const AudioClip& clip, const MelFilterbank& filterbank);

// Raw little-endian float32, row-major 98 x 64.
void WriteSpectrogram(const std::filesystem::path& path, const MelSpectrogram& spec);
MelSpectrogram ReadSpectrogram(const std::filesystem::path& path);

}  // namespace hotword

#endif  // HOTWORD_SPECTROGRAM_H_
