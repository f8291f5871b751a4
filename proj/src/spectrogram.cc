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

#include "hotword/spectrogram.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.h"
#include "hotword/errors.h"
#include "util.h"

namespace hotword {

namespace internal {

Fft::Fft(int size) : size_(size) {
  if (size < 2 || (size & (size - 1)) != 0) {
    throw ParamError("FFT size must be a power of two");
  }
  int bits = 0;
  while ((1 << bits) < size) ++bits;
  bit_reverse_.resize(size);
  for (int i = 0; i < size; ++i) {
    int r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
  twiddles_.resize(size / 2);
  for (int k = 0; k < size / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * k / size;
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Fft::Forward(std::vector<std::complex<double>>* data) const {
  auto& x = *data;
  for (int i = 0; i < size_; ++i) {
    if (i < bit_reverse_[i]) std::swap(x[i], x[bit_reverse_[i]]);
  }
  for (int len = 2; len <= size_; len <<= 1) {
    const int half = len / 2;
    const int step = size_ / len;
    for (int start = 0; start < size_; start += len) {
      for (int k = 0; k < half; ++k) {
        // Written out: std::complex operator* goes through __muldc3.
        const std::complex<double> w = twiddles_[k * step];
        const std::complex<double> b = x[start + k + half];
        const std::complex<double> t(w.real() * b.real() - w.imag() * b.imag(),
                                     w.real() * b.imag() + w.imag() * b.real());
        x[start + k + half] = x[start + k] - t;
        x[start + k] += t;
      }
    }
  }
}

}  // namespace internal

namespace {

const std::vector<double>& HannWindow() {
  static const std::vector<double> window = [] {
    std::vector<double> w(kWindowLength);
    for (int n = 0; n < kWindowLength; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / kWindowLength);
    }
    return w;
  }();
  return window;
}

void CheckNetworkWindow(const AudioClip& clip) {
  if (clip.sample_rate != kSampleRate || clip.samples.size() != kSampleRate) {
    throw ShapeError("expected 16000 samples at 16 kHz, got " +
                     std::to_string(clip.samples.size()) + " at " +
                     std::to_string(clip.sample_rate) + " Hz");
  }
}

}  // namespace

MelFilterbank::MelFilterbank(Matrix weights, std::vector<double> edges_hz)
    : weights_(std::move(weights)), edges_hz_(std::move(edges_hz)) {
  for (int m = 0; m < weights_.rows; ++m) {
    int first = weights_.cols, last = 0;
    for (int k = 0; k < weights_.cols; ++k) {
      if (weights_.at(m, k) != 0.0f) {
        first = std::min(first, k);
        last = k + 1;
      }
    }
    support_.push_back({std::min(first, last), last});
  }
}

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank BuildFilterbank(const FilterbankParams& p) {
  if (p.n_mels < 1 || p.n_fft < 2 || p.sample_rate <= 0 || !(p.f_min >= 0.0) ||
      !(p.f_min < p.f_max) || p.f_max > p.sample_rate / 2.0) {
    throw ParamError("filterbank requires 0 <= f_min < f_max <= rate / 2");
  }
  const int num_bins = p.n_fft / 2 + 1;
  const double mel_lo = HzToMel(p.f_min);
  const double mel_hi = HzToMel(p.f_max);
  std::vector<double> edges(p.n_mels + 2);
  for (int i = 0; i < p.n_mels + 2; ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (p.n_mels + 1));
  }
  const double bin_hz = static_cast<double>(p.sample_rate) / p.n_fft;
  Matrix weights(p.n_mels, num_bins);
  for (int m = 0; m < p.n_mels; ++m) {
    const double lo = edges[m], center = edges[m + 1], hi = edges[m + 2];
    double peak = 0.0;
    for (int k = 0; k < num_bins; ++k) {
      const double f = k * bin_hz;
      const double w = std::max(0.0, std::min((f - lo) / (center - lo),
                                              (hi - f) / (hi - center)));
      weights.at(m, k) = static_cast<float>(w);
      peak = std::max(peak, w);
    }
    if (peak <= 0.0) {
      throw ParamError("mel band " + std::to_string(m) +
                       " covers no FFT bin; use fewer bands or a larger FFT");
    }
    for (int k = 0; k < num_bins; ++k) {
      weights.at(m, k) = static_cast<float>(weights.at(m, k) / peak);
    }
  }
  return MelFilterbank(std::move(weights), std::move(edges));
}

const MelFilterbank& DefaultFilterbank() {
  static const MelFilterbank filterbank = BuildFilterbank();
  return filterbank;
}

int NumFrames(std::size_t num_samples) {
  if (num_samples < static_cast<std::size_t>(kWindowLength)) return 0;
  return static_cast<int>((num_samples - kWindowLength) / kHopLength) + 1;
}

Matrix StftPower(std::span<const float> samples) {
  const int frames = NumFrames(samples.size());
  if (frames == 0) {
    throw ShapeError("need at least " + std::to_string(kWindowLength) + " samples");
  }
  static const internal::Fft fft(kFftSize);
  const auto& window = HannWindow();
  Matrix power(frames, kNumBins);
  std::vector<std::complex<double>> buf(kFftSize);
  for (int t = 0; t < frames; ++t) {
    const float* frame = samples.data() + static_cast<std::size_t>(t) * kHopLength;
    for (int n = 0; n < kWindowLength; ++n) buf[n] = frame[n] * window[n];
    std::fill(buf.begin() + kWindowLength, buf.end(), 0.0);
    fft.Forward(&buf);
    for (int k = 0; k < kNumBins; ++k) power.at(t, k) = static_cast<float>(std::norm(buf[k]));
  }
  return power;
}

Matrix StftPower(const AudioClip& clip) {
  CheckNetworkWindow(clip);
  return StftPower(std::span<const float>(clip.samples));
}

MelSpectrogram LogMel(const AudioClip& clip) { return LogMel(clip, DefaultFilterbank()); }

MelSpectrogram LogMel(const AudioClip& clip, const MelFilterbank& filterbank) {
  CheckNetworkWindow(clip);
  if (filterbank.num_mels() != kNumMels || filterbank.num_bins() != kNumBins) {
    throw ShapeError("filterbank must be 64 x 257");
  }
  const Matrix power = StftPower(std::span<const float>(clip.samples));
  const Matrix& w = filterbank.weights();
  MelSpectrogram spec;
  for (int t = 0; t < kNumFrames; ++t) {
    const auto frame = power.row(t);
    for (int m = 0; m < kNumMels; ++m) {
      const auto filter = w.row(m);
      const auto [first, last] = filterbank.support(m);
      double energy = 0.0;
      for (int k = first; k < last; ++k) energy += static_cast<double>(frame[k]) * filter[k];
      spec.values.at(t, m) = static_cast<float>(std::log(std::max(energy, kMelFloor)));
    }
  }
  return spec;
}

void WriteSpectrogram(const std::filesystem::path& path, const MelSpectrogram& spec) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(spec.values.data.size() * 4);
  for (float v : spec.values.data) internal::PutF32(&bytes, v);
  internal::WriteFileBytes(path, bytes);
}

MelSpectrogram ReadSpectrogram(const std::filesystem::path& path) {
  const auto bytes = internal::ReadFileBytes(path);
  MelSpectrogram spec;
  if (bytes.size() != spec.values.data.size() * 4) {
    throw ShapeError("spectrogram file must hold 98 x 64 float32 values");
  }
  for (std::size_t i = 0; i < spec.values.data.size(); ++i) {
    spec.values.data[i] = internal::GetF32(bytes.data() + 4 * i);
  }
  return spec;
}

}  // namespace hotword
