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

#include "test_support.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hotword::testing {

const ModelWeights& FixtureWeights() {
  static const ModelWeights weights = RandomWeights(kFixtureSeed);
  return weights;
}

const Embedder& FixtureEmbedder() {
  static const Embedder embedder(FixtureWeights());
  return embedder;
}

AudioClip FixtureWord(std::uint64_t seed) { return FitWindow(SynthToneWord(seed, 0.7)); }

AudioClip SpliceInNoise(const AudioClip& clip, double seconds, std::vector<double> offsets_s,
                        std::uint64_t noise_seed, float noise_amp) {
  AudioClip out = SynthNoise(noise_seed, seconds, noise_amp);
  for (double t : offsets_s) {
    const auto at = static_cast<std::size_t>(std::llround(t * kSampleRate));
    std::copy(clip.samples.begin(), clip.samples.end(),
              out.samples.begin() + static_cast<std::ptrdiff_t>(at));
  }
  return out;
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hotword_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

Tensor RandomTensor(std::vector<int> shape, std::mt19937& rng, float lo, float hi) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<float> dist(lo, hi);
  for (float& v : t.values()) v = dist(rng);
  return t;
}

double RelError(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) return INFINITY;
  double diff = 0.0, scale = 1e-30;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(static_cast<double>(a[i]) - b[i]));
    scale = std::max(scale, std::abs(static_cast<double>(b[i])));
  }
  return diff / scale;
}

namespace oracle {

namespace {

// Explicit zero-padded copy of x for a k x k window with the given stride.
Tensor Pad(const Tensor& x, int k, int stride, bool same, int* out_h, int* out_w) {
  const int h = x.dim(0), w = x.dim(1), c = x.dim(2);
  int top = 0, bottom = 0, left = 0, right = 0;
  if (same) {
    *out_h = static_cast<int>(std::ceil(static_cast<double>(h) / stride));
    *out_w = static_cast<int>(std::ceil(static_cast<double>(w) / stride));
    const int th = std::max((*out_h - 1) * stride + k - h, 0);
    const int tw = std::max((*out_w - 1) * stride + k - w, 0);
    top = th / 2;
    bottom = th - top;
    left = tw / 2;
    right = tw - left;
  } else {
    *out_h = (h - k) / stride + 1;
    *out_w = (w - k) / stride + 1;
  }
  Tensor padded({h + top + bottom, w + left + right, c});
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j)
      for (int ch = 0; ch < c; ++ch) padded.at(i + top, j + left, ch) = x.at(i, j, ch);
  return padded;
}

}  // namespace

Tensor Conv2d(const Tensor& x, const Tensor& kernel, int stride, bool same) {
  const int k = kernel.dim(0), cin = kernel.dim(2), cout = kernel.dim(3);
  int oh = 0, ow = 0;
  const Tensor p = Pad(x, k, stride, same, &oh, &ow);
  Tensor out({oh, ow, cout});
  for (int i = 0; i < oh; ++i)
    for (int j = 0; j < ow; ++j)
      for (int co = 0; co < cout; ++co) {
        double acc = 0.0;
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b)
            for (int ci = 0; ci < cin; ++ci) {
              const std::size_t kidx = ((static_cast<std::size_t>(a) * k + b) * cin + ci) * cout + co;
              acc += static_cast<double>(p.at(i * stride + a, j * stride + b, ci)) * kernel[kidx];
            }
        out.at(i, j, co) = static_cast<float>(acc);
      }
  return out;
}

Tensor DepthwiseConv2d(const Tensor& x, const Tensor& kernel, int stride, bool same) {
  const int k = kernel.dim(0), c = kernel.dim(2);
  int oh = 0, ow = 0;
  const Tensor p = Pad(x, k, stride, same, &oh, &ow);
  Tensor out({oh, ow, c});
  for (int i = 0; i < oh; ++i)
    for (int j = 0; j < ow; ++j)
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0.0;
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) {
            const std::size_t kidx = (static_cast<std::size_t>(a) * k + b) * c + ch;
            acc += static_cast<double>(p.at(i * stride + a, j * stride + b, ch)) * kernel[kidx];
          }
        out.at(i, j, ch) = static_cast<float>(acc);
      }
  return out;
}

Tensor Dense(const Tensor& x, const Tensor& w, const Tensor& b) {
  const int n = w.dim(0), m = w.dim(1);
  Tensor out({m});
  for (int j = 0; j < m; ++j) {
    double acc = b[j];
    for (int i = 0; i < n; ++i) acc += static_cast<double>(x[i]) * w[static_cast<std::size_t>(i) * m + j];
    out[j] = static_cast<float>(acc);
  }
  return out;
}

Tensor MaxPool(const Tensor& x, int k, int stride) {
  const int oh = (x.dim(0) - k) / stride + 1, ow = (x.dim(1) - k) / stride + 1, c = x.dim(2);
  Tensor out({oh, ow, c});
  for (int i = 0; i < oh; ++i)
    for (int j = 0; j < ow; ++j)
      for (int ch = 0; ch < c; ++ch) {
        float best = -INFINITY;
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) best = std::max(best, x.at(i * stride + a, j * stride + b, ch));
        out.at(i, j, ch) = best;
      }
  return out;
}

Tensor AvgPool(const Tensor& x) {
  const int c = x.dim(2);
  Tensor out({c});
  for (int ch = 0; ch < c; ++ch) {
    double acc = 0.0;
    for (int i = 0; i < x.dim(0); ++i)
      for (int j = 0; j < x.dim(1); ++j) acc += x.at(i, j, ch);
    out[ch] = static_cast<float>(acc / (x.dim(0) * x.dim(1)));
  }
  return out;
}

std::vector<double> PowerDft(const std::vector<double>& signal) {
  const std::size_t n = signal.size();
  std::vector<double> power(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / n;
      re += signal[t] * std::cos(angle);
      im += signal[t] * std::sin(angle);
    }
    power[k] = re * re + im * im;
  }
  return power;
}

}  // namespace oracle

}  // namespace hotword::testing
