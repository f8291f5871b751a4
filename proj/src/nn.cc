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

#include "hotword/nn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hotword/errors.h"

namespace hotword {

namespace {

std::string ShapeString(const std::vector<int>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

void RequireRank(const Tensor& t, int rank, const char* what) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(what) + " must have rank " + std::to_string(rank) +
                     ", got " + ShapeString(t.shape()));
  }
}

void CheckStride(int stride) {
  if (stride < 1) throw ShapeError("stride must be positive");
}

struct Window {
  int out_h, out_w, pad_top, pad_left;
};

Window ConvWindow(const Tensor& x, int k, int stride, Padding padding) {
  const int h = x.dim(0), w = x.dim(1);
  Window win{ConvOutputSize(h, k, stride, padding),
             ConvOutputSize(w, k, stride, padding), 0, 0};
  if (padding == Padding::kSame) {
    win.pad_top = SamePadding(h, k, stride).first;
    win.pad_left = SamePadding(w, k, stride).first;
  }
  if (win.out_h <= 0 || win.out_w <= 0) {
    throw ShapeError("kernel " + std::to_string(k) + " does not fit input " +
                     ShapeString(x.shape()));
  }
  return win;
}

}  // namespace

std::size_t ShapeSize(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(std::vector<int> shape, float fill)
    : shape_(std::move(shape)), data_(ShapeSize(shape_), fill) {}

Tensor::Tensor(std::vector<int> shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != ShapeSize(shape_)) {
    throw ShapeError("data length " + std::to_string(data_.size()) +
                     " does not match shape " + ShapeString(shape_));
  }
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

int ConvOutputSize(int in, int kernel, int stride, Padding padding) {
  if (padding == Padding::kSame) return (in + stride - 1) / stride;
  if (in < kernel) return 0;
  return (in - kernel) / stride + 1;
}

std::pair<int, int> SamePadding(int in, int kernel, int stride) {
  const int out = (in + stride - 1) / stride;
  const int total = std::max((out - 1) * stride + kernel - in, 0);
  return {total / 2, total - total / 2};
}

Tensor Conv2d(const Tensor& x, const Tensor& kernel, int stride, Padding padding,
              std::span<const float> bias) {
  RequireRank(x, 3, "conv input");
  RequireRank(kernel, 4, "conv kernel");
  CheckStride(stride);
  const int k = kernel.dim(0);
  const int cin = x.dim(2), cout = kernel.dim(3);
  if (kernel.dim(1) != k) throw ShapeError("conv kernel must be square");
  if (kernel.dim(2) != cin) {
    throw ShapeError("conv expects " + std::to_string(kernel.dim(2)) +
                     " input channels, got " + std::to_string(cin));
  }
  if (!bias.empty() && static_cast<int>(bias.size()) != cout) {
    throw ShapeError("conv bias length mismatch");
  }
  const Window win = ConvWindow(x, k, stride, padding);
  const int h = x.dim(0), w = x.dim(1);
  Tensor out({win.out_h, win.out_w, cout});
  const float* xd = x.data();
  const float* kd = kernel.data();
  for (int oh = 0; oh < win.out_h; ++oh) {
    for (int ow = 0; ow < win.out_w; ++ow) {
      float* o = &out.at(oh, ow, 0);
      if (!bias.empty()) std::copy(bias.begin(), bias.end(), o);
      for (int kh = 0; kh < k; ++kh) {
        const int ih = oh * stride - win.pad_top + kh;
        if (ih < 0 || ih >= h) continue;
        for (int kw = 0; kw < k; ++kw) {
          const int iw = ow * stride - win.pad_left + kw;
          if (iw < 0 || iw >= w) continue;
          const float* in = xd + (static_cast<std::size_t>(ih) * w + iw) * cin;
          const float* kern = kd + static_cast<std::size_t>(kh * k + kw) * cin * cout;
          for (int ci = 0; ci < cin; ++ci) {
            const float v = in[ci];
            const float* kc = kern + static_cast<std::size_t>(ci) * cout;
            for (int co = 0; co < cout; ++co) o[co] += v * kc[co];
          }
        }
      }
    }
  }
  return out;
}

Tensor DepthwiseConv2d(const Tensor& x, const Tensor& kernel, int stride,
                       Padding padding) {
  RequireRank(x, 3, "depthwise input");
  RequireRank(kernel, 3, "depthwise kernel");
  CheckStride(stride);
  const int k = kernel.dim(0);
  const int c = x.dim(2);
  if (kernel.dim(1) != k) throw ShapeError("depthwise kernel must be square");
  if (kernel.dim(2) != c) {
    throw ShapeError("depthwise expects " + std::to_string(kernel.dim(2)) +
                     " channels, got " + std::to_string(c));
  }
  const Window win = ConvWindow(x, k, stride, padding);
  const int h = x.dim(0), w = x.dim(1);
  Tensor out({win.out_h, win.out_w, c});
  for (int oh = 0; oh < win.out_h; ++oh) {
    for (int ow = 0; ow < win.out_w; ++ow) {
      float* o = &out.at(oh, ow, 0);
      for (int kh = 0; kh < k; ++kh) {
        const int ih = oh * stride - win.pad_top + kh;
        if (ih < 0 || ih >= h) continue;
        for (int kw = 0; kw < k; ++kw) {
          const int iw = ow * stride - win.pad_left + kw;
          if (iw < 0 || iw >= w) continue;
          const float* in = &x.at(ih, iw, 0);
          const float* kern = kernel.data() + static_cast<std::size_t>(kh * k + kw) * c;
          for (int ch = 0; ch < c; ++ch) o[ch] += in[ch] * kern[ch];
        }
      }
    }
  }
  return out;
}

Tensor BatchNorm(Tensor x, std::span<const float> gamma, std::span<const float> beta,
                 std::span<const float> mean, std::span<const float> variance,
                 float epsilon) {
  if (x.rank() == 0) throw ShapeError("batch norm of a scalar");
  const std::size_t c = static_cast<std::size_t>(x.dim(x.rank() - 1));
  if (gamma.size() != c || beta.size() != c || mean.size() != c || variance.size() != c) {
    throw ShapeError("batch norm parameters must have " + std::to_string(c) + " entries");
  }
  std::vector<float> scale(c), shift(c);
  for (std::size_t i = 0; i < c; ++i) {
    scale[i] = gamma[i] / std::sqrt(variance[i] + epsilon);
    shift[i] = beta[i] - mean[i] * scale[i];
  }
  float* d = x.data();
  for (std::size_t i = 0; i < x.size(); i += c) {
    for (std::size_t ch = 0; ch < c; ++ch) d[i + ch] = d[i + ch] * scale[ch] + shift[ch];
  }
  return x;
}

Tensor Sigmoid(Tensor x) {
  for (float& v : x.values()) v = 1.0f / (1.0f + std::exp(-v));
  return x;
}

Tensor Swish(Tensor x) {
  for (float& v : x.values()) v = v / (1.0f + std::exp(-v));
  return x;
}

Tensor GlobalAvgPool(const Tensor& x) {
  RequireRank(x, 3, "pool input");
  const int c = x.dim(2);
  const std::size_t cells = static_cast<std::size_t>(x.dim(0)) * x.dim(1);
  if (cells == 0) throw ShapeError("pooling an empty feature map");
  std::vector<double> sum(c, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const float* cell = x.data() + i * c;
    for (int ch = 0; ch < c; ++ch) sum[ch] += cell[ch];
  }
  Tensor out({c});
  for (int ch = 0; ch < c; ++ch) out[ch] = static_cast<float>(sum[ch] / cells);
  return out;
}

Tensor MaxPool2d(const Tensor& x, int kernel, int stride) {
  RequireRank(x, 3, "pool input");
  CheckStride(stride);
  const int oh_n = ConvOutputSize(x.dim(0), kernel, stride, Padding::kValid);
  const int ow_n = ConvOutputSize(x.dim(1), kernel, stride, Padding::kValid);
  if (oh_n <= 0 || ow_n <= 0) {
    throw ShapeError("pool window does not fit input " + ShapeString(x.shape()));
  }
  const int c = x.dim(2);
  Tensor out({oh_n, ow_n, c});
  for (int oh = 0; oh < oh_n; ++oh) {
    for (int ow = 0; ow < ow_n; ++ow) {
      float* o = &out.at(oh, ow, 0);
      const float* first = &x.at(oh * stride, ow * stride, 0);
      std::copy(first, first + c, o);
      for (int kh = 0; kh < kernel; ++kh) {
        for (int kw = 0; kw < kernel; ++kw) {
          const float* in = &x.at(oh * stride + kh, ow * stride + kw, 0);
          for (int ch = 0; ch < c; ++ch) o[ch] = std::max(o[ch], in[ch]);
        }
      }
    }
  }
  return out;
}

Tensor Dense(const Tensor& x, const Tensor& weights, std::span<const float> bias) {
  RequireRank(x, 1, "dense input");
  RequireRank(weights, 2, "dense weights");
  const int n = weights.dim(0), m = weights.dim(1);
  if (x.dim(0) != n) {
    throw ShapeError("dense expects " + std::to_string(n) + " inputs, got " +
                     std::to_string(x.dim(0)));
  }
  if (static_cast<int>(bias.size()) != m) throw ShapeError("dense bias length mismatch");
  Tensor out({m});
  std::copy(bias.begin(), bias.end(), out.data());
  float* o = out.data();
  for (int i = 0; i < n; ++i) {
    const float v = x[i];
    const float* row = weights.data() + static_cast<std::size_t>(i) * m;
    for (int j = 0; j < m; ++j) o[j] += v * row[j];
  }
  return out;
}

Tensor L2Normalize(Tensor x, float epsilon) {
  double sq = 0.0;
  for (float v : x.values()) sq += static_cast<double>(v) * v;
  const double norm = std::max(std::sqrt(sq), static_cast<double>(epsilon));
  for (float& v : x.values()) v = static_cast<float>(v / norm);
  return x;
}

Tensor SqueezeExcite(Tensor x, const Tensor& reduce_kernel,
                     std::span<const float> reduce_bias,
                     const Tensor& expand_kernel,
                     std::span<const float> expand_bias) {
  const int c = x.dim(2);
  Tensor pooled = GlobalAvgPool(x);
  Tensor squeezed = Conv2d(Tensor({1, 1, c}, std::vector<float>(pooled.values().begin(),
                                                              pooled.values().end())),
                           reduce_kernel, 1, Padding::kValid, reduce_bias);
  Tensor gate = Sigmoid(Conv2d(Swish(std::move(squeezed)), expand_kernel, 1,
                               Padding::kValid, expand_bias));
  if (gate.dim(2) != c) throw ShapeError("squeeze-excite gate width mismatch");
  float* d = x.data();
  for (std::size_t i = 0; i < x.size(); i += c) {
    for (int ch = 0; ch < c; ++ch) d[i + ch] *= gate[ch];
  }
  return x;
}

Tensor Add(Tensor a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("cannot add " + ShapeString(a.shape()) + " and " +
                     ShapeString(b.shape()));
  }
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace hotword
