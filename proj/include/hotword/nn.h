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

#ifndef HOTWORD_NN_H_
#define HOTWORD_NN_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hotword {

// Row-major float32 tensor. Feature maps are (H, W, C); conv kernels are
// (k, k, Cin, Cout); depthwise kernels (k, k, C); dense weights (N, M).
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, float fill = 0.0f);
  Tensor(std::vector<int> shape, std::vector<float> data);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[i]; }
  std::size_t size() const { return data_.size(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }
  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  // (h, w, c) access for rank-3 tensors.
  float& at(int h, int w, int c) {
    return data_[(static_cast<std::size_t>(h) * shape_[1] + w) * shape_[2] + c];
  }
  const float& at(int h, int w, int c) const {
    return data_[(static_cast<std::size_t>(h) * shape_[1] + w) * shape_[2] + c];
  }

  bool AllFinite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<int> shape_;
  std::vector<float> data_;
};

std::size_t ShapeSize(const std::vector<int>& shape);

enum class Padding { kSame, kValid };

// ceil(in / stride) for SAME, floor((in - kernel) / stride) + 1 for VALID
// (0 when the kernel does not fit).
int ConvOutputSize(int in, int kernel, int stride, Padding padding);

// (begin, end) zero padding for SAME; odd totals put the extra row at the end.
std::pair<int, int> SamePadding(int in, int kernel, int stride);

// Optional bias has one entry per output channel.
Tensor Conv2d(const Tensor& x, const Tensor& kernel, int stride, Padding padding,
              std::span<const float> bias = {});
Tensor DepthwiseConv2d(const Tensor& x, const Tensor& kernel, int stride,
                       Padding padding);

// Inference batch norm over the last axis.
Tensor BatchNorm(Tensor x, std::span<const float> gamma, std::span<const float> beta,
                 std::span<const float> mean, std::span<const float> variance,
                 float epsilon = 1e-3f);

Tensor Sigmoid(Tensor x);
Tensor Swish(Tensor x);

Tensor GlobalAvgPool(const Tensor& x);
// VALID (floor) pooling.
Tensor MaxPool2d(const Tensor& x, int kernel = 2, int stride = 2);

// x (N) . weights (N, M) + bias (M).
Tensor Dense(const Tensor& x, const Tensor& weights, std::span<const float> bias);

Tensor L2Normalize(Tensor x, float epsilon = 1e-12f);

// x * sigmoid(expand(swish(reduce(avg_pool(x))))), with 1x1 reduce/expand
// kernels shaped (1, 1, C, R) and (1, 1, R, C).
Tensor SqueezeExcite(Tensor x, const Tensor& reduce_kernel,
                     std::span<const float> reduce_bias,
                     const Tensor& expand_kernel,
                     std::span<const float> expand_bias);

Tensor Add(Tensor a, const Tensor& b);

}  // namespace hotword

#endif  // HOTWORD_NN_H_
