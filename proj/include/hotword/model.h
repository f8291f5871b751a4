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

#ifndef HOTWORD_MODEL_H_
#define HOTWORD_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hotword/nn.h"
#include "hotword/spectrogram.h"
#include "json.hpp"

namespace hotword {

inline constexpr int kEmbeddingDim = 256;

// Unit-norm output of the base network.
struct Embedding {
  std::array<float, kEmbeddingDim> values{};

  double Norm() const;
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

// One named tensor of the weight manifest.
struct TensorRecord {
  std::string name;
  std::string kind;  // conv2d | depthwise_conv2d | batchnorm | dense
  nlohmann::ordered_json hyperparams;
  std::vector<int> shape;
};

// Every tensor the base network needs, in network order:
//   stem     conv 3x3/2, 32 ch, BN, swish
//   stage1   MBConv x1, expand 1, k3, s1, 16 ch
//   stage2   MBConv x2, expand 6, k3, s2, 24 ch
//   stage3   MBConv x2, expand 6, k5, s2, 40 ch
//   stage4   MBConv x3, expand 6, k3, s2, 80 ch
//   head     2 x (conv 3x3/1, 32 ch, BN, max-pool 2), dense 256, L2 norm
// Every MBConv carries squeeze-excitation with ratio 0.25 of its input width.
const std::vector<TensorRecord>& ArchRecords();

struct LayerShape {
  std::string layer;
  int h = 0;
  int w = 0;
  int c = 0;

  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

// Output shape of each stage for a 98 x 64 x 1 input; the last entry is the
// 256-wide embedding.
std::vector<LayerShape> IntermediateShapes();

// Name-addressed tensors plus the manifest order they were declared in.
class ModelWeights {
 public:
  // Appends a tensor, or replaces the one with the same name.
  void Set(TensorRecord record, Tensor tensor);

  const std::vector<TensorRecord>& records() const { return records_; }
  bool Has(std::string_view name) const;
  const TensorRecord& record(std::string_view name) const;
  const Tensor& tensor(std::string_view name) const;
  Tensor& mutable_tensor(std::string_view name);

  // Checks names, kinds, hyperparameters and shapes against ArchRecords()
  // and that every value is finite. Head conv strides may be overridden.
  void Validate() const;

 private:
  std::vector<TensorRecord> records_;
  std::map<std::string, Tensor, std::less<>> tensors_;
};

// EWN1 container: "EWN1" | u32 LE manifest length | JSON manifest | payload
// of little-endian float32 tensors at the manifest's byte offsets.
ModelWeights ParseWeights(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> SerializeWeights(const ModelWeights& weights);
ModelWeights LoadWeights(const std::filesystem::path& path);
void SaveWeights(const ModelWeights& weights, const std::filesystem::path& path);

// He-initialized weights whose batch-norm statistics and dense bias are
// calibrated on synthetic speech-like clips, so the random network already
// separates different inputs. Deterministic in seed.
ModelWeights RandomWeights(std::uint64_t seed);

// Called with the input of each batch norm and of the final dense layer.
using LayerObserver = std::function<void(std::string_view layer, const Tensor& input)>;

class Embedder {
 public:
  explicit Embedder(ModelWeights weights);

  Embedding Embed(const MelSpectrogram& spec) const;
  Embedding Embed(const MelSpectrogram& spec, const LayerObserver& observer) const;

  // Shape chain under the loaded hyperparameters.
  std::vector<LayerShape> Shapes() const;
  const ModelWeights& weights() const { return weights_; }

 private:
  struct Conv {
    Tensor kernel;
    std::vector<float> bias;
    int stride = 1;
    Padding padding = Padding::kSame;
  };
  struct Norm {
    std::string name;
    std::vector<float> gamma, beta, mean, variance;
    float epsilon = 1e-3f;
  };
  struct Block {
    std::string name;
    bool has_expand = false;
    Conv expand;
    Norm expand_bn;
    Conv depthwise;
    Norm depthwise_bn;
    Conv se_reduce, se_expand;
    Conv project;
    Norm project_bn;
    bool residual = false;
  };
  struct HeadStage {
    Conv conv;
    Norm bn;
  };

  Conv LoadConv(const std::string& prefix, bool with_bias) const;
  Norm LoadNorm(const std::string& prefix) const;
  Tensor ApplyNorm(Tensor x, const Norm& norm, const LayerObserver& observer) const;
  Tensor RunBlock(const Block& block, const Tensor& x, const LayerObserver& observer) const;

  ModelWeights weights_;
  Conv stem_;
  Norm stem_bn_;
  std::vector<Block> blocks_;
  std::vector<HeadStage> head_;
  Tensor dense_kernel_;
  std::vector<float> dense_bias_;
  std::vector<LayerShape> shapes_;
};

}  // namespace hotword

#endif  // HOTWORD_MODEL_H_
