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

#include "hotword/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "hotword/errors.h"
#include "util.h"

namespace hotword {

namespace {

using Json = nlohmann::ordered_json;

constexpr char kWeightsMagic[4] = {'E', 'W', 'N', '1'};
constexpr int kStemChannels = 32;
constexpr int kHeadChannels = 32;
constexpr int kHeadStages = 2;
constexpr int kPool = 2;
constexpr double kBatchNormEpsilon = 1e-3;
constexpr double kSeRatio = 0.25;

struct StageSpec {
  int expand;
  int kernel;
  int stride;
  int out;
  int repeats;
};

// The first four stages of EfficientNet-B0.
constexpr StageSpec kStages[] = {
    {1, 3, 1, 16, 1},
    {6, 3, 2, 24, 2},
    {6, 5, 2, 40, 2},
    {6, 3, 2, 80, 3},
};

std::string BlockName(int stage, int block) {
  return "stage" + std::to_string(stage + 1) + "/block" + std::to_string(block + 1);
}

std::string HeadName(const char* what, int i) { return std::string("head/") + what + std::to_string(i + 1); }

int SeWidth(int in_channels) {
  return std::max(1, static_cast<int>(std::lround(in_channels * kSeRatio)));
}

Json ConvParams(int kernel, int stride, const char* padding) {
  Json j;
  j["kernel_size"] = kernel;
  j["stride"] = stride;
  j["padding"] = padding;
  return j;
}

void AddConv(std::vector<TensorRecord>* out, const std::string& prefix, int k, int stride,
             int cin, int cout, bool bias, const char* padding = "same") {
  out->push_back({prefix + "/kernel", "conv2d", ConvParams(k, stride, padding), {k, k, cin, cout}});
  if (bias) out->push_back({prefix + "/bias", "conv2d", ConvParams(k, stride, padding), {cout}});
}

void AddNorm(std::vector<TensorRecord>* out, const std::string& prefix, int c) {
  Json hp;
  hp["epsilon"] = kBatchNormEpsilon;
  for (const char* part : {"gamma", "beta", "moving_mean", "moving_variance"}) {
    out->push_back({prefix + "/" + part, "batchnorm", hp, {c}});
  }
}

std::vector<TensorRecord> BuildArchRecords() {
  std::vector<TensorRecord> r;
  AddConv(&r, "stem/conv", 3, 2, 1, kStemChannels, false);
  AddNorm(&r, "stem/bn", kStemChannels);
  int in = kStemChannels;
  for (int s = 0; s < static_cast<int>(std::size(kStages)); ++s) {
    const StageSpec& st = kStages[s];
    for (int b = 0; b < st.repeats; ++b) {
      const std::string name = BlockName(s, b);
      const int stride = b == 0 ? st.stride : 1;
      const int mid = in * st.expand;
      if (st.expand != 1) {
        AddConv(&r, name + "/expand", 1, 1, in, mid, false);
        AddNorm(&r, name + "/expand_bn", mid);
      }
      r.push_back({name + "/depthwise/kernel", "depthwise_conv2d",
                   ConvParams(st.kernel, stride, "same"), {st.kernel, st.kernel, mid}});
      AddNorm(&r, name + "/depthwise_bn", mid);
      const int se = SeWidth(in);
      AddConv(&r, name + "/se_reduce", 1, 1, mid, se, true, "valid");
      AddConv(&r, name + "/se_expand", 1, 1, se, mid, true, "valid");
      AddConv(&r, name + "/project", 1, 1, mid, st.out, false);
      AddNorm(&r, name + "/project_bn", st.out);
      in = st.out;
    }
  }
  int cin = in;
  for (int i = 0; i < kHeadStages; ++i) {
    AddConv(&r, HeadName("conv", i), 3, 1, cin, kHeadChannels, true);
    AddNorm(&r, HeadName("bn", i), kHeadChannels);
    cin = kHeadChannels;
  }
  Json dense;
  dense["units"] = kEmbeddingDim;
  r.push_back({"head/dense/kernel", "dense", dense, {kHeadChannels, kEmbeddingDim}});
  r.push_back({"head/dense/bias", "dense", dense, {kEmbeddingDim}});
  return r;
}

bool StrideOverridable(const std::string& name) { return name.rfind("head/conv", 0) == 0; }

std::string ShapeString(const std::vector<int>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) s += (i ? "," : "") + std::to_string(shape[i]);
  return s + ")";
}

// Order-insensitive comparison of hyperparameter objects.
bool SameParams(const Json& a, const Json& b) {
  return nlohmann::json::parse(a.dump()) == nlohmann::json::parse(b.dump());
}

Padding ParsePadding(const Json& hp) {
  return hp.at("padding").get<std::string>() == "valid" ? Padding::kValid : Padding::kSame;
}

// Shape after a stride-s SAME convolution.
int Shrink(int n, int stride) { return (n + stride - 1) / stride; }

}  // namespace

double Embedding::Norm() const {
  double sq = 0.0;
  for (float v : values) sq += static_cast<double>(v) * v;
  return std::sqrt(sq);
}

const std::vector<TensorRecord>& ArchRecords() {
  static const std::vector<TensorRecord> records = BuildArchRecords();
  return records;
}

std::vector<LayerShape> IntermediateShapes() {
  std::vector<LayerShape> shapes;
  int h = Shrink(kNumFrames, 2), w = Shrink(kNumMels, 2);
  shapes.push_back({"stem", h, w, kStemChannels});
  for (int s = 0; s < static_cast<int>(std::size(kStages)); ++s) {
    h = Shrink(h, kStages[s].stride);
    w = Shrink(w, kStages[s].stride);
    shapes.push_back({"stage" + std::to_string(s + 1), h, w, kStages[s].out});
  }
  for (int i = 0; i < kHeadStages; ++i) {
    h = (h - kPool) / kPool + 1;
    w = (w - kPool) / kPool + 1;
    shapes.push_back({"head" + std::to_string(i + 1), h, w, kHeadChannels});
  }
  shapes.push_back({"embedding", 1, 1, kEmbeddingDim});
  return shapes;
}

// ---------------------------------------------------------------------------
// ModelWeights

void ModelWeights::Set(TensorRecord record, Tensor tensor) {
  if (record.shape != tensor.shape()) {
    throw ShapeError("tensor " + record.name + " does not match its record shape");
  }
  auto it = std::find_if(records_.begin(), records_.end(),
                         [&](const TensorRecord& r) { return r.name == record.name; });
  if (it == records_.end()) {
    records_.push_back(record);
  } else {
    *it = record;
  }
  tensors_.insert_or_assign(record.name, std::move(tensor));
}

bool ModelWeights::Has(std::string_view name) const { return tensors_.find(name) != tensors_.end(); }

const TensorRecord& ModelWeights::record(std::string_view name) const {
  for (const auto& r : records_) {
    if (r.name == name) return r;
  }
  throw ManifestMismatch("missing tensor " + std::string(name));
}

const Tensor& ModelWeights::tensor(std::string_view name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw ManifestMismatch("missing tensor " + std::string(name));
  return it->second;
}

Tensor& ModelWeights::mutable_tensor(std::string_view name) {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw ManifestMismatch("missing tensor " + std::string(name));
  return it->second;
}

void ModelWeights::Validate() const {
  const auto& expected = ArchRecords();
  if (records_.size() != expected.size()) {
    for (const auto& r : records_) {
      const bool known = std::any_of(expected.begin(), expected.end(),
                                     [&](const TensorRecord& e) { return e.name == r.name; });
      if (!known) throw ManifestMismatch("unexpected tensor " + r.name);
    }
  }
  for (const auto& want : expected) {
    const TensorRecord& got = record(want.name);
    if (got.kind != want.kind) {
      throw ManifestMismatch(want.name + ": kind " + got.kind + ", expected " + want.kind);
    }
    if (got.shape != want.shape) {
      throw ManifestMismatch(want.name + ": shape " + ShapeString(got.shape) + ", expected " +
                             ShapeString(want.shape));
    }
    Json got_hp = got.hyperparams;
    if (StrideOverridable(want.name) && got_hp.is_object() && got_hp.contains("stride")) {
      const Json& stride = got_hp["stride"];
      if (!stride.is_number_integer() || stride.get<int>() < 1 || stride.get<int>() > 3) {
        throw ManifestMismatch(want.name + ": stride must be 1, 2 or 3");
      }
      got_hp["stride"] = want.hyperparams.at("stride");
    }
    if (!SameParams(got_hp, want.hyperparams)) {
      throw ManifestMismatch(want.name + ": hyperparams " + got.hyperparams.dump() +
                             ", expected " + want.hyperparams.dump());
    }
    const Tensor& t = tensor(want.name);
    if (!t.AllFinite()) throw NonFiniteTensor(want.name);
    if (want.name.ends_with("/moving_variance")) {
      for (float v : t.values()) {
        if (v < 0.0f) throw ManifestMismatch(want.name + ": negative variance");
      }
    }
  }
  for (int i = 0; i < kHeadStages; ++i) {
    const std::string conv = HeadName("conv", i);
    if (record(conv + "/kernel").hyperparams.at("stride") !=
        record(conv + "/bias").hyperparams.at("stride")) {
      throw ManifestMismatch(conv + ": kernel and bias disagree on stride");
    }
  }
}

// ---------------------------------------------------------------------------
// EWN1

ModelWeights ParseWeights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kWeightsMagic, 4) != 0) {
    throw BadMagic("not an EWN1 weight file");
  }
  const std::size_t manifest_len = internal::GetU32(bytes.data() + 4);
  if (manifest_len > bytes.size() - 8) throw BadMagic("truncated manifest");
  const auto* manifest_begin = bytes.data() + 8;
  Json manifest = Json::parse(manifest_begin, manifest_begin + manifest_len, nullptr, false);
  if (manifest.is_discarded() || !manifest.is_array()) {
    throw ManifestMismatch("manifest is not a JSON array");
  }
  const std::uint8_t* payload = manifest_begin + manifest_len;
  const std::size_t payload_len = bytes.size() - 8 - manifest_len;

  ModelWeights weights;
  for (const auto& entry : manifest) {
    TensorRecord record;
    std::size_t offset = 0, length = 0;
    try {
      record.name = entry.at("name").get<std::string>();
      record.kind = entry.at("kind").get<std::string>();
      record.hyperparams = entry.at("hyperparams");
      record.shape = entry.at("shape").get<std::vector<int>>();
      offset = entry.at("byte_offset").get<std::size_t>();
      length = entry.at("byte_len").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
      throw ManifestMismatch(std::string("malformed manifest entry: ") + e.what());
    }
    if (weights.Has(record.name)) throw ManifestMismatch("duplicate tensor " + record.name);
    for (int d : record.shape) {
      if (d <= 0) throw ManifestMismatch(record.name + ": non-positive dimension");
    }
    const std::size_t count = ShapeSize(record.shape);
    if (length != count * 4) {
      throw ManifestMismatch(record.name + ": byte_len " + std::to_string(length) +
                             " does not match shape " + ShapeString(record.shape));
    }
    if (offset > payload_len || length > payload_len - offset) {
      throw BadMagic("truncated payload for " + record.name);
    }
    std::vector<float> data(count);
    for (std::size_t i = 0; i < count; ++i) data[i] = internal::GetF32(payload + offset + 4 * i);
    Tensor tensor(record.shape, std::move(data));
    if (!tensor.AllFinite()) throw NonFiniteTensor(record.name);
    weights.Set(std::move(record), std::move(tensor));
  }
  weights.Validate();
  return weights;
}

std::vector<std::uint8_t> SerializeWeights(const ModelWeights& weights) {
  Json manifest = Json::array();
  std::size_t offset = 0;
  for (const auto& r : weights.records()) {
    Json entry;
    entry["name"] = r.name;
    entry["kind"] = r.kind;
    entry["hyperparams"] = r.hyperparams;
    entry["shape"] = r.shape;
    entry["byte_offset"] = offset;
    entry["byte_len"] = ShapeSize(r.shape) * 4;
    offset += ShapeSize(r.shape) * 4;
    manifest.push_back(std::move(entry));
  }
  const std::string text = manifest.dump();
  std::vector<std::uint8_t> out;
  out.reserve(8 + text.size() + offset);
  out.insert(out.end(), kWeightsMagic, kWeightsMagic + 4);
  internal::PutU32(&out, static_cast<std::uint32_t>(text.size()));
  internal::PutBytes(&out, text);
  for (const auto& r : weights.records()) {
    for (float v : weights.tensor(r.name).values()) internal::PutF32(&out, v);
  }
  return out;
}

ModelWeights LoadWeights(const std::filesystem::path& path) {
  return ParseWeights(internal::ReadFileBytes(path));
}

void SaveWeights(const ModelWeights& weights, const std::filesystem::path& path) {
  internal::WriteFileBytes(path, SerializeWeights(weights));
}

// ---------------------------------------------------------------------------
// Embedder

Embedder::Conv Embedder::LoadConv(const std::string& prefix, bool with_bias) const {
  const TensorRecord& r = weights_.record(prefix + "/kernel");
  Conv conv;
  conv.kernel = weights_.tensor(r.name);
  conv.stride = r.hyperparams.at("stride").get<int>();
  conv.padding = ParsePadding(r.hyperparams);
  if (with_bias) {
    const auto b = weights_.tensor(prefix + "/bias").values();
    conv.bias.assign(b.begin(), b.end());
  }
  return conv;
}

Embedder::Norm Embedder::LoadNorm(const std::string& prefix) const {
  auto copy = [&](const char* part) {
    const auto v = weights_.tensor(prefix + "/" + part).values();
    return std::vector<float>(v.begin(), v.end());
  };
  Norm norm;
  norm.name = prefix;
  norm.gamma = copy("gamma");
  norm.beta = copy("beta");
  norm.mean = copy("moving_mean");
  norm.variance = copy("moving_variance");
  norm.epsilon = weights_.record(prefix + "/gamma").hyperparams.at("epsilon").get<float>();
  return norm;
}

Embedder::Embedder(ModelWeights weights) : weights_(std::move(weights)) {
  weights_.Validate();
  stem_ = LoadConv("stem/conv", false);
  stem_bn_ = LoadNorm("stem/bn");

  int h = ConvOutputSize(kNumFrames, 3, stem_.stride, stem_.padding);
  int w = ConvOutputSize(kNumMels, 3, stem_.stride, stem_.padding);
  shapes_.push_back({"stem", h, w, kStemChannels});
  int in = kStemChannels;
  for (int s = 0; s < static_cast<int>(std::size(kStages)); ++s) {
    const StageSpec& st = kStages[s];
    for (int b = 0; b < st.repeats; ++b) {
      Block block;
      block.name = BlockName(s, b);
      block.has_expand = st.expand != 1;
      if (block.has_expand) {
        block.expand = LoadConv(block.name + "/expand", false);
        block.expand_bn = LoadNorm(block.name + "/expand_bn");
      }
      const TensorRecord& dw = weights_.record(block.name + "/depthwise/kernel");
      block.depthwise.kernel = weights_.tensor(dw.name);
      block.depthwise.stride = dw.hyperparams.at("stride").get<int>();
      block.depthwise.padding = ParsePadding(dw.hyperparams);
      block.depthwise_bn = LoadNorm(block.name + "/depthwise_bn");
      block.se_reduce = LoadConv(block.name + "/se_reduce", true);
      block.se_expand = LoadConv(block.name + "/se_expand", true);
      block.project = LoadConv(block.name + "/project", false);
      block.project_bn = LoadNorm(block.name + "/project_bn");
      block.residual = block.depthwise.stride == 1 && in == st.out;
      h = ConvOutputSize(h, st.kernel, block.depthwise.stride, block.depthwise.padding);
      w = ConvOutputSize(w, st.kernel, block.depthwise.stride, block.depthwise.padding);
      blocks_.push_back(std::move(block));
      in = st.out;
    }
    shapes_.push_back({"stage" + std::to_string(s + 1), h, w, st.out});
  }
  for (int i = 0; i < kHeadStages; ++i) {
    HeadStage stage{LoadConv(HeadName("conv", i), true), LoadNorm(HeadName("bn", i))};
    h = ConvOutputSize(h, 3, stage.conv.stride, stage.conv.padding);
    w = ConvOutputSize(w, 3, stage.conv.stride, stage.conv.padding);
    h = ConvOutputSize(h, kPool, kPool, Padding::kValid);
    w = ConvOutputSize(w, kPool, kPool, Padding::kValid);
    if (h <= 0 || w <= 0) {
      throw ManifestMismatch(HeadName("conv", i) + ": stride leaves nothing to pool");
    }
    head_.push_back(std::move(stage));
    shapes_.push_back({"head" + std::to_string(i + 1), h, w, kHeadChannels});
  }
  dense_kernel_ = weights_.tensor("head/dense/kernel");
  const auto bias = weights_.tensor("head/dense/bias").values();
  dense_bias_.assign(bias.begin(), bias.end());
  if (h * w * kHeadChannels != dense_kernel_.dim(0)) {
    throw ManifestMismatch("head/dense/kernel: flattened head output has " +
                           std::to_string(h * w * kHeadChannels) + " features, kernel expects " +
                           std::to_string(dense_kernel_.dim(0)));
  }
  shapes_.push_back({"embedding", 1, 1, kEmbeddingDim});
}

std::vector<LayerShape> Embedder::Shapes() const { return shapes_; }

Tensor Embedder::ApplyNorm(Tensor x, const Norm& norm, const LayerObserver& observer) const {
  if (observer) observer(norm.name, x);
  return BatchNorm(std::move(x), norm.gamma, norm.beta, norm.mean, norm.variance, norm.epsilon);
}

Tensor Embedder::RunBlock(const Block& block, const Tensor& x,
                          const LayerObserver& observer) const {
  Tensor y = x;
  if (block.has_expand) {
    y = Conv2d(y, block.expand.kernel, block.expand.stride, block.expand.padding);
    y = Swish(ApplyNorm(std::move(y), block.expand_bn, observer));
  }
  y = DepthwiseConv2d(y, block.depthwise.kernel, block.depthwise.stride, block.depthwise.padding);
  y = Swish(ApplyNorm(std::move(y), block.depthwise_bn, observer));
  y = SqueezeExcite(std::move(y), block.se_reduce.kernel, block.se_reduce.bias,
                    block.se_expand.kernel, block.se_expand.bias);
  y = Conv2d(y, block.project.kernel, block.project.stride, block.project.padding);
  y = ApplyNorm(std::move(y), block.project_bn, observer);
  // Drop-connect is a training-time op; at inference the skip is a plain add.
  if (block.residual) y = Add(std::move(y), x);
  return y;
}

Embedding Embedder::Embed(const MelSpectrogram& spec) const { return Embed(spec, nullptr); }

Embedding Embedder::Embed(const MelSpectrogram& spec, const LayerObserver& observer) const {
  const Matrix& m = spec.values;
  if (m.rows != kNumFrames || m.cols != kNumMels || m.data.size() != static_cast<std::size_t>(kNumFrames) * kNumMels) {
    throw ShapeError("spectrogram must be 98 x 64");
  }
  Tensor x({kNumFrames, kNumMels, 1}, m.data);
  if (!x.AllFinite()) throw ShapeError("spectrogram holds non-finite values");

  x = Conv2d(x, stem_.kernel, stem_.stride, stem_.padding);
  x = Swish(ApplyNorm(std::move(x), stem_bn_, observer));
  for (const Block& block : blocks_) x = RunBlock(block, x, observer);
  for (const HeadStage& stage : head_) {
    x = Conv2d(x, stage.conv.kernel, stage.conv.stride, stage.conv.padding, stage.conv.bias);
    x = MaxPool2d(ApplyNorm(std::move(x), stage.bn, observer), kPool, kPool);
  }
  Tensor flat({static_cast<int>(x.size())},
              std::vector<float>(x.values().begin(), x.values().end()));
  if (observer) observer("head/dense", flat);
  Tensor out = L2Normalize(Dense(flat, dense_kernel_, dense_bias_));
  Embedding e;
  std::copy(out.values().begin(), out.values().end(), e.values.begin());
  return e;
}

// ---------------------------------------------------------------------------
// Random fixture

namespace {

std::vector<MelSpectrogram> CalibrationSet(std::uint64_t seed) {
  internal::Rng rng(seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<MelSpectrogram> specs;
  for (int i = 0; i < 12; ++i) {
    const std::uint64_t sub = seed * 1000003ULL + static_cast<std::uint64_t>(i);
    const float noise_amp = static_cast<float>(rng.Uniform(0.005, 0.05));
    AudioClip noise = SynthNoise(sub, 1.0, noise_amp, i % 2 == 0);
    AudioClip clip;
    if (i % 3 == 2) {
      clip = noise;
    } else {
      AudioClip word = SynthToneWord(sub, rng.Uniform(0.4, 0.9));
      clip = AudioClip{std::vector<float>(kSampleRate, 0.0f), kSampleRate};
      const std::size_t offset = rng.Index(kSampleRate - word.samples.size() + 1);
      std::copy(word.samples.begin(), word.samples.end(),
                clip.samples.begin() + static_cast<std::ptrdiff_t>(offset));
      clip = MixNoise(clip, noise, 0.5f);
    }
    specs.push_back(LogMel(clip));
  }
  return specs;
}

}  // namespace

ModelWeights RandomWeights(std::uint64_t seed) {
  internal::Rng rng(seed);
  ModelWeights weights;
  for (const TensorRecord& r : ArchRecords()) {
    Tensor t(r.shape);
    const bool is_kernel = r.name.ends_with("/kernel");
    if (is_kernel) {
      // He-normal over the fan-in.
      int fan_in = r.shape[0];
      if (r.kind == "conv2d") fan_in = r.shape[0] * r.shape[1] * r.shape[2];
      if (r.kind == "depthwise_conv2d") fan_in = r.shape[0] * r.shape[1];
      const double stddev = std::sqrt(2.0 / fan_in);
      for (float& v : t.values()) v = static_cast<float>(stddev * rng.Normal());
    } else if (r.name.ends_with("/gamma") || r.name.ends_with("/moving_variance")) {
      std::fill(t.values().begin(), t.values().end(), 1.0f);
    }
    weights.Set(r, std::move(t));
  }

  // Set each batch norm's statistics to what it sees on the calibration set,
  // in network order so later layers see already-normalized inputs.
  const auto calibration = CalibrationSet(seed);
  std::vector<std::string> norms;
  for (const TensorRecord& r : ArchRecords()) {
    if (r.name.ends_with("/gamma")) norms.push_back(r.name.substr(0, r.name.size() - 6));
  }
  norms.push_back("head/dense");
  for (const std::string& layer : norms) {
    const Embedder embedder(weights);
    std::vector<double> sum, sum_sq;
    std::size_t count = 0;
    int channels = 0;
    auto observe = [&](std::string_view name, const Tensor& input) {
      if (name != layer) return;
      channels = input.dim(input.rank() - 1);
      sum.resize(channels, 0.0);
      sum_sq.resize(channels, 0.0);
      for (std::size_t i = 0; i < input.size(); ++i) {
        sum[i % channels] += input[i];
        sum_sq[i % channels] += static_cast<double>(input[i]) * input[i];
      }
      count += input.size() / channels;
    };
    for (const auto& spec : calibration) embedder.Embed(spec, observe);
    std::vector<float> mean(channels), variance(channels);
    for (int c = 0; c < channels; ++c) {
      const double m = sum[c] / count;
      mean[c] = static_cast<float>(m);
      variance[c] = static_cast<float>(std::max(sum_sq[c] / count - m * m, 0.0));
    }
    if (layer == "head/dense") {
      // Center the pre-normalization embedding on the calibration mean.
      const Tensor& kernel = weights.tensor("head/dense/kernel");
      Tensor& bias = weights.mutable_tensor("head/dense/bias");
      for (int j = 0; j < kEmbeddingDim; ++j) {
        double acc = 0.0;
        for (int i = 0; i < channels; ++i) acc += mean[i] * kernel[static_cast<std::size_t>(i) * kEmbeddingDim + j];
        bias[j] = static_cast<float>(-acc);
      }
    } else {
      std::copy(mean.begin(), mean.end(), weights.mutable_tensor(layer + "/moving_mean").data());
      std::copy(variance.begin(), variance.end(),
                weights.mutable_tensor(layer + "/moving_variance").data());
    }
  }
  weights.Validate();
  return weights;
}

}  // namespace hotword
