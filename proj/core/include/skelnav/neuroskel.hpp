#pragma once

// SkelUnet inference: weight container, U-Net forward pass, thresholding and
// pixel-level skeleton scoring.
//
// Architecture (the manifest is the contract shared with the training code):
//
//   input 1x64x64, Free = 1.0, Occupied = 0.0
//   enc1: conv3x3 1->16, relu, conv3x3 16->16, relu            (64x64) -> pool
//   enc2: conv3x3 16->32, relu, conv3x3 32->32, relu           (32x32) -> pool
//   enc3: conv3x3 32->64, relu, conv3x3 64->64, relu           (16x16) -> pool
//   bottleneck: conv3x3 64->128, relu, conv3x3 128->128, relu  (8x8)
//   dec3: up2x2 128->64, concat[up, enc3], conv3x3 128->64, relu, conv3x3 64->64, relu
//   dec2: up2x2 64->32,  concat[up, enc2], conv3x3 64->32, relu,  conv3x3 32->32, relu
//   dec1: up2x2 32->16,  concat[up, enc1], conv3x3 32->16, relu,  conv3x3 16->16, relu
//   head: conv1x1 16->1, sigmoid
//
// 3x3 convolutions use stride 1 and zero padding 1; pools are 2x2 max;
// up2x2 is a stride-2 transpose convolution. Conv weights are [out, in, k, k],
// transpose-conv weights are [in, out, 2, 2], biases are [out].

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skelnav/grid.hpp"
#include "skelnav/skeleton.hpp"

namespace skelnav {

inline constexpr int kSkelUnetInputSize = 64;

struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  std::size_t element_count() const;
};

struct TensorSpec {
  std::string name;
  std::vector<int> shape;
};

/// Ordered name -> tensor map; order is the container's declaration order.
class NetworkParameters {
 public:
  void add(std::string name, Tensor tensor);
  const Tensor& get(const std::string& name) const;
  const Tensor* find(const std::string& name) const;
  const std::vector<std::pair<std::string, Tensor>>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::vector<std::pair<std::string, Tensor>> entries_;
};

const std::vector<TensorSpec>& skelunet_manifest();
/// Manifest tensors filled with a constant (zeros give a uniform 0.5 output).
NetworkParameters constant_parameters(float value);
std::string shape_to_string(const std::vector<int>& shape);

/// SKLW container: "SKLW1", u32 LE index length, UTF-8 index of
/// `name dims... offset length` lines (offset/length in bytes relative to the
/// payload), then the payload of little-endian float32 tensors packed back to
/// back in index order.
/// parse_sklw checks container integrity only; load_weights also validates
/// against the manifest.
NetworkParameters parse_sklw(std::span<const std::uint8_t> bytes);
NetworkParameters load_weights(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> save_weights(const NetworkParameters& params);
void validate_against_manifest(const NetworkParameters& params);

namespace nn {

struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w) : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, 0.0f) {}
  float& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
  const float* row(int c, int y) const { return data.data() + (static_cast<std::size_t>(c) * height + y) * width; }
  float at(int c, int y, int x) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
};

/// Stride-1 convolution, weight [out, in, k, k], symmetric zero padding.
FeatureMap conv2d(const FeatureMap& in, const Tensor& weight, const Tensor& bias, int padding);
/// Stride-2, kernel-2 transpose convolution, weight [in, out, 2, 2].
FeatureMap conv_transpose2x2(const FeatureMap& in, const Tensor& weight, const Tensor& bias);
FeatureMap max_pool2x2(const FeatureMap& in);
FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b);
void relu_inplace(FeatureMap& m);
void sigmoid_inplace(FeatureMap& m);

}  // namespace nn

struct ProbabilityMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Deterministic SkelUnet forward pass. Throws SizeMismatch unless 64x64.
ProbabilityMap forward(const NetworkParameters& params, const OccupancyGrid& grid);

/// Skeleton iff p >= tau and the cell is free.
SkeletonMask apply_threshold(const ProbabilityMap& pmap, double tau, const OccupancyGrid& grid);

struct QualityReport {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Zero denominators give zero.
PrecisionRecall precision_recall_f1(double tp, double fp, double fn);

/// Per-pixel confusion with skeleton as the positive class.
QualityReport score_skeleton(const SkeletonMask& pred, const SkeletonMask& target);

/// Per-image averages of precision, recall and F1.
PrecisionRecall mean_quality(std::span<const QualityReport> reports);

/// Skeleton pixels with a diagonal skeleton neighbour whose link passes an
/// occupied orthogonal cell (the diagonal squeezes past an obstacle corner).
std::size_t diagonal_squeeze_count(const SkeletonMask& mask, const OccupancyGrid& grid);

}  // namespace skelnav
