#include "skelnav/neuroskel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>

#include "skelnav/errors.hpp"
#include "skelnav/text_util.hpp"

namespace skelnav {

std::size_t Tensor::element_count() const {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

void NetworkParameters::add(std::string name, Tensor tensor) {
  if (find(name)) throw FormatError("duplicate tensor '" + name + "'");
  entries_.emplace_back(std::move(name), std::move(tensor));
}

const Tensor* NetworkParameters::find(const std::string& name) const {
  for (const auto& [n, t] : entries_) {
    if (n == name) return &t;
  }
  return nullptr;
}

const Tensor& NetworkParameters::get(const std::string& name) const {
  const Tensor* t = find(name);
  if (!t) throw FormatError("missing tensor '" + name + "'");
  return *t;
}

std::string shape_to_string(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

const std::vector<TensorSpec>& skelunet_manifest() {
  static const std::vector<TensorSpec> manifest = [] {
    std::vector<TensorSpec> m;
    const auto conv = [&m](const std::string& name, int out, int in, int k) {
      m.push_back({name + ".weight", {out, in, k, k}});
      m.push_back({name + ".bias", {out}});
    };
    const auto up = [&m](const std::string& name, int in, int out) {
      m.push_back({name + ".weight", {in, out, 2, 2}});
      m.push_back({name + ".bias", {out}});
    };
    conv("enc1.conv1", 16, 1, 3);
    conv("enc1.conv2", 16, 16, 3);
    conv("enc2.conv1", 32, 16, 3);
    conv("enc2.conv2", 32, 32, 3);
    conv("enc3.conv1", 64, 32, 3);
    conv("enc3.conv2", 64, 64, 3);
    conv("bottleneck.conv1", 128, 64, 3);
    conv("bottleneck.conv2", 128, 128, 3);
    up("dec3.up", 128, 64);
    conv("dec3.conv1", 64, 128, 3);
    conv("dec3.conv2", 64, 64, 3);
    up("dec2.up", 64, 32);
    conv("dec2.conv1", 32, 64, 3);
    conv("dec2.conv2", 32, 32, 3);
    up("dec1.up", 32, 16);
    conv("dec1.conv1", 16, 32, 3);
    conv("dec1.conv2", 16, 16, 3);
    conv("head", 1, 16, 1);
    return m;
  }();
  return manifest;
}

NetworkParameters constant_parameters(float value) {
  NetworkParameters p;
  for (const auto& spec : skelunet_manifest()) {
    Tensor t{spec.shape, {}};
    t.data.assign(t.element_count(), value);
    p.add(spec.name, std::move(t));
  }
  return p;
}

// ---------------------------------------------------------------------------
// SKLW container

namespace {

constexpr char kMagic[] = "SKLW1";
constexpr std::size_t kMagicLen = 5;

std::uint32_t read_u32_le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

float decode_f32_le(const std::uint8_t* p) { return std::bit_cast<float>(read_u32_le(p)); }

}  // namespace

NetworkParameters parse_sklw(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagicLen + 4 || std::memcmp(bytes.data(), kMagic, kMagicLen) != 0) {
    throw FormatError("SKLW: bad magic");
  }
  const std::uint32_t index_len = read_u32_le(bytes.data() + kMagicLen);
  const std::size_t index_start = kMagicLen + 4;
  if (bytes.size() - index_start < index_len) throw FormatError("SKLW: index length exceeds file size");
  const std::string index(reinterpret_cast<const char*>(bytes.data() + index_start), index_len);
  const auto payload = bytes.subspan(index_start + index_len);

  NetworkParameters params;
  int lineno = 0;
  std::size_t packed = 0;  // tensors are stored back to back in index order
  for (const auto& raw : split(index, '\n')) {
    ++lineno;
    const auto tokens = split_whitespace(raw);
    if (tokens.empty()) continue;
    const std::string where = "SKLW index line " + std::to_string(lineno);
    if (tokens.size() < 4) throw FormatError(where + ": expected `name dims... offset length`");
    Tensor t;
    long long offset = 0, length = 0;
    try {
      for (std::size_t i = 1; i + 2 < tokens.size(); ++i) {
        const long long d = parse_int(tokens[i]);
        if (d <= 0 || d > (1 << 24)) throw FormatError(where + ": bad dimension");
        t.shape.push_back(static_cast<int>(d));
      }
      offset = parse_int(tokens[tokens.size() - 2]);
      length = parse_int(tokens[tokens.size() - 1]);
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
    const std::size_t count = t.element_count();
    if (length < 0 || offset < 0 || static_cast<std::size_t>(length) != count * 4) {
      throw FormatError(where + ": byte length " + std::to_string(length) + " does not match shape " +
                        shape_to_string(t.shape));
    }
    if (static_cast<std::size_t>(offset) != packed) {
      throw FormatError(where + ": offset " + std::to_string(offset) + ", expected " + std::to_string(packed));
    }
    packed += static_cast<std::size_t>(length);
    if (static_cast<std::size_t>(offset) > payload.size() ||
        payload.size() - static_cast<std::size_t>(offset) < static_cast<std::size_t>(length)) {
      throw FormatError(where + ": tensor extends past end of payload");
    }
    t.data.resize(count);
    const std::uint8_t* src = payload.data() + offset;
    for (std::size_t i = 0; i < count; ++i) {
      t.data[i] = decode_f32_le(src + 4 * i);
      if (!std::isfinite(t.data[i])) throw NonFiniteValue("tensor '" + tokens[0] + "' holds a non-finite value");
    }
    params.add(tokens[0], std::move(t));
  }
  if (packed != payload.size()) {
    throw FormatError("SKLW: payload holds " + std::to_string(payload.size()) + " bytes, index covers " +
                      std::to_string(packed));
  }
  return params;
}

void validate_against_manifest(const NetworkParameters& params) {
  std::set<std::string> known;
  for (const auto& spec : skelunet_manifest()) known.insert(spec.name);
  for (const auto& [name, t] : params.entries()) {
    if (!known.count(name)) throw FormatError("unknown tensor '" + name + "' not in the architecture manifest");
  }
  for (const auto& spec : skelunet_manifest()) {
    const Tensor* t = params.find(spec.name);
    if (!t) throw ShapeMismatch(spec.name, shape_to_string(spec.shape), "missing");
    if (t->shape != spec.shape) throw ShapeMismatch(spec.name, shape_to_string(spec.shape), shape_to_string(t->shape));
    if (t->data.size() != t->element_count()) throw FormatError("tensor '" + spec.name + "' data size mismatch");
    for (float v : t->data) {
      if (!std::isfinite(v)) throw NonFiniteValue("tensor '" + spec.name + "' holds a non-finite value");
    }
  }
}

NetworkParameters load_weights(std::span<const std::uint8_t> bytes) {
  auto params = parse_sklw(bytes);
  validate_against_manifest(params);
  return params;
}

std::vector<std::uint8_t> save_weights(const NetworkParameters& params) {
  std::string index;
  std::size_t offset = 0;
  for (const auto& [name, t] : params.entries()) {
    if (t.data.size() != t.element_count()) throw FormatError("tensor '" + name + "' data size mismatch");
    index += name;
    for (int d : t.shape) index += " " + std::to_string(d);
    const std::size_t len = t.data.size() * 4;
    index += " " + std::to_string(offset) + " " + std::to_string(len) + "\n";
    offset += len;
  }
  std::vector<std::uint8_t> out(kMagic, kMagic + kMagicLen);
  write_u32_le(out, static_cast<std::uint32_t>(index.size()));
  out.insert(out.end(), index.begin(), index.end());
  out.reserve(out.size() + offset);
  for (const auto& [name, t] : params.entries()) {
    for (float v : t.data) write_u32_le(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Layers

namespace nn {

FeatureMap conv2d(const FeatureMap& in, const Tensor& weight, const Tensor& bias, int padding) {
  if (weight.shape.size() != 4 || weight.shape[1] != in.channels || weight.shape[2] != weight.shape[3]) {
    throw ShapeMismatch("conv2d.weight", "[out," + std::to_string(in.channels) + ",k,k]", shape_to_string(weight.shape));
  }
  const int out_c = weight.shape[0];
  const int k = weight.shape[2];
  if (bias.element_count() != static_cast<std::size_t>(out_c)) {
    throw ShapeMismatch("conv2d.bias", "[" + std::to_string(out_c) + "]", shape_to_string(bias.shape));
  }
  const int oh = in.height + 2 * padding - k + 1;
  const int ow = in.width + 2 * padding - k + 1;
  if (oh <= 0 || ow <= 0) throw SizeMismatch("conv2d: kernel larger than padded input");
  FeatureMap out(out_c, oh, ow);
  for (int o = 0; o < out_c; ++o) {
    float* dst = &out.at(o, 0, 0);
    std::fill(dst, dst + static_cast<std::size_t>(oh) * ow, bias.data[o]);
    for (int c = 0; c < in.channels; ++c) {
      for (int ky = 0; ky < k; ++ky) {
        for (int kx = 0; kx < k; ++kx) {
          const float wv = weight.data[((static_cast<std::size_t>(o) * in.channels + c) * k + ky) * k + kx];
          if (wv == 0.0f) continue;
          for (int y = 0; y < oh; ++y) {
            const int iy = y + ky - padding;
            if (iy < 0 || iy >= in.height) continue;
            const int x_lo = std::max(0, padding - kx);
            const int x_hi = std::min(ow, in.width + padding - kx);
            const float* src = in.row(c, iy);
            float* row = dst + static_cast<std::size_t>(y) * ow;
            for (int x = x_lo; x < x_hi; ++x) row[x] += wv * src[x + kx - padding];
          }
        }
      }
    }
  }
  return out;
}

FeatureMap conv_transpose2x2(const FeatureMap& in, const Tensor& weight, const Tensor& bias) {
  if (weight.shape.size() != 4 || weight.shape[0] != in.channels || weight.shape[2] != 2 || weight.shape[3] != 2) {
    throw ShapeMismatch("up.weight", "[" + std::to_string(in.channels) + ",out,2,2]", shape_to_string(weight.shape));
  }
  const int out_c = weight.shape[1];
  if (bias.element_count() != static_cast<std::size_t>(out_c)) {
    throw ShapeMismatch("up.bias", "[" + std::to_string(out_c) + "]", shape_to_string(bias.shape));
  }
  FeatureMap out(out_c, in.height * 2, in.width * 2);
  for (int o = 0; o < out_c; ++o) {
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x) out.at(o, y, x) = bias.data[o];
  }
  for (int c = 0; c < in.channels; ++c) {
    for (int o = 0; o < out_c; ++o) {
      const float* w = &weight.data[(static_cast<std::size_t>(c) * out_c + o) * 4];
      for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
          const float v = in.at(c, y, x);
          out.at(o, 2 * y, 2 * x) += v * w[0];
          out.at(o, 2 * y, 2 * x + 1) += v * w[1];
          out.at(o, 2 * y + 1, 2 * x) += v * w[2];
          out.at(o, 2 * y + 1, 2 * x + 1) += v * w[3];
        }
      }
    }
  }
  return out;
}

FeatureMap max_pool2x2(const FeatureMap& in) {
  FeatureMap out(in.channels, in.height / 2, in.width / 2);
  for (int c = 0; c < in.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        out.at(c, y, x) = std::max({in.at(c, 2 * y, 2 * x), in.at(c, 2 * y, 2 * x + 1), in.at(c, 2 * y + 1, 2 * x),
                                    in.at(c, 2 * y + 1, 2 * x + 1)});
  return out;
}

FeatureMap concat_channels(const FeatureMap& a, const FeatureMap& b) {
  if (a.height != b.height || a.width != b.width) throw SizeMismatch("concat: spatial sizes differ");
  FeatureMap out;
  out.channels = a.channels + b.channels;
  out.height = a.height;
  out.width = a.width;
  out.data = a.data;
  out.data.insert(out.data.end(), b.data.begin(), b.data.end());
  return out;
}

void relu_inplace(FeatureMap& m) {
  for (auto& v : m.data) v = std::max(v, 0.0f);
}

void sigmoid_inplace(FeatureMap& m) {
  for (auto& v : m.data) v = 1.0f / (1.0f + std::exp(-v));
}

}  // namespace nn

namespace {

nn::FeatureMap double_conv(const NetworkParameters& p, const std::string& block, const nn::FeatureMap& in) {
  auto x = nn::conv2d(in, p.get(block + ".conv1.weight"), p.get(block + ".conv1.bias"), 1);
  nn::relu_inplace(x);
  x = nn::conv2d(x, p.get(block + ".conv2.weight"), p.get(block + ".conv2.bias"), 1);
  nn::relu_inplace(x);
  return x;
}

nn::FeatureMap up_block(const NetworkParameters& p, const std::string& block, const nn::FeatureMap& in,
                        const nn::FeatureMap& skip) {
  auto up = nn::conv_transpose2x2(in, p.get(block + ".up.weight"), p.get(block + ".up.bias"));
  return double_conv(p, block, nn::concat_channels(up, skip));
}

}  // namespace

ProbabilityMap forward(const NetworkParameters& params, const OccupancyGrid& grid) {
  if (grid.width() != kSkelUnetInputSize || grid.height() != kSkelUnetInputSize) {
    throw SizeMismatch("SkelUnet expects a 64x64 map, got " + std::to_string(grid.width()) + "x" +
                       std::to_string(grid.height()));
  }
  nn::FeatureMap input(1, grid.height(), grid.width());
  for (std::size_t i = 0; i < grid.size(); ++i) input.data[i] = grid.cells()[i] == CellState::Free ? 1.0f : 0.0f;

  const auto e1 = double_conv(params, "enc1", input);
  const auto e2 = double_conv(params, "enc2", nn::max_pool2x2(e1));
  const auto e3 = double_conv(params, "enc3", nn::max_pool2x2(e2));
  const auto b = double_conv(params, "bottleneck", nn::max_pool2x2(e3));
  const auto d3 = up_block(params, "dec3", b, e3);
  const auto d2 = up_block(params, "dec2", d3, e2);
  const auto d1 = up_block(params, "dec1", d2, e1);
  auto logits = nn::conv2d(d1, params.get("head.weight"), params.get("head.bias"), 0);
  nn::sigmoid_inplace(logits);

  ProbabilityMap out{grid.width(), grid.height(), {}};
  out.values.assign(logits.data.begin(), logits.data.end());
  return out;
}

SkeletonMask apply_threshold(const ProbabilityMap& pmap, double tau, const OccupancyGrid& grid) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ValueError("threshold must lie in [0, 1]");
  if (pmap.width != grid.width() || pmap.height != grid.height()) {
    throw DimensionMismatch("probability map and grid sizes differ");
  }
  SkeletonMask mask(grid.width(), grid.height());
  for (int y = 0; y < grid.height(); ++y)
    for (int x = 0; x < grid.width(); ++x)
      if (pmap.at(x, y) >= tau && grid.is_free(x, y)) mask.set(x, y, true);
  return mask;
}

PrecisionRecall precision_recall_f1(double tp, double fp, double fn) {
  PrecisionRecall r;
  r.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  r.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  r.f1 = r.precision + r.recall > 0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

QualityReport score_skeleton(const SkeletonMask& pred, const SkeletonMask& target) {
  if (pred.width() != target.width() || pred.height() != target.height()) {
    throw DimensionMismatch("predicted and target masks differ in size");
  }
  QualityReport q;
  for (std::size_t i = 0; i < pred.bits().size(); ++i) {
    const bool p = pred.bits()[i], t = target.bits()[i];
    if (p && t) ++q.tp;
    else if (p) ++q.fp;
    else if (t) ++q.fn;
    else ++q.tn;
  }
  const auto prf = precision_recall_f1(static_cast<double>(q.tp), static_cast<double>(q.fp), static_cast<double>(q.fn));
  q.precision = prf.precision;
  q.recall = prf.recall;
  q.f1 = prf.f1;
  return q;
}

PrecisionRecall mean_quality(std::span<const QualityReport> reports) {
  PrecisionRecall m;
  if (reports.empty()) return m;
  for (const auto& r : reports) {
    m.precision += r.precision;
    m.recall += r.recall;
    m.f1 += r.f1;
  }
  const double n = static_cast<double>(reports.size());
  m.precision /= n;
  m.recall /= n;
  m.f1 /= n;
  return m;
}

std::size_t diagonal_squeeze_count(const SkeletonMask& mask, const OccupancyGrid& grid) {
  std::size_t count = 0;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.at(x, y)) continue;
      bool squeezes = false;
      for (int dy : {-1, 1}) {
        for (int dx : {-1, 1}) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= mask.width() || ny >= mask.height() || !mask.at(nx, ny)) continue;
          if (grid.occupied_or_outside(nx, y) || grid.occupied_or_outside(x, ny)) squeezes = true;
        }
      }
      count += squeezes;
    }
  }
  return count;
}

}  // namespace skelnav
