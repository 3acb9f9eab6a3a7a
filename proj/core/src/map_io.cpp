#include "skelnav/map_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include "skelnav/errors.hpp"

namespace skelnav {

namespace {

bool starts_with(std::span<const std::uint8_t> bytes, std::string_view magic) {
  return bytes.size() >= magic.size() && std::memcmp(bytes.data(), magic.data(), magic.size()) == 0;
}

// Tokenizer over a PGM header: whitespace separated, '#' starts a comment.
class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  long next_int(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw FormatError(std::string("PGM: expected ") + what);
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000'000L) throw FormatError(std::string("PGM: ") + what + " too large");
      ++pos_;
    }
    return v;
  }

  // after maxval exactly one whitespace byte precedes the raster
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) throw FormatError("PGM: missing separator before raster");
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t pos() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }
  bool at_end() const { return pos_ >= bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

GrayImage decode_pgm(std::span<const std::uint8_t> bytes, bool binary) {
  if (!starts_with(bytes, binary ? "P5" : "P2")) throw FormatError(binary ? "PGM: missing P5 magic" : "PGM: missing P2 magic");
  PgmReader rd(bytes);
  rd.seek(2);
  const long w = rd.next_int("width");
  const long h = rd.next_int("height");
  const long maxval = rd.next_int("maxval");
  if (w <= 0 || h <= 0) throw FormatError("PGM: non-positive dimensions");
  if (maxval != 255) throw FormatError("PGM: maxval must be 255, got " + std::to_string(maxval));
  GrayImage img{static_cast<int>(w), static_cast<int>(h), {}};
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (binary) {
    rd.skip_single_space();
    const std::size_t remaining = bytes.size() - rd.pos();
    if (remaining != n) {
      throw FormatError("PGM: raster has " + std::to_string(remaining) + " bytes, expected " + std::to_string(n));
    }
    img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(rd.pos()), bytes.end());
  } else {
    img.pixels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const long v = rd.next_int("pixel value");
      if (v > 255) throw FormatError("PGM: pixel value above maxval");
      img.pixels.push_back(static_cast<std::uint8_t>(v));
    }
    rd.skip_space_and_comments();
    if (!rd.at_end()) throw FormatError("PGM: trailing data after raster");
  }
  return img;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img, bool binary) {
  std::string header = std::string(binary ? "P5" : "P2") + "\n" + std::to_string(img.width) + " " +
                       std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (binary) {
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
  }
  std::string body;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      if (x) body += ' ';
      body += std::to_string(img.pixels[static_cast<std::size_t>(y) * img.width + x]);
    }
    body += '\n';
  }
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw FormatError(std::string("PNG: ") + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_COLOR) {
    png_image_free(&image);
    throw FormatError("PNG: image is not grayscale");
  }
  image.format = PNG_FORMAT_GRAY;
  GrayImage img{static_cast<int>(image.width), static_cast<int>(image.height), {}};
  img.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError("PNG: " + msg);
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels.data(), 0, nullptr)) {
    throw FormatError(std::string("PNG encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

MapFormat detect_format(std::span<const std::uint8_t> bytes) {
  if (starts_with(bytes, "P5")) return MapFormat::PgmBinary;
  if (starts_with(bytes, "P2")) return MapFormat::PgmAscii;
  if (starts_with(bytes, "\x89PNG")) return MapFormat::Png;
  throw FormatError("unrecognised image format");
}

MapFormat format_for_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".png") return MapFormat::Png;
  if (ext == ".pgm") return MapFormat::PgmBinary;
  throw FormatError("cannot infer image format from '" + path.string() + "'");
}

GrayImage decode_gray(std::span<const std::uint8_t> bytes, MapFormat format) {
  GrayImage img;
  switch (format) {
    case MapFormat::PgmBinary: img = decode_pgm(bytes, true); break;
    case MapFormat::PgmAscii: img = decode_pgm(bytes, false); break;
    case MapFormat::Png: img = decode_png(bytes); break;
  }
  if (img.pixels.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height)) {
    throw FormatError("image dimensions do not match pixel count");
  }
  return img;
}

std::vector<std::uint8_t> encode_gray(const GrayImage& image, MapFormat format) {
  switch (format) {
    case MapFormat::PgmBinary: return encode_pgm(image, true);
    case MapFormat::PgmAscii: return encode_pgm(image, false);
    case MapFormat::Png: return encode_png(image);
  }
  throw FormatError("unknown format");
}

OccupancyGrid load_map(std::span<const std::uint8_t> bytes, MapFormat format) {
  const GrayImage img = decode_gray(bytes, format);
  std::vector<CellState> cells;
  cells.reserve(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const auto v = img.pixels[i];
    if (v == 0) {
      cells.push_back(CellState::Occupied);
    } else if (v == 255) {
      cells.push_back(CellState::Free);
    } else {
      throw ValueError("non-binary pixel value " + std::to_string(v) + " at (" +
                       std::to_string(i % static_cast<std::size_t>(img.width)) + "," +
                       std::to_string(i / static_cast<std::size_t>(img.width)) + ")");
    }
  }
  return OccupancyGrid(img.width, img.height, std::move(cells));
}

std::vector<std::uint8_t> save_map(const OccupancyGrid& grid, MapFormat format) {
  GrayImage img{grid.width(), grid.height(), {}};
  img.pixels.reserve(grid.size());
  for (auto c : grid.cells()) img.pixels.push_back(c == CellState::Occupied ? 0 : 255);
  return encode_gray(img, format);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return data;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing '" + path.string() + "'");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

OccupancyGrid read_map_file(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return load_map(bytes, detect_format(bytes));
}

void write_map_file(const std::filesystem::path& path, const OccupancyGrid& grid) {
  write_file(path, save_map(grid, format_for_path(path)));
}

std::string format_meta(const MapMeta& meta) {
  std::string out;
  for (const auto& [k, v] : meta) out += k + "=" + v + "\n";
  return out;
}

MapMeta parse_meta(const std::string& text) {
  MapMeta meta;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw FormatError("meta line " + std::to_string(lineno) + ": expected key=value");
    }
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

std::filesystem::path meta_path_for(const std::filesystem::path& map_path) {
  auto p = map_path;
  p.replace_extension(".meta");
  return p;
}

}  // namespace skelnav
