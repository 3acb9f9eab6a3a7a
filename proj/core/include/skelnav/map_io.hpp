#pragma once

// Map and mask image I/O. On disk, 0 = occupied and 255 = free; any other
// pixel value is rejected when reading a map.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "skelnav/grid.hpp"

namespace skelnav {

enum class MapFormat { PgmBinary, PgmAscii, Png };

/// Sniffs the magic bytes; throws FormatError when unrecognised.
MapFormat detect_format(std::span<const std::uint8_t> bytes);
/// Chooses a format from a file extension (.pgm -> P5, .png -> PNG).
MapFormat format_for_path(const std::filesystem::path& path);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

GrayImage decode_gray(std::span<const std::uint8_t> bytes, MapFormat format);
std::vector<std::uint8_t> encode_gray(const GrayImage& image, MapFormat format);

OccupancyGrid load_map(std::span<const std::uint8_t> bytes, MapFormat format);
std::vector<std::uint8_t> save_map(const OccupancyGrid& grid, MapFormat format);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

OccupancyGrid read_map_file(const std::filesystem::path& path);
void write_map_file(const std::filesystem::path& path, const OccupancyGrid& grid);

/// Sidecar `.meta` file: UTF-8 `key=value` lines, sorted by key on write.
using MapMeta = std::map<std::string, std::string>;
std::string format_meta(const MapMeta& meta);
MapMeta parse_meta(const std::string& text);
std::filesystem::path meta_path_for(const std::filesystem::path& map_path);

}  // namespace skelnav
