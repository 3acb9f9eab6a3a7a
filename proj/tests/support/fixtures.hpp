#pragma once

#include <array>
#include <string>
#include <vector>

#include "skelnav/grid.hpp"
#include "skelnav/navmetrics.hpp"
#include "skelnav/neuroskel.hpp"

namespace fixture {

using skelnav::OccupancyGrid;

/// Rows of '#' (occupied) and '.' (free); the caller keeps the border closed.
OccupancyGrid from_ascii(const std::vector<std::string>& rows);

/// Closed w x h map with the whole interior free.
OccupancyGrid open_room(int w, int h);

/// Horizontal corridor `free_rows` cells wide, `length` cells long, closed by
/// one wall row above and below. The center line is y = 1 + free_rows / 2.
OccupancyGrid corridor(int free_rows, int length);

/// Generated 64x64 maps with seeds derived from `master`.
std::vector<OccupancyGrid> dungeons(std::size_t count, std::uint64_t master);
std::vector<skelnav::CorpusMap> corpus(std::size_t count, std::uint64_t master);

/// Hand-built SkelUnet weights whose forward pass reduces to
/// sigmoid(gain * relu(correlate(input, kernel)) + bias): the input rides the
/// enc1 skip connection into dec1.conv1 and every other path is zero.
skelnav::NetworkParameters passthrough_weights(const std::array<float, 9>& kernel, float gain, float bias);

}  // namespace fixture
