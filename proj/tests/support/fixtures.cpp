#include "fixtures.hpp"

#include <stdexcept>

namespace fixture {

using skelnav::CellState;

OccupancyGrid from_ascii(const std::vector<std::string>& rows) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  std::vector<CellState> cells;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != w) throw std::invalid_argument("ragged fixture");
    for (char c : r) cells.push_back(c == '#' ? CellState::Occupied : CellState::Free);
  }
  return OccupancyGrid(w, h, std::move(cells));
}

OccupancyGrid open_room(int w, int h) {
  auto g = OccupancyGrid::closed(w, h);
  g.fill_rect(1, 1, w - 2, h - 2, CellState::Free);
  return g;
}

OccupancyGrid corridor(int free_rows, int length) {
  return open_room(length, free_rows + 2);
}

std::vector<OccupancyGrid> dungeons(std::size_t count, std::uint64_t master) {
  std::vector<OccupancyGrid> out;
  for (std::size_t i = 0; i < count; ++i) {
    skelnav::GenParams p;
    p.seed = skelnav::derive_seed(master, i);
    out.push_back(skelnav::generate_dungeon(p));
  }
  return out;
}

std::vector<skelnav::CorpusMap> corpus(std::size_t count, std::uint64_t master) {
  std::vector<skelnav::CorpusMap> out;
  std::size_t i = 0;
  for (auto& g : dungeons(count, master)) out.push_back({"map_" + std::to_string(i++), std::move(g)});
  return out;
}

skelnav::NetworkParameters passthrough_weights(const std::array<float, 9>& kernel, float gain, float bias) {
  skelnav::NetworkParameters p;
  for (const auto& spec : skelnav::skelunet_manifest()) {
    skelnav::Tensor t{spec.shape, {}};
    t.data.assign(t.element_count(), 0.0f);
    const auto at = [&t](int o, int i, int ky, int kx) -> float& {
      const int in = t.shape[1], k = t.shape[2];
      return t.data[((static_cast<std::size_t>(o) * in + i) * k + ky) * k + kx];
    };
    if (spec.name == "enc1.conv1.weight" || spec.name == "enc1.conv2.weight" || spec.name == "dec1.conv2.weight") {
      at(0, 0, 1, 1) = 1.0f;
    } else if (spec.name == "dec1.conv1.weight") {
      // channels 0..15 come from the upsampler, 16..31 from the enc1 skip
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx) at(0, 16, ky, kx) = kernel[ky * 3 + kx];
    } else if (spec.name == "head.weight") {
      t.data[0] = gain;
    } else if (spec.name == "head.bias") {
      t.data[0] = bias;
    }
    p.add(spec.name, std::move(t));
  }
  return p;
}

}  // namespace fixture
