#pragma once

#include <random>
#include <string>
#include <vector>

#include "regioncreep/core.hpp"
#include "regioncreep/io.hpp"
#include "regioncreep/rules.hpp"

namespace fixtures {

using namespace regioncreep;

inline BinaryImage grid(const std::string& rows) { return parse_ascii_grid(rows); }

// 8x8 letters, area 3. The 'I' is a serif I with a two pixel wide stem,
// 'T' is the same glyph without the bottom bar and 'O' a narrow ring.
inline const std::string kLetterI =
    "00000000\n"
    "01111110\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "01111110\n"
    "00000000\n";

inline const std::string kLetterO =
    "00000000\n"
    "00111100\n"
    "00100100\n"
    "00100100\n"
    "00100100\n"
    "00100100\n"
    "00111100\n"
    "00000000\n";

inline const std::string kLetterT =
    "00000000\n"
    "01111110\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "00000000\n";

// 'I' with two bottom-bar pixels missing next to the remaining body:
// (2,6) and (5,6). The bar end (6,6) is still attached.
inline const std::string kNoisyI =
    "00000000\n"
    "01111110\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "01011010\n"
    "00000000\n";

// As kNoisyI, but the bar end moved from (6,6) to the corner (7,7), three
// pixels away from the nearest remaining stroke pixel (4,6).
inline const std::string kDetachedI =
    "00000000\n"
    "01111110\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "00011000\n"
    "01011000\n"
    "00000001\n";

inline std::vector<LabeledImage> letters() {
  return {{grid(kLetterI), CategoryId("I")}, {grid(kLetterO), CategoryId("O")}, {grid(kLetterT), CategoryId("T")}};
}

inline BinaryImage random_image(std::mt19937& rng, int width, int height, double density = 0.5) {
  std::bernoulli_distribution bit(density);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(width) * height);
  for (auto& p : px) p = bit(rng) ? 1 : 0;
  return BinaryImage(width, height, std::move(px));
}

inline AreaPattern random_pattern(std::mt19937& rng, int size, double density = 0.5) {
  std::bernoulli_distribution bit(density);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(size) * size);
  for (auto& b : bits) b = bit(rng) ? 1 : 0;
  return AreaPattern(size, std::move(bits));
}

/// Block-coded glyphs: image k tiles the plane with its own period x period
/// block, all ink except two holes. A window of side `period` at region r is
/// the block of its image cyclically shifted by r, so at every region each
/// image's window differs from every other image's.
inline std::vector<LabeledImage> coded_glyphs(int count, int categories, int size, int period = 5) {
  const int cells = period * period;
  std::vector<std::pair<int, int>> codes;
  for (int a = 0; a < cells; ++a) {
    for (int b = a + 1; b < cells; ++b) codes.emplace_back(a, b);
  }
  if (count > static_cast<int>(codes.size())) throw std::invalid_argument("coded_glyphs: too many glyphs for the period");
  std::vector<LabeledImage> out;
  for (int k = 0; k < count; ++k) {
    const auto [h1, h2] = codes[static_cast<std::size_t>(k * 13) % codes.size()];
    std::vector<std::uint8_t> px(static_cast<std::size_t>(size) * size, 1);
    for (int y = 0; y < size; ++y) {
      for (int x = 0; x < size; ++x) {
        const int cell = (y % period) * period + x % period;
        if (cell == h1 || cell == h2) px[static_cast<std::size_t>(y * size + x)] = 0;
      }
    }
    out.push_back({BinaryImage(size, size, std::move(px)), CategoryId("g" + std::to_string(k % categories))});
  }
  return out;
}

}  // namespace fixtures
