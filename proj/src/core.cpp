#include "regioncreep/core.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace regioncreep {

namespace {

std::vector<std::uint64_t> pack(std::span<const std::uint8_t> bits) {
  std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return words;
}

void check_bits(std::span<const std::uint8_t> bits) {
  for (auto b : bits) {
    if (b > 1) throw std::invalid_argument("pixel values must be 0 or 1");
  }
}

}  // namespace

BinaryImage::BinaryImage(int width, int height)
    : BinaryImage(width, height,
                  std::vector<std::uint8_t>(width > 0 && height > 0 ? static_cast<std::size_t>(width) * height : 0)) {}

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("pixel count does not match width*height");
  }
  check_bits(pixels_);
}

std::size_t BinaryImage::popcount() const {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), std::uint8_t{1}));
}

AreaPattern::AreaPattern(int size, std::vector<std::uint8_t> bits) : size_(size), bits_(std::move(bits)) {
  if (size <= 0) throw std::invalid_argument("area size must be positive");
  if (bits_.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size)) {
    throw std::invalid_argument("area pattern needs size*size bits");
  }
  check_bits(bits_);
  words_ = pack(bits_);
}

AreaPattern AreaPattern::zeros(int size) {
  return AreaPattern(size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size, 0));
}

AreaPattern AreaPattern::ones(int size) {
  return AreaPattern(size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size, 1));
}

AreaPattern AreaPattern::from_string(std::string_view rows) {
  std::vector<std::uint8_t> bits;
  int row_len = -1;
  int current = 0;
  int row_count = 0;
  auto end_row = [&] {
    if (row_len < 0) row_len = current;
    if (current != row_len) throw std::invalid_argument("ragged area pattern string");
    current = 0;
    ++row_count;
  };
  for (char ch : rows) {
    if (ch == '/') {
      end_row();
    } else if (ch == '0' || ch == '1') {
      bits.push_back(ch == '1' ? 1 : 0);
      ++current;
    } else {
      throw std::invalid_argument("area pattern strings may only hold '0', '1' and '/'");
    }
  }
  end_row();
  if (row_len != row_count) throw std::invalid_argument("area pattern string must be square");
  return AreaPattern(row_len, std::move(bits));
}

int AreaPattern::popcount() const {
  int total = 0;
  for (auto w : words_) total += std::popcount(w);
  return total;
}

std::string AreaPattern::bit_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

CategoryId::CategoryId(std::string label) : label_(std::move(label)) {
  if (label_.empty()) throw std::invalid_argument("category label must be non-empty");
}

bool region_valid(RegionId r, int width, int height, int area_size) {
  return area_size >= 1 && r.x >= 0 && r.y >= 0 && r.x <= width - area_size && r.y <= height - area_size;
}

std::vector<RegionId> region_grid(int width, int height, int area_size) {
  if (area_size < 1) throw GeometryError("area size must be at least 1");
  if (width < area_size || height < area_size) {
    throw GeometryError("image " + std::to_string(width) + "x" + std::to_string(height) +
                        " is smaller than area size " + std::to_string(area_size));
  }
  std::vector<RegionId> out;
  out.reserve(static_cast<std::size_t>(width - area_size + 1) * (height - area_size + 1));
  for (int y = 0; y <= height - area_size; ++y) {
    for (int x = 0; x <= width - area_size; ++x) out.push_back({x, y});
  }
  return out;
}

AreaPattern extract_area(const BinaryImage& image, RegionId r, int area_size) {
  if (!region_valid(r, image.width(), image.height(), area_size)) {
    throw GeometryError("region (" + std::to_string(r.x) + "," + std::to_string(r.y) + ") with area size " +
                        std::to_string(area_size) + " does not fit a " + std::to_string(image.width()) + "x" +
                        std::to_string(image.height()) + " image");
  }
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(area_size) * area_size);
  for (int j = 0; j < area_size; ++j) {
    for (int i = 0; i < area_size; ++i) bits[static_cast<std::size_t>(j * area_size + i)] = image.at(r.x + i, r.y + j);
  }
  return AreaPattern(area_size, std::move(bits));
}

int agreement_score(const AreaPattern& p, const AreaPattern& q) {
  if (p.size() != q.size()) throw std::invalid_argument("agreement_score: pattern sizes differ");
  auto pw = p.words();
  auto qw = q.words();
  int differing = 0;
  for (std::size_t i = 0; i < pw.size(); ++i) differing += std::popcount(pw[i] ^ qw[i]);
  return static_cast<int>(p.cell_count()) - differing;
}

}  // namespace regioncreep
