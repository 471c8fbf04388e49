#pragma once

// Domain types shared by every stage of the classifier: binary images,
// the sliding region grid, area patterns and the agreement score.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace regioncreep {

/// Thrown when a window does not fit the image it is applied to.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pixel coordinate, x = column and y = row, both 0-based.
/// Ordering is row-major (y first), which is also the serialization order.
struct Coord {
  int x = 0;
  int y = 0;

  friend bool operator==(const Coord&, const Coord&) = default;
  friend std::strong_ordering operator<=>(const Coord& a, const Coord& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Fixed-size 2-D grid of {0,1} pixels stored row-major.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height);
  /// `pixels` must hold width*height values, each 0 or 1.
  BinaryImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }

  std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
  std::uint8_t at(Coord c) const { return at(c.x, c.y); }
  void set(int x, int y, bool value) { pixels_[index(x, y)] = value ? 1 : 0; }
  void set(Coord c, bool value) { set(c.x, c.y, value); }

  bool contains(Coord c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::size_t popcount() const;

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Top-left corner of an a x a window.
struct RegionId {
  int x = 0;
  int y = 0;

  friend bool operator==(const RegionId&, const RegionId&) = default;
  friend std::strong_ordering operator<=>(const RegionId& a, const RegionId& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// An a x a binary patch. Value type: equality and ordering are on the
/// row-major bit string, so patterns can key ordered maps and the ordering
/// doubles as the lexicographic tie-break.
class AreaPattern {
 public:
  AreaPattern() = default;
  AreaPattern(int size, std::vector<std::uint8_t> bits);

  static AreaPattern zeros(int size);
  static AreaPattern ones(int size);
  /// Parses "100/010/001" style strings (rows separated by '/').
  static AreaPattern from_string(std::string_view rows);

  int size() const { return size_; }
  std::size_t cell_count() const { return bits_.size(); }
  std::uint8_t at(int i, int j) const { return bits_[static_cast<std::size_t>(j * size_ + i)]; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<const std::uint64_t> words() const { return words_; }
  int popcount() const;

  /// Row-major '0'/'1' string without separators.
  std::string bit_string() const;

  friend bool operator==(const AreaPattern& a, const AreaPattern& b) {
    return a.size_ == b.size_ && a.bits_ == b.bits_;
  }
  friend std::strong_ordering operator<=>(const AreaPattern& a, const AreaPattern& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  int size_ = 0;
  std::vector<std::uint8_t> bits_;
  std::vector<std::uint64_t> words_;  // packed copy of bits_ for scoring
};

/// Opaque non-empty category label, ordered lexicographically.
class CategoryId {
 public:
  CategoryId() = default;
  explicit CategoryId(std::string label);

  const std::string& label() const { return label_; }

  friend bool operator==(const CategoryId&, const CategoryId&) = default;
  friend std::strong_ordering operator<=>(const CategoryId&, const CategoryId&) = default;

 private:
  std::string label_;
};

/// All stride-1 window positions in row-major order.
std::vector<RegionId> region_grid(int width, int height, int area_size);

/// Whether `r` is a legal window position for the given geometry.
bool region_valid(RegionId r, int width, int height, int area_size);

AreaPattern extract_area(const BinaryImage& image, RegionId r, int area_size);

/// Number of cells where both patterns hold the same value (0 or 1).
int agreement_score(const AreaPattern& p, const AreaPattern& q);

/// Swappable matching equation used by direct matching.
using AgreementFn = int (*)(const AreaPattern&, const AreaPattern&);

}  // namespace regioncreep
