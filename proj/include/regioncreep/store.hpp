#pragma once

// The learned state: every training image is cut into overlapping windows,
// and each window is remembered verbatim for its region together with the
// categories it was seen under.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "regioncreep/core.hpp"
#include "regioncreep/rules.hpp"

namespace regioncreep {

/// Category -> occurrence count. Counts are always >= 1.
class CategoryCounts {
 public:
  using Map = std::map<CategoryId, std::uint64_t>;

  CategoryCounts() = default;
  CategoryCounts(std::initializer_list<Map::value_type> init);

  void add(const CategoryId& category, std::uint64_t n = 1);
  /// Sets a category's count to 1 if absent (set semantics).
  void mark(const CategoryId& category);

  bool empty() const { return counts_.empty(); }
  std::size_t size() const { return counts_.size(); }
  std::uint64_t total() const;
  std::uint64_t count(const CategoryId& category) const;
  bool contains(const CategoryId& category) const { return counts_.count(category) != 0; }
  const Map& entries() const { return counts_; }

  friend bool operator==(const CategoryCounts&, const CategoryCounts&) = default;

 private:
  Map counts_;
};

/// How repeated (pattern, category) occurrences are recorded: `counts`
/// keeps multiplicity, `set` records each category at most once per
/// pattern so every category gets one vote per matching pattern.
enum class CategoryMode { counts, set };

enum class CreepMode { aligned, shifted };

/// Per-region memory of exact patterns.
class RegionStore {
 public:
  using PatternMap = std::map<AreaPattern, CategoryCounts>;

  RegionStore() = default;
  RegionStore(int width, int height, int area_size);

  int width() const { return width_; }
  int height() const { return height_; }
  int area_size() const { return area_size_; }
  int regions_across() const { return width_ - area_size_ + 1; }
  int regions_down() const { return height_ - area_size_ + 1; }
  std::size_t region_count() const { return regions_.size(); }
  std::vector<RegionId> regions() const { return region_grid(width_, height_, area_size_); }

  std::size_t region_index(RegionId r) const;
  RegionId region_at(std::size_t index) const;

  const PatternMap& patterns_at(RegionId r) const { return regions_[region_index(r)]; }
  const PatternMap& patterns_at(std::size_t index) const { return regions_[index]; }

  /// Records one occurrence of `pattern` under `category` at region `r`.
  void add(RegionId r, const AreaPattern& pattern, const CategoryId& category, CategoryMode mode = CategoryMode::counts);
  /// Adds `n` occurrences at once (used when loading a saved store).
  void add_count(RegionId r, const AreaPattern& pattern, const CategoryId& category, std::uint64_t n);

  std::size_t distinct_patterns() const;

  friend bool operator==(const RegionStore&, const RegionStore&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  int area_size_ = 0;
  std::vector<PatternMap> regions_;  // row-major by region
};

struct TrainedConfig {
  int area_size = 5;
  int width = 0;
  int height = 0;
  std::vector<CategoryId> categories;  // sorted, unique
  double threshold = 0.5;               // X: creep filter fraction
  int max_iterations = 3;               // Z: iteration cap
  CreepMode creep_mode = CreepMode::aligned;
  RuleScope rule_scope = RuleScope::all;
  bool remove_full_diff = false;
  CategoryMode category_mode = CategoryMode::set;

  friend bool operator==(const TrainedConfig&, const TrainedConfig&) = default;
};

struct Model {
  RegionStore store;
  RuleSet rules;
  TrainedConfig config;

  friend bool operator==(const Model&, const Model&) = default;
};

struct TrainOptions {
  int area_size = 5;
  double threshold = 0.5;
  int max_iterations = 3;
  CreepMode creep_mode = CreepMode::aligned;
  RuleScope rule_scope = RuleScope::all;
  bool remove_full_diff = false;
  CategoryMode category_mode = CategoryMode::set;
};

/// Adds every window of `image` to `store`. Throws std::invalid_argument on
/// a dimension mismatch.
void train_image(RegionStore& store, const BinaryImage& image, const CategoryId& category,
                 CategoryMode mode = CategoryMode::counts);

/// Single pass over the training list plus rule construction.
Model train_set(std::span<const LabeledImage> images, const TrainOptions& options = {});

/// Stored counts for `pattern` at `r`, or nullptr when never seen there.
const CategoryCounts* lookup_categories(const RegionStore& store, RegionId r, const AreaPattern& pattern);

}  // namespace regioncreep
