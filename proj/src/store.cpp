#include "regioncreep/store.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace regioncreep {

CategoryCounts::CategoryCounts(std::initializer_list<Map::value_type> init) {
  for (const auto& [category, n] : init) add(category, n);
}

void CategoryCounts::add(const CategoryId& category, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("category counts must be positive");
  counts_[category] += n;
}

void CategoryCounts::mark(const CategoryId& category) { counts_.try_emplace(category, 1); }

std::uint64_t CategoryCounts::total() const {
  std::uint64_t sum = 0;
  for (const auto& [_, n] : counts_) sum += n;
  return sum;
}

std::uint64_t CategoryCounts::count(const CategoryId& category) const {
  auto it = counts_.find(category);
  return it == counts_.end() ? 0 : it->second;
}

RegionStore::RegionStore(int width, int height, int area_size)
    : width_(width), height_(height), area_size_(area_size) {
  regions_.resize(region_grid(width, height, area_size).size());
}

std::size_t RegionStore::region_index(RegionId r) const {
  if (!region_valid(r, width_, height_, area_size_)) {
    throw GeometryError("region (" + std::to_string(r.x) + "," + std::to_string(r.y) + ") is outside the region grid");
  }
  return static_cast<std::size_t>(r.y) * static_cast<std::size_t>(regions_across()) + static_cast<std::size_t>(r.x);
}

RegionId RegionStore::region_at(std::size_t index) const {
  const auto across = static_cast<std::size_t>(regions_across());
  return {static_cast<int>(index % across), static_cast<int>(index / across)};
}

void RegionStore::add(RegionId r, const AreaPattern& pattern, const CategoryId& category, CategoryMode mode) {
  if (pattern.size() != area_size_) throw std::invalid_argument("pattern size does not match store area size");
  auto& counts = regions_[region_index(r)][pattern];
  if (mode == CategoryMode::set) {
    counts.mark(category);
  } else {
    counts.add(category);
  }
}

void RegionStore::add_count(RegionId r, const AreaPattern& pattern, const CategoryId& category, std::uint64_t n) {
  if (pattern.size() != area_size_) throw std::invalid_argument("pattern size does not match store area size");
  regions_[region_index(r)][pattern].add(category, n);
}

std::size_t RegionStore::distinct_patterns() const {
  std::size_t total = 0;
  for (const auto& region : regions_) total += region.size();
  return total;
}

void train_image(RegionStore& store, const BinaryImage& image, const CategoryId& category, CategoryMode mode) {
  if (image.width() != store.width() || image.height() != store.height()) {
    throw std::invalid_argument("train_image: image is " + std::to_string(image.width()) + "x" +
                                std::to_string(image.height()) + " but the store expects " +
                                std::to_string(store.width()) + "x" + std::to_string(store.height()));
  }
  for (std::size_t k = 0; k < store.region_count(); ++k) {
    const RegionId r = store.region_at(k);
    store.add(r, extract_area(image, r, store.area_size()), category, mode);
  }
}

Model train_set(std::span<const LabeledImage> images, const TrainOptions& options) {
  if (images.empty()) throw std::invalid_argument("train_set: no training images");
  if (options.threshold < 0.0 || options.threshold > 1.0) throw std::invalid_argument("threshold must be in [0, 1]");
  if (options.max_iterations < 1) throw std::invalid_argument("iteration cap must be at least 1");
  const int width = images.front().image.width();
  const int height = images.front().image.height();
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].image.width() != width || images[i].image.height() != height) {
      throw std::invalid_argument("train_set: image " + std::to_string(i) + " is " +
                                  std::to_string(images[i].image.width()) + "x" +
                                  std::to_string(images[i].image.height()) + ", expected " + std::to_string(width) +
                                  "x" + std::to_string(height));
    }
  }

  Model model;
  model.store = RegionStore(width, height, options.area_size);
  std::set<CategoryId> universe;
  for (const auto& item : images) {
    train_image(model.store, item.image, item.category, options.category_mode);
    universe.insert(item.category);
  }
  model.rules = build_rules(images, {options.rule_scope, options.remove_full_diff});
  model.rules.width = width;
  model.rules.height = height;

  auto& cfg = model.config;
  cfg.area_size = options.area_size;
  cfg.width = width;
  cfg.height = height;
  cfg.categories.assign(universe.begin(), universe.end());
  cfg.threshold = options.threshold;
  cfg.max_iterations = options.max_iterations;
  cfg.creep_mode = options.creep_mode;
  cfg.rule_scope = options.rule_scope;
  cfg.remove_full_diff = options.remove_full_diff;
  cfg.category_mode = options.category_mode;
  return model;
}

const CategoryCounts* lookup_categories(const RegionStore& store, RegionId r, const AreaPattern& pattern) {
  const auto& patterns = store.patterns_at(r);
  auto it = patterns.find(pattern);
  return it == patterns.end() ? nullptr : &it->second;
}

}  // namespace regioncreep
