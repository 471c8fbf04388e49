#pragma once

// Whole-image rules built from pairwise differences of training images.
//
// A rule says: when every pixel of `present` is set, the pixels of `missing`
// should be absent. Rules only ever remove pixels. When several rules fire,
// the pixels cleared are the intersection of their missing sets.

#include <compare>
#include <span>
#include <utility>
#include <vector>

#include "regioncreep/core.hpp"

namespace regioncreep {

struct LabeledImage {
  BinaryImage image;
  CategoryId category;
};

/// Pixels set in exactly one of two images. Both lists are sorted row-major.
struct DiffImage {
  int width = 0;
  int height = 0;
  std::vector<Coord> only_in_first;
  std::vector<Coord> only_in_second;
};

/// Ordered image-index pair: the rule's present set came from `first`,
/// its missing set from `second`.
struct RuleSource {
  int first = 0;
  int second = 0;

  friend bool operator==(const RuleSource&, const RuleSource&) = default;
  friend auto operator<=>(const RuleSource&, const RuleSource&) = default;
};

struct GlobalRule {
  std::vector<Coord> present;  // sorted, unique, non-empty
  std::vector<Coord> missing;  // sorted, unique, non-empty, disjoint from present
  std::vector<RuleSource> sources;  // sorted; more than one after merging duplicates

  friend bool operator==(const GlobalRule&, const GlobalRule&) = default;
};

struct RuleSet {
  int width = 0;
  int height = 0;
  std::vector<GlobalRule> rules;

  bool empty() const { return rules.empty(); }
  std::size_t size() const { return rules.size(); }

  /// Validates every rule and sorts into canonical order (first source,
  /// then present, then missing).
  void canonicalize();

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

enum class RuleScope { all, cross_category, off };

struct RuleBuildOptions {
  RuleScope scope = RuleScope::all;
  /// Use the whole difference stroke as the missing set instead of its corners.
  bool remove_full_diff = false;
};

DiffImage diff_images(const BinaryImage& a, const BinaryImage& b);

/// Corner pixels of a stroke, computed per 8-connected component:
///  - components of one or two pixels are returned whole;
///  - otherwise endpoints (at most one neighbour) and turns (exactly two
///    neighbours that are not opposite each other) are corners;
///  - a component with neither (e.g. a solid blob) contributes its first
///    pixel in row-major order, so the result is never empty.
/// Throws GeometryError when a stroke pixel is outside width x height.
std::vector<Coord> corner_pixels(std::span<const Coord> stroke, int width, int height);

RuleSet build_rules(std::span<const LabeledImage> images, const RuleBuildOptions& options = {});

std::vector<const GlobalRule*> firing_rules(const BinaryImage& image, const RuleSet& rules);

/// Pixels that `apply_rules` would clear (already-zero pixels included).
std::vector<Coord> removal_set(const BinaryImage& image, const RuleSet& rules);

BinaryImage apply_rules(const BinaryImage& image, const RuleSet& rules);

}  // namespace regioncreep
