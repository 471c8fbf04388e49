#pragma once

// Test-phase engine. One pass:
//   1. direct match every region against its stored patterns;
//   2. seed each region with its best direct candidate;
//   3. let the neighbouring regions' seeds vote per cell ("creep") and use
//      the votes to filter and pick among the direct candidates, falling
//      back to the best creep pattern when none survive;
//   4. rebuild the image from the overlapping selections by majority vote;
//   5. correct the rebuilt image with the global rules.
// Passes repeat on their own output until two consecutive outputs agree or
// the iteration cap is reached. Category votes come from the last pass.

#include <cstdint>
#include <map>
#include <vector>

#include "regioncreep/core.hpp"
#include "regioncreep/store.hpp"

namespace regioncreep {

struct MatchCandidate {
  AreaPattern pattern;
  int direct_score = 0;
  CategoryCounts categories;
};

/// Per-cell tally of set pixels contributed by neighbouring selections.
class CreepCountMap {
 public:
  CreepCountMap() = default;
  explicit CreepCountMap(int size) : size_(size), cells_(static_cast<std::size_t>(size) * size, 0) {}

  int size() const { return size_; }
  int at(int i, int j) const { return cells_[static_cast<std::size_t>(j * size_ + i)]; }
  void add(int i, int j, int n = 1) { cells_[static_cast<std::size_t>(j * size_ + i)] += n; }
  const std::vector<int>& cells() const { return cells_; }
  int total() const;

  friend bool operator==(const CreepCountMap&, const CreepCountMap&) = default;

 private:
  int size_ = 0;
  std::vector<int> cells_;
};

/// Decides a reconstructed pixel from its present/absent vote counts.
using PixelCombiner = bool (*)(int present_votes, int absent_votes);

/// Majority, with ties going to present.
bool majority_present_ties(int present_votes, int absent_votes);

struct InferenceOptions {
  double threshold = 0.5;  // X, clamped to [0, 1]
  int max_iterations = 3;  // Z
  CreepMode creep_mode = CreepMode::aligned;
  int neighbor_radius = 1;
  AgreementFn agreement = agreement_score;
  PixelCombiner combiner = majority_present_ties;

  static InferenceOptions from_config(const TrainedConfig& config);
};

struct Selection {
  AreaPattern pattern;
  CategoryCounts categories;
  bool from_creep_fallback = false;
};

struct ClassificationResult {
  std::map<CategoryId, std::uint64_t> votes;  // every category of the model, zero included
  CategoryId chosen;
  BinaryImage final_image;
  int iterations_run = 0;
  bool converged = false;
  std::vector<BinaryImage> frames;  // output image of every pass, in order
};

/// All stored patterns at `r` attaining the best agreement with the input
/// window, in lexicographic pattern order.
std::vector<MatchCandidate> direct_match(const Model& model, const BinaryImage& input, RegionId r,
                                         AgreementFn agreement = agreement_score);

/// Tallies the selections of the regions around `r` (Chebyshev distance
/// 1..radius). Regions absent from `selections` contribute nothing.
CreepCountMap creep_counts(RegionId r, const std::map<RegionId, AreaPattern>& selections, CreepMode mode,
                           int area_size, int radius = 1);

/// Sum of the counts under the pattern's set cells.
long long creep_score(const AreaPattern& p, const CreepCountMap& counts);

/// Filters direct candidates by creep score (>= threshold * best creep
/// score over the stored patterns), then keeps the survivor agreeing most
/// with the best creep pattern. Ties: higher direct score, then smaller
/// pattern. Without survivors the best creep pattern is returned.
Selection select_area(const std::vector<MatchCandidate>& direct, const CreepCountMap& counts,
                      const RegionStore::PatternMap& stored_at_r, double threshold);

/// Rebuilds an image from one selection per region. Throws
/// std::invalid_argument when a region of the grid has no selection.
BinaryImage reconstruct(const std::map<RegionId, AreaPattern>& selections, int width, int height, int area_size,
                        PixelCombiner combiner = majority_present_ties);

ClassificationResult classify(const Model& model, const BinaryImage& input, const InferenceOptions& options);
ClassificationResult classify(const Model& model, const BinaryImage& input);

}  // namespace regioncreep
