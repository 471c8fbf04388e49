#pragma once

// Command-line driver (train / classify / eval / rules) and the accuracy
// report it prints. `run` is the whole program minus process plumbing so
// tests can drive it in-process.
//
// Exit codes: 0 success, 1 runtime or IO failure, 2 usage error.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "regioncreep/core.hpp"
#include "regioncreep/store.hpp"

namespace regioncreep::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CategoryScore {
  CategoryId category;
  std::size_t correct = 0;
  std::size_t total = 0;
};

struct BenchmarkReport {
  std::vector<CategoryScore> rows;  // sorted by category
  std::size_t correct = 0;
  std::size_t total = 0;
  int area_size = 0;
  double threshold = 0.0;
  int iterations = 0;
  CreepMode creep_mode = CreepMode::aligned;
  /// Evaluation images whose every window is stored under their own label,
  /// i.e. images that were (or are indistinguishable from) training images.
  std::size_t memorized = 0;
};

/// 100 * correct / total with one decimal, e.g. "98.2%".
std::string format_percent(std::size_t correct, std::size_t total);

BenchmarkReport make_report(const std::vector<CategoryId>& truth, const std::vector<CategoryId>& predicted);

/// Table with header "Dataset | Correct | % Accurate", one row per category
/// and a final Total row.
std::string format_table(const BenchmarkReport& report);

/// CSV with columns category,correct,total,pct (Total row last).
std::string format_csv(const BenchmarkReport& report);

/// Whether every window of `image` is stored under `category`.
bool memorized(const Model& model, const BinaryImage& image, const CategoryId& category);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace regioncreep::cli
