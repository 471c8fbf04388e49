// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any gated criterion fails.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "regioncreep/inference.hpp"
#include "regioncreep/io.hpp"
#include "regioncreep/rules.hpp"
#include "regioncreep/store.hpp"

using namespace regioncreep;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail, bool gate = true) {
  std::printf("[%s] %2d %s: %s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(),
              gate ? "" : " (context only)");
  std::fflush(stdout);
  if (gate && !pass) ++failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

// Runs fn(i) for i in [0, n) on all cores.
void parallel(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(n)));
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

void geometry() {
  const auto letters = train_set(fixtures::letters(), {.area_size = 3});
  const auto small = region_grid(8, 8, 3).size();
  const auto big = region_grid(32, 32, 5).size();
  const bool pass = small == 36 && letters.store.region_count() == 36 && big == 784;
  report(1, "geometry", pass,
         "8x8/a=3 -> " + std::to_string(small) + " regions (model " + std::to_string(letters.store.region_count()) +
             "), 32x32/a=5 -> " + std::to_string(big));
}

void exact_recall() {
  const auto glyphs = fixtures::coded_glyphs(20, 4, 32);
  const auto start = Clock::now();
  const auto model = train_set(glyphs, {.area_size = 5, .rule_scope = RuleScope::off});

  // Precondition: every window of every image is stored under that image alone.
  bool unique = true;
  for (std::size_t k = 0; k < model.store.region_count() && unique; ++k) {
    std::set<AreaPattern> seen;
    for (const auto& g : glyphs) unique = unique && seen.insert(extract_area(g.image, model.store.region_at(k), 5)).second;
  }

  int correct = 0;
  int exact = 0;
  for (const auto& g : glyphs) {
    const auto r = classify(model, g.image);
    correct += r.chosen == g.category;
    exact += r.final_image == g.image;
  }
  const double secs = seconds_since(start);
  const bool pass = unique && correct == 20 && exact == 20 && secs < 1.0;
  report(2, "exact recall", pass,
         std::string(unique ? "unique windows" : "WINDOWS NOT UNIQUE") + ", " + std::to_string(correct) +
             "/20 correct, " + std::to_string(exact) + "/20 exact reconstructions, " + fmt("%.3f s", secs) +
             " (limit 1 s)");
}

struct DigitsRun {
  Dataset data;
  Model model;
  std::vector<CategoryId> predicted;
  double train_seconds = 0;
  double eval_seconds = 0;
};

DigitsRun digits_benchmark() {
  DigitsRun run;
  run.data = load_dataset(fs::path(REGIONCREEP_DATA_DIR) / "digits");
  auto start = Clock::now();
  run.model = train_set(run.data.images, {.area_size = 5,
                                          .threshold = 0.5,
                                          .max_iterations = 3,
                                          .creep_mode = CreepMode::aligned,
                                          .rule_scope = RuleScope::all});
  run.train_seconds = seconds_since(start);

  start = Clock::now();
  run.predicted.resize(run.data.images.size());
  parallel(run.data.images.size(), [&](std::size_t i) { run.predicted[i] = classify(run.model, run.data.images[i].image).chosen; });
  run.eval_seconds = seconds_since(start);

  std::map<CategoryId, std::pair<int, int>> per;
  int correct = 0;
  for (std::size_t i = 0; i < run.predicted.size(); ++i) {
    auto& [c, t] = per[run.data.images[i].category];
    ++t;
    if (run.predicted[i] == run.data.images[i].category) {
      ++c;
      ++correct;
    }
  }
  const int total = static_cast<int>(run.predicted.size());
  const double overall = 100.0 * correct / total;
  double worst = 101.0;
  std::string worst_label;
  for (const auto& [cat, ct] : per) {
    const double pct = 100.0 * ct.first / ct.second;
    if (pct < worst) {
      worst = pct;
      worst_label = cat.label();
    }
  }
  const bool pass = total == 493 && per.size() == 9 && overall >= 94.0 && worst >= 90.0;
  report(3, "digit benchmark", pass,
         std::to_string(correct) + " from " + std::to_string(total) + fmt(" = %.1f%% overall (>= 94%%)", overall) +
             fmt(", worst category %.1f%%", worst) + " ('" + worst_label + "', >= 90%), " +
             std::to_string(run.model.store.distinct_patterns()) + " patterns, " +
             std::to_string(run.model.rules.size()) + " rules, train " + fmt("%.1f s", run.train_seconds) +
             ", eval " + fmt("%.1f s", run.eval_seconds));

  std::printf("       per category:");
  for (const auto& [cat, ct] : per) std::printf(" %s=%d/%d", cat.label().c_str(), ct.first, ct.second);
  std::printf("\n");
  return run;
}

void noisy_letter() {
  const auto model = train_set(fixtures::letters(), {.area_size = 3, .max_iterations = 3});
  const auto r = classify(model, fixtures::grid(fixtures::kNoisyI));
  const bool exact = r.final_image == fixtures::grid(fixtures::kLetterI);
  const bool pass = r.chosen == CategoryId("I") && exact && r.iterations_run <= 3;
  report(4, "noisy letter reconstruction", pass,
         "chosen '" + r.chosen.label() + "', final image " + (exact ? "equals" : "differs from") + " clean I, " +
             std::to_string(r.iterations_run) + " iteration(s), converged " + (r.converged ? "yes" : "no"));
}

void detached_stroke() {
  const auto model = train_set(fixtures::letters(), {.area_size = 3, .max_iterations = 3});
  const auto clean = fixtures::grid(fixtures::kLetterI);
  const auto input = fixtures::grid(fixtures::kDetachedI);
  const auto r = classify(model, input);

  // The detached pixel sits beyond creep reach of every remaining stroke pixel.
  int reach = 1 << 20;
  const Coord detached{7, 7};
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      if (input.at(x, y) && Coord{x, y} != detached) reach = std::min(reach, oracle::chebyshev({x, y}, detached));
    }
  }
  const std::vector<Coord> removed{{2, 6}, {5, 6}, {6, 6}};
  int divergent = 0;
  for (Coord c : removed) divergent += r.final_image.at(c) != clean.at(c);
  const bool pass = reach > 2 && divergent == static_cast<int>(removed.size());
  report(5, "detached stroke stays unrestored", pass,
         "detached pixel distance " + std::to_string(reach) + " (> a-1 = 2), " + std::to_string(divergent) +
             "/3 bar pixels (2,6),(5,6),(6,6) still differ from clean I, chosen '" + r.chosen.label() + "'");
}

void rule_algebra() {
  std::mt19937 rng(606);
  const auto start = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int w = std::uniform_int_distribution<int>(2, 8)(rng);
    const int h = std::uniform_int_distribution<int>(2, 8)(rng);
    const auto img = fixtures::random_image(rng, w, h, 0.6);
    std::vector<GlobalRule> raw;
    const int n = std::uniform_int_distribution<int>(0, 6)(rng);
    for (int k = 0; k < n; ++k) raw.push_back(oracle::random_rule(rng, w, h));
    RuleSet set{w, h, raw};
    set.canonicalize();
    if (apply_rules(img, set) != oracle::apply_rules(img, raw)) ++mismatches;
  }
  report(6, "rule algebra oracle", mismatches == 0,
         std::to_string(10000 - mismatches) + "/10000 cases match, " + fmt("%.2f s", seconds_since(start)));
}

void corner_oracle() {
  std::mt19937 rng(707);
  const auto start = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto stroke = oracle::random_stroke(rng, 16, 16, 12);
    if (corner_pixels(stroke, 16, 16) != oracle::corners(stroke)) ++mismatches;
  }
  report(7, "corner oracle", mismatches == 0,
         std::to_string(1000 - mismatches) + "/1000 strokes match, " + fmt("%.2f s", seconds_since(start)));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void persistence(const DigitsRun& run) {
  const fs::path dir = fs::temp_directory_path() / ("rc_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto first = dir / "digits.rcm";
  const auto second = dir / "digits_again.rcm";

  save_model(run.model, first);
  const Model loaded = load_model(first);
  save_model(loaded, second);
  const bool bytes = slurp(first) == slurp(second);
  const auto size = fs::file_size(first);

  std::vector<std::size_t> probes;
  for (std::size_t i = 0; i < run.data.images.size(); i += run.data.images.size() / 12) probes.push_back(i);
  std::vector<char> same(probes.size(), 0);
  parallel(probes.size(), [&](std::size_t k) {
    const auto& img = run.data.images[probes[k]].image;
    const auto a = classify(run.model, img);
    const auto b = classify(loaded, img);
    same[k] = a.votes == b.votes && a.chosen == b.chosen && a.final_image == b.final_image &&
              a.iterations_run == b.iterations_run && a.converged == b.converged;
  });
  const auto agree = std::count(same.begin(), same.end(), 1);
  fs::remove_all(dir);

  const bool pass = bytes && loaded == run.model && agree == static_cast<long>(probes.size()) && probes.size() >= 10;
  report(8, "determinism and persistence", pass,
         std::to_string(agree) + "/" + std::to_string(probes.size()) + " probe results identical after reload, " +
             "save-load-save " + (bytes ? "byte-identical" : "DIFFERS") + " (" + std::to_string(size / 1024) +
             " KiB)");
}

void majority_law() {
  std::mt19937 rng(909);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int a = std::uniform_int_distribution<int>(1, 4)(rng);
    const int w = std::uniform_int_distribution<int>(a, 10)(rng);
    const int h = std::uniform_int_distribution<int>(a, 10)(rng);
    std::map<RegionId, AreaPattern> sel;
    for (auto r : region_grid(w, h, a)) sel[r] = fixtures::random_pattern(rng, a);
    if (reconstruct(sel, w, h, a) != oracle::reconstruct(sel, w, h, a)) ++mismatches;
  }
  report(9, "reconstruction majority law", mismatches == 0, std::to_string(1000 - mismatches) + "/1000 cases match");
}

void prior_art(const DigitsRun& run) {
  int correct = 0;
  for (std::size_t i = 0; i < run.predicted.size(); ++i) correct += run.predicted[i] == run.data.images[i].category;
  const double pct = 100.0 * correct / static_cast<double>(run.predicted.size());
  report(10, "prior-art anchor", pct > 46.0 + 30.0, fmt("%.1f%% vs 46%% for the earlier method", pct), false);
}

}  // namespace

int main() {
  try {
    geometry();
    exact_recall();
    const DigitsRun digits = digits_benchmark();
    noisy_letter();
    detached_stroke();
    rule_algebra();
    corner_oracle();
    persistence(digits);
    majority_law();
    prior_art(digits);
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%s: %d gated criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
