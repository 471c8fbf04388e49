#include "regioncreep/inference.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>

namespace regioncreep {

namespace {

using Entry = RegionStore::PatternMap::value_type;

double clamp_threshold(double threshold) { return std::clamp(threshold, 0.0, 1.0); }

struct Candidate {
  const AreaPattern* pattern;
  int direct_score;
};

struct Choice {
  const AreaPattern* pattern = nullptr;
  int candidate_index = -1;  // -1: creep fallback
};

// Returns the stored entries at one region with the best agreement, in map
// (lexicographic) order.
std::vector<const Entry*> best_direct(const RegionStore::PatternMap& stored, const AreaPattern& window,
                                      AgreementFn agreement, int& best_score) {
  std::vector<const Entry*> best;
  best_score = -1;
  for (const auto& entry : stored) {
    const int score = agreement(window, entry.first);
    if (score > best_score) {
      best_score = score;
      best.clear();
    }
    if (score == best_score) best.push_back(&entry);
  }
  return best;
}

// `neighbour(dx, dy)` yields the selection of the region at that offset, or
// nullptr when the region does not exist.
template <typename Lookup>
CreepCountMap tally(int area_size, CreepMode mode, int radius, Lookup&& neighbour) {
  CreepCountMap counts(area_size);
  for (int dy = -radius; dy <= radius; ++dy) {
    for (int dx = -radius; dx <= radius; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const AreaPattern* p = neighbour(dx, dy);
      if (!p) continue;
      for (int j = 0; j < area_size; ++j) {
        for (int i = 0; i < area_size; ++i) {
          if (!p->at(i, j)) continue;
          if (mode == CreepMode::aligned) {
            counts.add(i, j);
          } else {
            // Neighbour cell (i, j) sits at local (i + dx, j + dy).
            const int li = i + dx;
            const int lj = j + dy;
            if (li >= 0 && lj >= 0 && li < area_size && lj < area_size) counts.add(li, lj);
          }
        }
      }
    }
  }
  return counts;
}

Choice choose(const std::vector<Candidate>& direct, const CreepCountMap& counts,
              const RegionStore::PatternMap& stored, double threshold) {
  const AreaPattern* creep_best = nullptr;
  long long best_creep = -1;
  for (const auto& [pattern, _] : stored) {
    const long long s = creep_score(pattern, counts);
    if (s > best_creep) {
      best_creep = s;
      creep_best = &pattern;
    }
  }
  if (!creep_best) {
    if (direct.empty()) throw std::invalid_argument("select_area: no stored patterns and no direct candidates");
    // Nothing stored to vote for; keep the first direct candidate.
    return {direct.front().pattern, 0};
  }

  const double cutoff = clamp_threshold(threshold) * static_cast<double>(best_creep);
  Choice choice;
  int best_agreement = -1;
  int best_direct = -1;
  for (int k = 0; k < static_cast<int>(direct.size()); ++k) {
    const auto& c = direct[static_cast<std::size_t>(k)];
    if (static_cast<double>(creep_score(*c.pattern, counts)) < cutoff) continue;
    const int agree = agreement_score(*c.pattern, *creep_best);
    const bool better = agree > best_agreement ||
                        (agree == best_agreement && c.direct_score > best_direct) ||
                        (agree == best_agreement && c.direct_score == best_direct && *c.pattern < *choice.pattern);
    if (better) {
      choice = {c.pattern, k};
      best_agreement = agree;
      best_direct = c.direct_score;
    }
  }
  if (!choice.pattern) choice = {creep_best, -1};
  return choice;
}

template <typename PatternAt>
BinaryImage rebuild(int width, int height, int area_size, PixelCombiner combiner, PatternAt&& pattern_at) {
  const int across = width - area_size + 1;
  const int down = height - area_size + 1;
  std::vector<int> present(static_cast<std::size_t>(width) * height, 0);
  std::vector<int> covering(static_cast<std::size_t>(width) * height, 0);
  for (int ry = 0; ry < down; ++ry) {
    for (int rx = 0; rx < across; ++rx) {
      const AreaPattern& p = pattern_at(RegionId{rx, ry});
      for (int j = 0; j < area_size; ++j) {
        for (int i = 0; i < area_size; ++i) {
          const auto idx = static_cast<std::size_t>((ry + j) * width + rx + i);
          ++covering[idx];
          present[idx] += p.at(i, j);
        }
      }
    }
  }
  std::vector<std::uint8_t> pixels(present.size());
  for (std::size_t k = 0; k < pixels.size(); ++k) {
    pixels[k] = combiner(present[k], covering[k] - present[k]) ? 1 : 0;
  }
  return BinaryImage(width, height, std::move(pixels));
}

void require_model_dims(const Model& model, const BinaryImage& input) {
  if (input.width() != model.store.width() || input.height() != model.store.height()) {
    throw std::invalid_argument("input image is " + std::to_string(input.width()) + "x" +
                                std::to_string(input.height()) + " but the model expects " +
                                std::to_string(model.store.width()) + "x" + std::to_string(model.store.height()));
  }
}

struct PassResult {
  BinaryImage output;
  std::map<CategoryId, std::uint64_t> votes;
};

PassResult run_pass(const Model& model, const BinaryImage& input, const InferenceOptions& options) {
  const RegionStore& store = model.store;
  const int a = store.area_size();
  const std::size_t n = store.region_count();

  // Phase 1: direct matches for every region.
  std::vector<std::vector<Candidate>> direct(n);
  for (std::size_t k = 0; k < n; ++k) {
    const RegionId r = store.region_at(k);
    int best = 0;
    for (const Entry* e : best_direct(store.patterns_at(k), extract_area(input, r, a), options.agreement, best)) {
      direct[k].push_back({&e->first, best});
    }
  }
  // Provisional seeds: best direct candidate per region.
  std::vector<const AreaPattern*> seed(n, nullptr);
  for (std::size_t k = 0; k < n; ++k) {
    if (!direct[k].empty()) seed[k] = direct[k].front().pattern;
  }

  // Phase 2: creep-corrected selection, reading only phase-1 seeds.
  std::vector<const AreaPattern*> chosen(n, nullptr);
  for (std::size_t k = 0; k < n; ++k) {
    const RegionId r = store.region_at(k);
    const auto counts = tally(a, options.creep_mode, options.neighbor_radius, [&](int dx, int dy) -> const AreaPattern* {
      const RegionId nb{r.x + dx, r.y + dy};
      if (!region_valid(nb, store.width(), store.height(), a)) return nullptr;
      return seed[store.region_index(nb)];
    });
    chosen[k] = choose(direct[k], counts, store.patterns_at(k), options.threshold).pattern;
  }

  // Category refresh / dissociation, then votes.
  PassResult result;
  for (const auto& c : model.config.categories) result.votes[c] = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const CategoryCounts* stored = lookup_categories(store, store.region_at(k), *chosen[k]);
    if (!stored) continue;  // kept as-is but contributes no categories
    for (const auto& [cat, count] : stored->entries()) result.votes[cat] += count;
  }

  BinaryImage rebuilt = rebuild(store.width(), store.height(), a, options.combiner,
                                [&](RegionId r) -> const AreaPattern& { return *chosen[store.region_index(r)]; });
  result.output = apply_rules(rebuilt, model.rules);
  return result;
}

}  // namespace

int CreepCountMap::total() const { return std::accumulate(cells_.begin(), cells_.end(), 0); }

bool majority_present_ties(int present_votes, int absent_votes) { return present_votes >= absent_votes; }

InferenceOptions InferenceOptions::from_config(const TrainedConfig& config) {
  InferenceOptions o;
  o.threshold = config.threshold;
  o.max_iterations = config.max_iterations;
  o.creep_mode = config.creep_mode;
  return o;
}

std::vector<MatchCandidate> direct_match(const Model& model, const BinaryImage& input, RegionId r,
                                         AgreementFn agreement) {
  require_model_dims(model, input);
  const auto window = extract_area(input, r, model.store.area_size());
  int best = 0;
  std::vector<MatchCandidate> out;
  for (const Entry* e : best_direct(model.store.patterns_at(r), window, agreement, best)) {
    out.push_back({e->first, best, e->second});
  }
  return out;
}

CreepCountMap creep_counts(RegionId r, const std::map<RegionId, AreaPattern>& selections, CreepMode mode,
                           int area_size, int radius) {
  return tally(area_size, mode, radius, [&](int dx, int dy) -> const AreaPattern* {
    auto it = selections.find(RegionId{r.x + dx, r.y + dy});
    if (it == selections.end()) return nullptr;
    if (it->second.size() != area_size) throw std::invalid_argument("creep_counts: selection size mismatch");
    return &it->second;
  });
}

long long creep_score(const AreaPattern& p, const CreepCountMap& counts) {
  if (p.size() != counts.size()) throw std::invalid_argument("creep_score: pattern and count map sizes differ");
  long long total = 0;
  const auto bits = p.bits();
  const auto& cells = counts.cells();
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k]) total += cells[k];
  }
  return total;
}

Selection select_area(const std::vector<MatchCandidate>& direct, const CreepCountMap& counts,
                      const RegionStore::PatternMap& stored_at_r, double threshold) {
  std::vector<Candidate> candidates;
  candidates.reserve(direct.size());
  for (const auto& c : direct) candidates.push_back({&c.pattern, c.direct_score});
  const Choice choice = choose(candidates, counts, stored_at_r, threshold);
  if (choice.candidate_index >= 0) {
    const auto& c = direct[static_cast<std::size_t>(choice.candidate_index)];
    return {c.pattern, c.categories, false};
  }
  return {*choice.pattern, stored_at_r.at(*choice.pattern), true};
}

BinaryImage reconstruct(const std::map<RegionId, AreaPattern>& selections, int width, int height, int area_size,
                        PixelCombiner combiner) {
  for (RegionId r : region_grid(width, height, area_size)) {
    auto it = selections.find(r);
    if (it == selections.end()) {
      throw std::invalid_argument("reconstruct: no selection for region (" + std::to_string(r.x) + "," +
                                  std::to_string(r.y) + ")");
    }
    if (it->second.size() != area_size) throw std::invalid_argument("reconstruct: selection size mismatch");
  }
  return rebuild(width, height, area_size, combiner,
                 [&](RegionId r) -> const AreaPattern& { return selections.at(r); });
}

ClassificationResult classify(const Model& model, const BinaryImage& input, const InferenceOptions& options) {
  require_model_dims(model, input);
  if (options.max_iterations < 1) throw std::invalid_argument("classify: iteration cap must be at least 1");
  if (options.neighbor_radius < 1) throw std::invalid_argument("classify: neighbour radius must be at least 1");

  ClassificationResult result;
  BinaryImage current = input;
  std::optional<BinaryImage> previous;
  PassResult pass;
  for (int it = 1; it <= options.max_iterations; ++it) {
    pass = run_pass(model, current, options);
    result.iterations_run = it;
    result.frames.push_back(pass.output);
    if (previous && *previous == pass.output) {
      result.converged = true;
      break;
    }
    previous = pass.output;
    current = pass.output;
  }

  result.final_image = pass.output;
  result.votes = std::move(pass.votes);
  std::uint64_t best = 0;
  bool have = false;
  for (const auto& [cat, v] : result.votes) {  // map order gives the lexicographic tie-break
    if (!have || v > best) {
      best = v;
      result.chosen = cat;
      have = true;
    }
  }
  return result;
}

ClassificationResult classify(const Model& model, const BinaryImage& input) {
  return classify(model, input, InferenceOptions::from_config(model.config));
}

}  // namespace regioncreep
