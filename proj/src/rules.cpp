#include "regioncreep/rules.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <string>

#include "parallel.hpp"

namespace regioncreep {

namespace {

void require_same_dims(const BinaryImage& a, const BinaryImage& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw std::invalid_argument(std::string(what) + ": image dimensions differ (" + std::to_string(a.width()) + "x" +
                                std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + ")");
  }
}

void require_rule_dims(const BinaryImage& image, const RuleSet& rules) {
  if (!rules.empty() && (image.width() != rules.width || image.height() != rules.height)) {
    throw std::invalid_argument("rule set dimensions do not match image");
  }
}

std::vector<Coord> intersect(const std::vector<Coord>& a, const std::vector<Coord>& b) {
  std::vector<Coord> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool fires(const BinaryImage& image, const GlobalRule& rule) {
  return std::all_of(rule.present.begin(), rule.present.end(), [&](Coord c) { return image.at(c) == 1; });
}

}  // namespace

void RuleSet::canonicalize() {
  for (auto& rule : rules) {
    std::sort(rule.present.begin(), rule.present.end());
    rule.present.erase(std::unique(rule.present.begin(), rule.present.end()), rule.present.end());
    std::sort(rule.missing.begin(), rule.missing.end());
    rule.missing.erase(std::unique(rule.missing.begin(), rule.missing.end()), rule.missing.end());
    std::sort(rule.sources.begin(), rule.sources.end());
    if (rule.present.empty() || rule.missing.empty()) throw std::invalid_argument("rule with an empty pixel set");
    if (!intersect(rule.present, rule.missing).empty()) {
      throw std::invalid_argument("rule present and missing sets overlap");
    }
    for (const auto* set : {&rule.present, &rule.missing}) {
      for (Coord c : *set) {
        if (c.x < 0 || c.y < 0 || c.x >= width || c.y >= height) {
          throw GeometryError("rule coordinate (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                              ") is out of bounds");
        }
      }
    }
  }
  std::sort(rules.begin(), rules.end(), [](const GlobalRule& a, const GlobalRule& b) {
    const RuleSource none{};
    const auto& sa = a.sources.empty() ? none : a.sources.front();
    const auto& sb = b.sources.empty() ? none : b.sources.front();
    if (sa != sb) return sa < sb;
    if (a.present != b.present) return a.present < b.present;
    return a.missing < b.missing;
  });
}

DiffImage diff_images(const BinaryImage& a, const BinaryImage& b) {
  require_same_dims(a, b, "diff_images");
  DiffImage diff{a.width(), a.height(), {}, {}};
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      const auto pa = a.at(x, y);
      const auto pb = b.at(x, y);
      if (pa && !pb) diff.only_in_first.push_back({x, y});
      if (!pa && pb) diff.only_in_second.push_back({x, y});
    }
  }
  return diff;
}

std::vector<Coord> corner_pixels(std::span<const Coord> stroke, int width, int height) {
  // Dense label grid: 0 = not in stroke, 1 = unvisited stroke pixel, 2 = visited.
  std::vector<std::uint8_t> grid(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  auto cell = [&](int x, int y) -> std::uint8_t& { return grid[static_cast<std::size_t>(y) * width + x]; };
  auto inside = [&](int x, int y) { return x >= 0 && y >= 0 && x < width && y < height; };
  for (Coord c : stroke) {
    if (!inside(c.x, c.y)) {
      throw GeometryError("stroke pixel (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") is out of bounds");
    }
    cell(c.x, c.y) = 1;
  }

  auto neighbours = [&](Coord c, Coord* out) {
    int n = 0;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if ((dx || dy) && inside(c.x + dx, c.y + dy) && cell(c.x + dx, c.y + dy)) {
          if (n < 2) out[n] = {c.x + dx, c.y + dy};
          ++n;
        }
      }
    }
    return n;
  };

  std::vector<Coord> corners;
  std::vector<Coord> component;
  std::vector<Coord> stack;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (cell(x, y) != 1) continue;
      // Flood fill one 8-connected component.
      component.clear();
      stack.assign(1, Coord{x, y});
      cell(x, y) = 2;
      while (!stack.empty()) {
        const Coord c = stack.back();
        stack.pop_back();
        component.push_back(c);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = c.x + dx;
            const int ny = c.y + dy;
            if (inside(nx, ny) && cell(nx, ny) == 1) {
              cell(nx, ny) = 2;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      std::sort(component.begin(), component.end());

      if (component.size() <= 2) {
        corners.insert(corners.end(), component.begin(), component.end());
        continue;
      }
      bool found = false;
      for (Coord c : component) {
        Coord ns[2];
        const int degree = neighbours(c, ns);
        bool corner = degree <= 1;
        if (degree == 2) {
          const bool opposite = (ns[0].x - c.x) == -(ns[1].x - c.x) && (ns[0].y - c.y) == -(ns[1].y - c.y);
          corner = !opposite;
        }
        if (corner) {
          corners.push_back(c);
          found = true;
        }
      }
      if (!found) corners.push_back(component.front());
    }
  }
  std::sort(corners.begin(), corners.end());
  return corners;
}

RuleSet build_rules(std::span<const LabeledImage> images, const RuleBuildOptions& options) {
  RuleSet out;
  if (images.empty()) return out;
  out.width = images.front().image.width();
  out.height = images.front().image.height();
  for (const auto& item : images) require_same_dims(images.front().image, item.image, "build_rules");
  if (options.scope == RuleScope::off) return out;

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(images.size()); ++i) {
    for (int j = i + 1; j < static_cast<int>(images.size()); ++j) {
      if (options.scope == RuleScope::cross_category && images[i].category == images[j].category) continue;
      pairs.emplace_back(i, j);
    }
  }

  const unsigned workers = detail::worker_count(pairs.size());
  std::vector<std::vector<GlobalRule>> partial(workers);
  detail::parallel_for(
      pairs.size(),
      [&](unsigned worker, std::size_t k) {
        const auto [i, j] = pairs[k];
        const DiffImage diff = diff_images(images[i].image, images[j].image);
        if (diff.only_in_first.empty() || diff.only_in_second.empty()) return;
        auto first_corners = corner_pixels(diff.only_in_first, out.width, out.height);
        auto second_corners = corner_pixels(diff.only_in_second, out.width, out.height);
        auto& sink = partial[worker];
        sink.push_back({first_corners, options.remove_full_diff ? diff.only_in_second : second_corners, {{i, j}}});
        sink.push_back({second_corners, options.remove_full_diff ? diff.only_in_first : first_corners, {{j, i}}});
      },
      workers);

  std::vector<GlobalRule> all;
  for (auto& part : partial) std::move(part.begin(), part.end(), std::back_inserter(all));
  std::sort(all.begin(), all.end(), [](const GlobalRule& a, const GlobalRule& b) {
    if (a.present != b.present) return a.present < b.present;
    return a.missing < b.missing;
  });
  // Merge identical (present, missing) pairs, keeping every source.
  for (auto& rule : all) {
    if (!out.rules.empty() && out.rules.back().present == rule.present && out.rules.back().missing == rule.missing) {
      auto& sources = out.rules.back().sources;
      sources.insert(sources.end(), rule.sources.begin(), rule.sources.end());
    } else {
      out.rules.push_back(std::move(rule));
    }
  }
  out.canonicalize();
  return out;
}

std::vector<const GlobalRule*> firing_rules(const BinaryImage& image, const RuleSet& rules) {
  require_rule_dims(image, rules);
  std::vector<const GlobalRule*> out;
  for (const auto& rule : rules.rules) {
    if (fires(image, rule)) out.push_back(&rule);
  }
  return out;
}

std::vector<Coord> removal_set(const BinaryImage& image, const RuleSet& rules) {
  require_rule_dims(image, rules);
  std::optional<std::vector<Coord>> removal;
  for (const auto& rule : rules.rules) {
    if (!fires(image, rule)) continue;
    removal = removal ? intersect(*removal, rule.missing) : rule.missing;
    if (removal->empty()) break;  // intersection can only shrink
  }
  return removal ? *removal : std::vector<Coord>{};
}

BinaryImage apply_rules(const BinaryImage& image, const RuleSet& rules) {
  BinaryImage out = image;
  for (Coord c : removal_set(image, rules)) out.set(c, false);
  return out;
}

}  // namespace regioncreep
