#include "regioncreep/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace regioncreep {

namespace fs = std::filesystem;

FormatError::FormatError(const std::string& message, int line, int column)
    : std::runtime_error(line > 0 ? (column > 0 ? "line " + std::to_string(line) + ", column " +
                                                      std::to_string(column) + ": " + message
                                                : "line " + std::to_string(line) + ": " + message)
                                  : message),
      line_(line),
      column_(column) {}

FormatError FormatError::with_prefix(const std::string& prefix) const {
  return FormatError(Raw{}, prefix + what(), line_, column_);
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

bool safe_label(const std::string& label) {
  return std::none_of(label.begin(), label.end(), [](unsigned char c) {
    return std::isspace(c) || c == ':' || c == ',' || c == '|' || std::iscntrl(c);
  });
}

// Minimal cursor over one line for the model/rule record grammar.
class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  void skip_spaces() {
    while (!done() && text_[pos_] == ' ') ++pos_;
  }

  void expect(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) fail("expected '" + std::string(token) + "'");
    pos_ += token.size();
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  long long integer() {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
    if (ec != std::errc{}) fail("expected an integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  std::string_view until(char stop) {
    auto end = text_.find(stop, pos_);
    if (end == std::string_view::npos) end = text_.size();
    auto out = text_.substr(pos_, end - pos_);
    pos_ = end;
    return out;
  }

  std::vector<Coord> coord_list() {
    std::vector<Coord> out;
    expect("[");
    if (accept(']')) return out;
    do {
      out.push_back(coord());
    } while (accept(','));
    expect("]");
    return out;
  }

  Coord coord() {
    expect("(");
    const auto x = static_cast<int>(integer());
    expect(",");
    const auto y = static_cast<int>(integer());
    expect(")");
    return {x, y};
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw FormatError(message, line_, static_cast<int>(pos_) + 1);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

std::string_view creep_mode_name(CreepMode m) { return m == CreepMode::aligned ? "aligned" : "shifted"; }
std::string_view category_mode_name(CategoryMode m) { return m == CategoryMode::counts ? "counts" : "set"; }
std::string_view rule_scope_name(RuleScope s) {
  switch (s) {
    case RuleScope::all: return "all";
    case RuleScope::cross_category: return "cross-category";
    case RuleScope::off: return "off";
  }
  return "all";
}

}  // namespace

BinaryImage parse_ascii_grid(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty() || (lines.size() == 1 && lines[0].empty())) throw FormatError("empty image");
  const auto width = lines[0].size();
  std::vector<std::uint8_t> pixels;
  pixels.reserve(width * lines.size());
  for (std::size_t y = 0; y < lines.size(); ++y) {
    const int line_no = static_cast<int>(y) + 1;
    for (std::size_t x = 0; x < lines[y].size(); ++x) {
      const char c = lines[y][x];
      if (c != '0' && c != '1') {
        throw FormatError(std::string("illegal character '") + c + "'", line_no, static_cast<int>(x) + 1);
      }
      pixels.push_back(c == '1' ? 1 : 0);
    }
    if (lines[y].size() != width) {
      throw FormatError("line has " + std::to_string(lines[y].size()) + " pixels, expected " + std::to_string(width),
                        line_no);
    }
  }
  if (width == 0) throw FormatError("empty line", 1);
  return BinaryImage(static_cast<int>(width), static_cast<int>(lines.size()), std::move(pixels));
}

std::string emit_ascii_grid(const BinaryImage& image) {
  std::string out;
  out.reserve(static_cast<std::size_t>(image.width() + 1) * image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) out.push_back(image.at(x, y) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

BinaryImage parse_pbm_p1(std::string_view text) {
  std::size_t pos = 0;
  int line = 1;
  auto skip_ws = [&] {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line;
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&](const char* what) {
    skip_ws();
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc{} || v <= 0) throw FormatError(std::string("bad ") + what, line);
    pos = static_cast<std::size_t>(ptr - text.data());
    return v;
  };

  if (text.size() < 2 || text[0] != 'P') throw FormatError("not a PBM file", 1);
  if (text[1] != '1') throw FormatError(std::string("unsupported magic 'P") + text[1] + "'", 1);
  pos = 2;
  const int width = read_int("width");
  const int height = read_int("height");
  std::vector<std::uint8_t> pixels;
  pixels.reserve(static_cast<std::size_t>(width) * height);
  while (pixels.size() < static_cast<std::size_t>(width) * height) {
    skip_ws();
    if (pos >= text.size()) {
      throw FormatError("truncated pixel data: got " + std::to_string(pixels.size()) + " of " +
                            std::to_string(width * height) + " pixels",
                        line);
    }
    const char c = text[pos++];
    if (c != '0' && c != '1') throw FormatError(std::string("illegal pixel value '") + c + "'", line);
    pixels.push_back(c == '1' ? 1 : 0);
  }
  skip_ws();
  if (pos < text.size()) throw FormatError("pixel data exceeds declared dimensions", line);
  return BinaryImage(width, height, std::move(pixels));
}

std::string emit_pbm_p1(const BinaryImage& image) {
  std::string out = "P1\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n";
  for (int y = 0; y < image.height(); ++y) {
    std::size_t line_len = 0;
    for (int x = 0; x < image.width(); ++x) {
      if (line_len >= 69) {  // plain PBM lines stay under 70 characters
        out.push_back('\n');
        line_len = 0;
      } else if (x > 0) {
        out.push_back(' ');
        ++line_len;
      }
      out.push_back(image.at(x, y) ? '1' : '0');
      ++line_len;
    }
    out.push_back('\n');
  }
  return out;
}

BinaryImage read_image_file(const fs::path& path) {
  const auto content = read_file(path);
  try {
    return path.extension() == ".pbm" ? parse_pbm_p1(content) : parse_ascii_grid(content);
  } catch (const FormatError& e) {
    throw e.with_prefix(path.string() + ": ");
  }
}

void write_ascii_grid_file(const fs::path& path, const BinaryImage& image) {
  write_file(path, emit_ascii_grid(image));
}

Dataset load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw std::runtime_error("dataset root " + root.string() + " is not a directory");
  Dataset ds;
  ds.manifest.root = root;

  std::vector<fs::path> category_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) {
      category_dirs.push_back(entry.path());
    } else {
      ds.warnings.push_back("ignoring non-directory " + entry.path().string());
    }
  }
  std::sort(category_dirs.begin(), category_dirs.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  for (const auto& dir : category_dirs) {
    const CategoryId category(dir.filename().string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const auto ext = entry.path().extension();
      if (ext == ".txt" || ext == ".asc" || ext == ".pbm") {
        files.push_back(entry.path());
      } else {
        ds.warnings.push_back("skipping " + entry.path().string() + " (unknown extension)");
      }
    }
    if (files.empty()) {
      ds.warnings.push_back("category '" + category.label() + "' has no images");
      continue;
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    for (const auto& file : files) {
      BinaryImage image = read_image_file(file);
      if (ds.images.empty()) {
        ds.manifest.width = image.width();
        ds.manifest.height = image.height();
      } else if (image.width() != ds.manifest.width || image.height() != ds.manifest.height) {
        throw std::runtime_error(file.string() + " is " + std::to_string(image.width()) + "x" +
                                 std::to_string(image.height()) + ", expected " + std::to_string(ds.manifest.width) +
                                 "x" + std::to_string(ds.manifest.height));
      }
      ds.manifest.entries.push_back({file, category});
      ds.images.push_back({std::move(image), category});
    }
  }
  if (ds.images.empty()) throw std::runtime_error("dataset " + root.string() + " contains no images");
  return ds;
}

std::string format_rule(const GlobalRule& rule) {
  std::string out = "RULE present=[";
  auto coords = [&](const std::vector<Coord>& cs) {
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (k) out += ',';
      out += '(' + std::to_string(cs[k].x) + ',' + std::to_string(cs[k].y) + ')';
    }
  };
  coords(rule.present);
  out += "] missing=[";
  coords(rule.missing);
  out += "] from=";
  for (std::size_t k = 0; k < rule.sources.size(); ++k) {
    if (k) out += ',';
    out += '(' + std::to_string(rule.sources[k].first) + ',' + std::to_string(rule.sources[k].second) + ')';
  }
  return out;
}

namespace {

GlobalRule parse_rule_at(std::string_view line, int line_no) {
  LineParser p(line, line_no);
  GlobalRule rule;
  p.expect("RULE present=");
  rule.present = p.coord_list();
  p.expect(" missing=");
  rule.missing = p.coord_list();
  p.expect(" from=");
  do {
    const Coord c = p.coord();
    rule.sources.push_back({c.x, c.y});
  } while (p.accept(','));
  if (!p.done()) p.fail("trailing characters after rule");
  return rule;
}

}  // namespace

GlobalRule parse_rule(std::string_view line) { return parse_rule_at(line, 1); }

std::string serialize_model(const Model& model) {
  const auto& cfg = model.config;
  const auto& store = model.store;
  std::ostringstream out;
  out << "RCMODEL v1\n";
  out << "area_size " << cfg.area_size << '\n';
  out << "width " << cfg.width << '\n';
  out << "height " << cfg.height << '\n';
  out << "threshold " << format_double(cfg.threshold) << '\n';
  out << "iterations " << cfg.max_iterations << '\n';
  out << "creep_mode " << creep_mode_name(cfg.creep_mode) << '\n';
  out << "rule_scope " << rule_scope_name(cfg.rule_scope) << '\n';
  out << "remove_full_diff " << (cfg.remove_full_diff ? 1 : 0) << '\n';
  out << "category_mode " << category_mode_name(cfg.category_mode) << '\n';
  out << "categories " << cfg.categories.size() << '\n';
  for (const auto& c : cfg.categories) {
    if (!safe_label(c.label())) {
      throw std::invalid_argument("category label '" + c.label() +
                                  "' cannot be stored (whitespace, ':', ',' and '|' are reserved)");
    }
    out << "category " << c.label() << '\n';
  }
  out << "patterns " << store.distinct_patterns() << '\n';
  for (std::size_t k = 0; k < store.region_count(); ++k) {
    const RegionId r = store.region_at(k);
    for (const auto& [pattern, counts] : store.patterns_at(k)) {
      out << "R " << r.x << ' ' << r.y << " | " << pattern.bit_string() << " | ";
      bool first = true;
      for (const auto& [cat, n] : counts.entries()) {
        if (!first) out << ',';
        out << cat.label() << ':' << n;
        first = false;
      }
      out << '\n';
    }
  }
  out << "rules " << model.rules.size() << '\n';
  for (const auto& rule : model.rules.rules) out << format_rule(rule) << '\n';
  out << "end\n";
  return out.str();
}

Model deserialize_model(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t next = 0;
  auto take = [&](std::string_view what) -> std::pair<std::string_view, int> {
    if (next >= lines.size()) throw FormatError("unexpected end of model file, expected " + std::string(what));
    const int line_no = static_cast<int>(next) + 1;
    return {lines[next++], line_no};
  };
  auto field = [&](std::string_view key) -> std::pair<std::string_view, int> {
    auto [line, no] = take(key);
    if (line.substr(0, key.size() + 1) != std::string(key) + " ") {
      throw FormatError("expected '" + std::string(key) + "'", no);
    }
    return {line.substr(key.size() + 1), no};
  };
  auto int_field = [&](std::string_view key) {
    auto [value, no] = field(key);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) throw FormatError("bad integer for " + std::string(key), no);
    return v;
  };

  {
    auto [magic, no] = take("header");
    if (magic.substr(0, 9) != "RCMODEL v") throw FormatError("missing RCMODEL header", no);
    if (magic != "RCMODEL v1") {
      throw UnsupportedVersionError("unsupported model version '" + std::string(magic.substr(8)) + "'", no);
    }
  }

  Model model;
  auto& cfg = model.config;
  cfg.area_size = static_cast<int>(int_field("area_size"));
  cfg.width = static_cast<int>(int_field("width"));
  cfg.height = static_cast<int>(int_field("height"));
  {
    auto [value, no] = field("threshold");
    double v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size() || v < 0.0 || v > 1.0) {
      throw FormatError("bad threshold", no);
    }
    cfg.threshold = v;
  }
  cfg.max_iterations = static_cast<int>(int_field("iterations"));
  if (cfg.max_iterations < 1) throw FormatError("iteration cap must be at least 1", static_cast<int>(next));
  {
    auto [value, no] = field("creep_mode");
    if (value == "aligned") cfg.creep_mode = CreepMode::aligned;
    else if (value == "shifted") cfg.creep_mode = CreepMode::shifted;
    else throw FormatError("unknown creep_mode", no);
  }
  {
    auto [value, no] = field("rule_scope");
    if (value == "all") cfg.rule_scope = RuleScope::all;
    else if (value == "cross-category") cfg.rule_scope = RuleScope::cross_category;
    else if (value == "off") cfg.rule_scope = RuleScope::off;
    else throw FormatError("unknown rule_scope", no);
  }
  cfg.remove_full_diff = int_field("remove_full_diff") != 0;
  {
    auto [value, no] = field("category_mode");
    if (value == "counts") cfg.category_mode = CategoryMode::counts;
    else if (value == "set") cfg.category_mode = CategoryMode::set;
    else throw FormatError("unknown category_mode", no);
  }

  const auto category_count = int_field("categories");
  std::set<CategoryId> universe;
  for (long long i = 0; i < category_count; ++i) {
    auto [value, no] = field("category");
    if (value.empty()) throw FormatError("empty category label", no);
    universe.insert(CategoryId(std::string(value)));
  }
  cfg.categories.assign(universe.begin(), universe.end());

  try {
    model.store = RegionStore(cfg.width, cfg.height, cfg.area_size);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("inconsistent geometry: ") + e.what(), 2);
  }

  const auto pattern_count = int_field("patterns");
  for (long long i = 0; i < pattern_count; ++i) {
    auto [line, no] = take("pattern record");
    LineParser p(line, no);
    p.expect("R ");
    const RegionId r{static_cast<int>(p.integer()), 0};
    p.expect(" ");
    const RegionId region{r.x, static_cast<int>(p.integer())};
    p.expect(" | ");
    const auto bits_text = p.until(' ');
    p.expect(" | ");
    if (!region_valid(region, cfg.width, cfg.height, cfg.area_size)) p.fail("region outside the grid");
    if (bits_text.size() != static_cast<std::size_t>(cfg.area_size) * cfg.area_size) p.fail("wrong pattern length");
    std::vector<std::uint8_t> bits;
    for (char c : bits_text) {
      if (c != '0' && c != '1') p.fail("pattern bits must be 0 or 1");
      bits.push_back(c == '1' ? 1 : 0);
    }
    const AreaPattern pattern(cfg.area_size, std::move(bits));
    if (lookup_categories(model.store, region, pattern)) p.fail("duplicate pattern record");
    bool any = false;
    do {
      const CategoryId cat{std::string(p.until(':'))};
      p.expect(":");
      const auto n = p.integer();
      if (n < 1) p.fail("category counts must be positive");
      if (!universe.count(cat)) p.fail("category '" + cat.label() + "' not declared in header");
      model.store.add_count(region, pattern, cat, static_cast<std::uint64_t>(n));
      any = true;
    } while (p.accept(','));
    if (!any || !p.done()) p.fail("malformed category list");
  }

  const auto rule_count = int_field("rules");
  model.rules.width = cfg.width;
  model.rules.height = cfg.height;
  for (long long i = 0; i < rule_count; ++i) {
    auto [line, no] = take("rule record");
    model.rules.rules.push_back(parse_rule_at(line, no));
  }
  try {
    const auto before = model.rules.rules;
    model.rules.canonicalize();
    if (model.rules.rules != before) throw FormatError("rule records are not in canonical order");
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid rule: ") + e.what());
  }
  {
    auto [line, no] = take("end");
    if (line != "end") throw FormatError("expected 'end'", no);
  }
  return model;
}

void save_model(const Model& model, const fs::path& path) { write_file(path, serialize_model(model)); }

Model load_model(const fs::path& path) {
  const auto text = read_file(path);
  try {
    return deserialize_model(text);
  } catch (const UnsupportedVersionError& e) {
    throw e.with_prefix(path.string() + ": ");
  } catch (const FormatError& e) {
    throw e.with_prefix(path.string() + ": ");
  }
}

}  // namespace regioncreep
