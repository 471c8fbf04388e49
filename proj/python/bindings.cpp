#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "regioncreep/core.hpp"
#include "regioncreep/inference.hpp"
#include "regioncreep/io.hpp"
#include "regioncreep/rules.hpp"
#include "regioncreep/store.hpp"

namespace py = pybind11;
using namespace regioncreep;

namespace {

using XY = std::pair<int, int>;

std::vector<Coord> to_coords(const std::vector<XY>& xs) {
  std::vector<Coord> out;
  out.reserve(xs.size());
  for (auto [x, y] : xs) out.push_back({x, y});
  return out;
}

std::vector<XY> from_coords(const std::vector<Coord>& cs) {
  std::vector<XY> out;
  out.reserve(cs.size());
  for (Coord c : cs) out.emplace_back(c.x, c.y);
  return out;
}

std::vector<LabeledImage> to_labeled(const std::vector<std::pair<BinaryImage, std::string>>& items) {
  std::vector<LabeledImage> out;
  out.reserve(items.size());
  for (const auto& [image, label] : items) out.push_back({image, CategoryId(label)});
  return out;
}

CreepMode creep_mode_from(const std::string& s) {
  if (s == "aligned") return CreepMode::aligned;
  if (s == "shifted") return CreepMode::shifted;
  throw py::value_error("creep_mode must be 'aligned' or 'shifted'");
}

std::string creep_mode_name(CreepMode m) { return m == CreepMode::aligned ? "aligned" : "shifted"; }

RuleScope rule_scope_from(const std::string& s) {
  if (s == "all") return RuleScope::all;
  if (s == "cross-category") return RuleScope::cross_category;
  if (s == "off") return RuleScope::off;
  throw py::value_error("rules must be 'all', 'cross-category' or 'off'");
}

CategoryMode category_mode_from(const std::string& s) {
  if (s == "set") return CategoryMode::set;
  if (s == "counts") return CategoryMode::counts;
  throw py::value_error("category_mode must be 'set' or 'counts'");
}

BinaryImage from_rows(const std::vector<std::string>& rows) {
  std::string text;
  for (const auto& r : rows) text += r + "\n";
  return parse_ascii_grid(text);
}

BinaryImage from_array(py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  std::vector<std::uint8_t> px(a.data(), a.data() + a.size());
  return BinaryImage(w, h, std::move(px));
}

py::array_t<std::uint8_t> to_array(const BinaryImage& img) {
  py::array_t<std::uint8_t> out({img.height(), img.width()});
  std::copy(img.pixels().begin(), img.pixels().end(), out.mutable_data());
  return out;
}

std::map<std::string, std::uint64_t> labels(const CategoryCounts& c) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& [cat, n] : c.entries()) out[cat.label()] = n;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Region creep binary image classifier";

  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<BinaryImage>(m, "BinaryImage")
      .def(py::init<int, int>(), py::arg("width"), py::arg("height"))
      .def(py::init<int, int, std::vector<std::uint8_t>>(), py::arg("width"), py::arg("height"), py::arg("pixels"))
      .def_static("from_rows", &from_rows, py::arg("rows"), "Build from strings of '0'/'1', one per row.")
      .def_static("from_array", &from_array, py::arg("array"), "Build from a 2-D array indexed [y, x].")
      .def_property_readonly("width", &BinaryImage::width)
      .def_property_readonly("height", &BinaryImage::height)
      .def("__getitem__", [](const BinaryImage& img, XY xy) {
        if (!img.contains({xy.first, xy.second})) throw py::index_error("pixel out of range");
        return img.at(xy.first, xy.second);
      })
      .def("__setitem__", [](BinaryImage& img, XY xy, bool v) {
        if (!img.contains({xy.first, xy.second})) throw py::index_error("pixel out of range");
        img.set(xy.first, xy.second, v);
      })
      .def("popcount", &BinaryImage::popcount)
      .def("to_array", &to_array)
      .def("rows", [](const BinaryImage& img) {
        std::vector<std::string> rows;
        std::istringstream in(emit_ascii_grid(img));
        for (std::string line; std::getline(in, line);) rows.push_back(line);
        return rows;
      })
      .def(py::self == py::self)
      .def("__repr__", [](const BinaryImage& img) {
        return "<BinaryImage " + std::to_string(img.width()) + "x" + std::to_string(img.height()) + ">";
      });

  py::class_<AreaPattern>(m, "AreaPattern")
      .def(py::init([](const std::string& rows) { return AreaPattern::from_string(rows); }), py::arg("rows"))
      .def_property_readonly("size", &AreaPattern::size)
      .def("bit_string", &AreaPattern::bit_string)
      .def("popcount", &AreaPattern::popcount)
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def("__hash__", [](const AreaPattern& p) { return py::hash(py::str(p.bit_string())); })
      .def("__repr__", [](const AreaPattern& p) { return "<AreaPattern " + p.bit_string() + ">"; });

  py::class_<GlobalRule>(m, "GlobalRule")
      .def_property_readonly("present", [](const GlobalRule& r) { return from_coords(r.present); })
      .def_property_readonly("missing", [](const GlobalRule& r) { return from_coords(r.missing); })
      .def_property_readonly("sources", [](const GlobalRule& r) {
        std::vector<XY> out;
        for (const auto& s : r.sources) out.emplace_back(s.first, s.second);
        return out;
      })
      .def("__str__", &format_rule);

  py::class_<RuleSet>(m, "RuleSet")
      .def(py::init([](int w, int h, const std::vector<std::tuple<std::vector<XY>, std::vector<XY>>>& rules) {
             RuleSet set{w, h, {}};
             for (const auto& [present, missing] : rules) set.rules.push_back({to_coords(present), to_coords(missing), {RuleSource{0, 1}}});
             set.canonicalize();
             return set;
           }),
           py::arg("width"), py::arg("height"), py::arg("rules"),
           "Build from (present, missing) coordinate lists.")
      .def_readonly("width", &RuleSet::width)
      .def_readonly("height", &RuleSet::height)
      .def_readonly("rules", &RuleSet::rules)
      .def("__len__", &RuleSet::size);

  py::class_<Model>(m, "Model")
      .def_property_readonly("area_size", [](const Model& md) { return md.config.area_size; })
      .def_property_readonly("width", [](const Model& md) { return md.config.width; })
      .def_property_readonly("height", [](const Model& md) { return md.config.height; })
      .def_property_readonly("threshold", [](const Model& md) { return md.config.threshold; })
      .def_property_readonly("iterations", [](const Model& md) { return md.config.max_iterations; })
      .def_property_readonly("creep_mode", [](const Model& md) { return creep_mode_name(md.config.creep_mode); })
      .def_property_readonly("categories", [](const Model& md) {
        std::vector<std::string> out;
        for (const auto& c : md.config.categories) out.push_back(c.label());
        return out;
      })
      .def_property_readonly("region_count", [](const Model& md) { return md.store.region_count(); })
      .def_property_readonly("distinct_patterns", [](const Model& md) { return md.store.distinct_patterns(); })
      .def_readonly("rules", &Model::rules)
      .def("lookup", [](const Model& md, XY r, const AreaPattern& p) -> std::optional<std::map<std::string, std::uint64_t>> {
        const auto* c = lookup_categories(md.store, {r.first, r.second}, p);
        if (!c) return std::nullopt;
        return labels(*c);
      }, py::arg("region"), py::arg("pattern"), "Stored category counts for a pattern at a region, or None.")
      .def(py::self == py::self);

  py::class_<ClassificationResult>(m, "ClassificationResult")
      .def_property_readonly("category", [](const ClassificationResult& r) { return r.chosen.label(); })
      .def_property_readonly("votes", [](const ClassificationResult& r) {
        std::map<std::string, std::uint64_t> out;
        for (const auto& [c, v] : r.votes) out[c.label()] = v;
        return out;
      })
      .def_readonly("final_image", &ClassificationResult::final_image)
      .def_readonly("iterations", &ClassificationResult::iterations_run)
      .def_readonly("converged", &ClassificationResult::converged)
      .def_readonly("frames", &ClassificationResult::frames);

  m.def("region_grid", [](int w, int h, int a) {
    std::vector<XY> out;
    for (auto r : region_grid(w, h, a)) out.emplace_back(r.x, r.y);
    return out;
  }, py::arg("width"), py::arg("height"), py::arg("area_size"));

  m.def("extract_area", [](const BinaryImage& img, XY r, int a) { return extract_area(img, {r.first, r.second}, a); },
        py::arg("image"), py::arg("region"), py::arg("area_size"));

  m.def("agreement_score", &agreement_score, py::arg("p"), py::arg("q"));

  m.def("diff_images", [](const BinaryImage& a, const BinaryImage& b) {
    const auto d = diff_images(a, b);
    return std::make_pair(from_coords(d.only_in_first), from_coords(d.only_in_second));
  }, py::arg("a"), py::arg("b"), "Returns (only_in_a, only_in_b) coordinate lists.");

  m.def("corner_pixels", [](const std::vector<XY>& stroke, int w, int h) {
    return from_coords(corner_pixels(to_coords(stroke), w, h));
  }, py::arg("stroke"), py::arg("width"), py::arg("height"));

  m.def("build_rules", [](const std::vector<std::pair<BinaryImage, std::string>>& images, const std::string& rules,
                          bool remove_full_diff) {
    return build_rules(to_labeled(images), {rule_scope_from(rules), remove_full_diff});
  }, py::arg("images"), py::arg("rules") = "all", py::arg("remove_full_diff") = false);

  m.def("apply_rules", &apply_rules, py::arg("image"), py::arg("rules"));

  m.def("train", [](const std::vector<std::pair<BinaryImage, std::string>>& images, int area_size, double threshold,
                    int iterations, const std::string& creep_mode, const std::string& rules,
                    const std::string& category_mode, bool remove_full_diff) {
    TrainOptions opts;
    opts.area_size = area_size;
    opts.threshold = threshold;
    opts.max_iterations = iterations;
    opts.creep_mode = creep_mode_from(creep_mode);
    opts.rule_scope = rule_scope_from(rules);
    opts.category_mode = category_mode_from(category_mode);
    opts.remove_full_diff = remove_full_diff;
    const auto labeled = to_labeled(images);
    py::gil_scoped_release release;
    return train_set(labeled, opts);
  }, py::arg("images"), py::arg("area_size") = 5, py::arg("threshold") = 0.5, py::arg("iterations") = 3,
     py::arg("creep_mode") = "aligned", py::arg("rules") = "all", py::arg("category_mode") = "set",
     py::arg("remove_full_diff") = false,
     "Train a model from a list of (BinaryImage, label) pairs.");

  m.def("classify", [](const Model& model, const BinaryImage& image, std::optional<double> threshold,
                       std::optional<int> iterations, std::optional<std::string> creep_mode) {
    auto opts = InferenceOptions::from_config(model.config);
    if (threshold) opts.threshold = *threshold;
    if (iterations) opts.max_iterations = *iterations;
    if (creep_mode) opts.creep_mode = creep_mode_from(*creep_mode);
    py::gil_scoped_release release;
    return classify(model, image, opts);
  }, py::arg("model"), py::arg("image"), py::arg("threshold") = py::none(), py::arg("iterations") = py::none(),
     py::arg("creep_mode") = py::none());

  m.def("parse_ascii_grid", &parse_ascii_grid, py::arg("text"));
  m.def("emit_ascii_grid", &emit_ascii_grid, py::arg("image"));
  m.def("parse_pbm", &parse_pbm_p1, py::arg("text"));
  m.def("emit_pbm", &emit_pbm_p1, py::arg("image"));
  m.def("read_image", &read_image_file, py::arg("path"));

  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
  m.def("load_model", &load_model, py::arg("path"));
  m.def("serialize_model", [](const Model& model) { return py::bytes(serialize_model(model)); }, py::arg("model"));

  m.def("load_dataset", [](const std::filesystem::path& root) {
    auto ds = load_dataset(root);
    std::vector<std::pair<BinaryImage, std::string>> out;
    for (auto& item : ds.images) out.emplace_back(std::move(item.image), item.category.label());
    return out;
  }, py::arg("root"), "Load root/<label>/<image> files as a list of (BinaryImage, label).");
}
