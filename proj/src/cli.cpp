#include "regioncreep/cli.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "parallel.hpp"
#include "regioncreep/inference.hpp"
#include "regioncreep/io.hpp"

namespace regioncreep::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CreepMode parse_creep_mode(const std::string& s) { return s == "shifted" ? CreepMode::shifted : CreepMode::aligned; }

std::string_view creep_mode_name(CreepMode m) { return m == CreepMode::aligned ? "aligned" : "shifted"; }

struct TrainArgs {
  std::string data;
  int area_size = 5;
  double threshold = 0.5;
  int iterations = 3;
  std::string creep_mode = "aligned";
  std::string rules = "all";
  std::string category_mode = "set";
  bool remove_full_diff = false;
  std::string out;
};

struct InferenceOverrides {
  std::optional<double> threshold;
  std::optional<int> iterations;
  std::optional<std::string> creep_mode;

  InferenceOptions apply(const Model& model) const {
    auto opts = InferenceOptions::from_config(model.config);
    if (threshold) opts.threshold = *threshold;
    if (iterations) opts.max_iterations = *iterations;
    if (creep_mode) opts.creep_mode = parse_creep_mode(*creep_mode);
    return opts;
  }
};

struct ClassifyArgs {
  std::string model;
  std::string image;
  std::string emit_final;
  std::string emit_frames;
  InferenceOverrides overrides;
};

struct EvalArgs {
  std::string model;
  std::string data;
  std::string report;
  unsigned threads = 0;
  InferenceOverrides overrides;
};

struct RulesArgs {
  std::string model;
};

void add_overrides(CLI::App* cmd, InferenceOverrides& o) {
  cmd->add_option("--threshold", o.threshold, "Override the creep filter fraction X")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--iterations", o.iterations, "Override the iteration cap Z")->check(CLI::PositiveNumber);
  cmd->add_option("--creep-mode", o.creep_mode, "Override the creep overlay")
      ->check(CLI::IsMember({"aligned", "shifted"}));
}

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  if (args.area_size < 1) throw UsageError("--area-size must be at least 1");
  const Dataset ds = load_dataset(args.data);
  for (const auto& w : ds.warnings) err << "warning: " << w << '\n';
  if (args.area_size > std::min(ds.manifest.width, ds.manifest.height)) {
    throw UsageError("--area-size " + std::to_string(args.area_size) + " exceeds the " +
                     std::to_string(ds.manifest.width) + "x" + std::to_string(ds.manifest.height) + " images");
  }

  TrainOptions opts;
  opts.area_size = args.area_size;
  opts.threshold = args.threshold;
  opts.max_iterations = args.iterations;
  opts.creep_mode = parse_creep_mode(args.creep_mode);
  opts.rule_scope = args.rules == "off"              ? RuleScope::off
                    : args.rules == "cross-category" ? RuleScope::cross_category
                                                     : RuleScope::all;
  opts.remove_full_diff = args.remove_full_diff;
  opts.category_mode = args.category_mode == "set" ? CategoryMode::set : CategoryMode::counts;

  const auto start = std::chrono::steady_clock::now();
  const Model model = train_set(ds.images, opts);
  save_model(model, args.out);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

  out << "images " << ds.images.size() << '\n';
  out << "categories " << model.config.categories.size() << '\n';
  out << "image size " << model.config.width << "x" << model.config.height << '\n';
  out << "area size " << model.config.area_size << '\n';
  out << "regions " << model.store.region_count() << '\n';
  out << "distinct patterns " << model.store.distinct_patterns() << '\n';
  out << "rules " << model.rules.size() << '\n';
  out << "model " << args.out << '\n';
  err << "trained in " << std::fixed << std::setprecision(2) << elapsed.count() << " s\n";
  return kExitOk;
}

void print_votes(const ClassificationResult& result, std::ostream& out) {
  std::vector<std::pair<CategoryId, std::uint64_t>> votes(result.votes.begin(), result.votes.end());
  std::stable_sort(votes.begin(), votes.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  out << "votes\n";
  for (const auto& [cat, v] : votes) out << "  " << cat.label() << ": " << v << '\n';
}

int cmd_classify(const ClassifyArgs& args, std::ostream& out, std::ostream& err) {
  const Model model = load_model(args.model);
  const BinaryImage image = read_image_file(args.image);
  if (image.width() != model.config.width || image.height() != model.config.height) {
    err << "error: image is " << image.width() << "x" << image.height() << " but the model expects "
        << model.config.width << "x" << model.config.height << '\n';
    return kExitFailure;
  }
  const auto result = classify(model, image, args.overrides.apply(model));

  out << "category " << result.chosen.label() << '\n';
  out << "iterations " << result.iterations_run << '\n';
  out << "converged " << (result.converged ? "yes" : "no") << '\n';
  print_votes(result, out);

  if (!args.emit_final.empty()) write_ascii_grid_file(args.emit_final, result.final_image);
  if (!args.emit_frames.empty()) {
    fs::create_directories(args.emit_frames);
    write_ascii_grid_file(fs::path(args.emit_frames) / "frame_0.txt", image);
    for (std::size_t k = 0; k < result.frames.size(); ++k) {
      write_ascii_grid_file(fs::path(args.emit_frames) / ("frame_" + std::to_string(k + 1) + ".txt"),
                            result.frames[k]);
    }
  }
  return kExitOk;
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  const Model model = load_model(args.model);
  const Dataset ds = load_dataset(args.data);
  for (const auto& w : ds.warnings) err << "warning: " << w << '\n';
  if (ds.manifest.width != model.config.width || ds.manifest.height != model.config.height) {
    err << "error: dataset images are " << ds.manifest.width << "x" << ds.manifest.height
        << " but the model expects " << model.config.width << "x" << model.config.height << '\n';
    return kExitFailure;
  }
  const auto opts = args.overrides.apply(model);

  const auto& known = model.config.categories;
  const bool overlap = std::any_of(ds.images.begin(), ds.images.end(), [&](const LabeledImage& item) {
    return std::binary_search(known.begin(), known.end(), item.category);
  });
  if (!overlap) err << "warning: no dataset category is known to the model; accuracy will be 0%\n";

  const auto start = std::chrono::steady_clock::now();
  std::vector<CategoryId> predicted(ds.images.size());
  std::vector<char> recalled(ds.images.size(), 0);
  std::atomic<std::size_t> done{0};
  detail::parallel_for(
      ds.images.size(),
      [&](unsigned, std::size_t i) {
        predicted[i] = classify(model, ds.images[i].image, opts).chosen;
        recalled[i] = memorized(model, ds.images[i].image, ds.images[i].category) ? 1 : 0;
        const auto n = ++done;
        if (n % 50 == 0 || n == ds.images.size()) {
          static std::mutex progress;
          std::lock_guard lock(progress);
          err << "\rclassified " << n << "/" << ds.images.size() << std::flush;
        }
      },
      args.threads);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  err << "\nevaluated in " << std::fixed << std::setprecision(2) << elapsed.count() << " s\n";

  std::vector<CategoryId> truth;
  truth.reserve(ds.images.size());
  for (const auto& item : ds.images) truth.push_back(item.category);
  BenchmarkReport report = make_report(truth, predicted);
  report.area_size = model.config.area_size;
  report.threshold = opts.threshold;
  report.iterations = opts.max_iterations;
  report.creep_mode = opts.creep_mode;
  report.memorized = static_cast<std::size_t>(std::count(recalled.begin(), recalled.end(), 1));

  out << format_table(report);
  if (!args.report.empty()) {
    std::ofstream csv(args.report, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + args.report);
    csv << format_csv(report);
  }
  return kExitOk;
}

int cmd_rules(const RulesArgs& args, std::ostream& out) {
  const Model model = load_model(args.model);
  for (const auto& rule : model.rules.rules) out << format_rule(rule) << '\n';
  out << model.rules.size() << (model.rules.size() == 1 ? " rule" : " rules") << '\n';
  return kExitOk;
}

}  // namespace

std::string format_percent(std::size_t correct, std::size_t total) {
  const double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", pct);
  return buf;
}

BenchmarkReport make_report(const std::vector<CategoryId>& truth, const std::vector<CategoryId>& predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("make_report: size mismatch");
  std::map<CategoryId, CategoryScore> rows;
  BenchmarkReport report;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto& row = rows[truth[i]];
    row.category = truth[i];
    ++row.total;
    ++report.total;
    if (truth[i] == predicted[i]) {
      ++row.correct;
      ++report.correct;
    }
  }
  for (auto& [_, row] : rows) report.rows.push_back(row);
  return report;
}

std::string format_table(const BenchmarkReport& report) {
  std::vector<std::array<std::string, 3>> cells;
  cells.push_back({"Dataset", "Correct", "% Accurate"});
  for (const auto& row : report.rows) {
    cells.push_back({row.category.label(), std::to_string(row.correct) + " from " + std::to_string(row.total),
                     format_percent(row.correct, row.total)});
  }
  cells.push_back({"Total", std::to_string(report.correct) + " from " + std::to_string(report.total),
                   format_percent(report.correct, report.total)});
  std::array<std::size_t, 3> widths{};
  for (const auto& r : cells) {
    for (std::size_t c = 0; c < 3; ++c) widths[c] = std::max(widths[c], r[c].size());
  }

  std::ostringstream out;
  out << "# area size " << report.area_size << ", threshold " << report.threshold << ", iterations "
      << report.iterations << ", creep " << creep_mode_name(report.creep_mode) << '\n';
  out << "# " << report.memorized << " of " << report.total
      << " evaluation images are stored verbatim in the model (training-set overlap)\n";
  for (std::size_t r = 0; r < cells.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(widths[0])) << cells[r][0] << " | "
        << std::setw(static_cast<int>(widths[1])) << cells[r][1] << " | " << cells[r][2] << '\n';
  }
  return out.str();
}

std::string format_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  auto pct = [](std::size_t c, std::size_t t) {
    auto s = format_percent(c, t);
    s.pop_back();
    return s;
  };
  out << "category,correct,total,pct\n";
  for (const auto& row : report.rows) {
    out << row.category.label() << ',' << row.correct << ',' << row.total << ',' << pct(row.correct, row.total) << '\n';
  }
  out << "Total," << report.correct << ',' << report.total << ',' << pct(report.correct, report.total) << '\n';
  return out.str();
}

bool memorized(const Model& model, const BinaryImage& image, const CategoryId& category) {
  if (image.width() != model.store.width() || image.height() != model.store.height()) return false;
  for (std::size_t k = 0; k < model.store.region_count(); ++k) {
    const RegionId r = model.store.region_at(k);
    const auto* counts = lookup_categories(model.store, r, extract_area(image, r, model.store.area_size()));
    if (!counts || !counts->contains(category)) return false;
  }
  return true;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Region creep binary image classifier", "rcreep"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a model from root/<category>/<image> files");
  train_cmd->add_option("--data", train.data, "Dataset root directory")->required();
  train_cmd->add_option("--area-size", train.area_size, "Area side length in pixels");
  train_cmd->add_option("--threshold", train.threshold, "Creep filter fraction X")->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--iterations", train.iterations, "Iteration cap Z")->check(CLI::PositiveNumber);
  train_cmd->add_option("--creep-mode", train.creep_mode, "Creep overlay")->check(CLI::IsMember({"aligned", "shifted"}));
  train_cmd->add_option("--rules", train.rules, "Rule construction")
      ->check(CLI::IsMember({"all", "cross-category", "off"}));
  train_cmd->add_option("--category-mode", train.category_mode, "Category bookkeeping")
      ->check(CLI::IsMember({"counts", "set"}));
  train_cmd->add_flag("--remove-full-diff", train.remove_full_diff, "Rules clear whole difference strokes");
  train_cmd->add_option("--out", train.out, "Model file to write")->required();

  ClassifyArgs cls;
  auto* classify_cmd = app.add_subcommand("classify", "Classify and reconstruct one image");
  classify_cmd->add_option("--model", cls.model, "Model file")->required();
  classify_cmd->add_option("--image", cls.image, "Image file (.pbm or ASCII grid)")->required();
  classify_cmd->add_option("--emit-final", cls.emit_final, "Write the final image as an ASCII grid");
  classify_cmd->add_option("--emit-frames", cls.emit_frames, "Write input and per-iteration frames to a directory");
  add_overrides(classify_cmd, cls.overrides);

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Classify a dataset and print per-category accuracy");
  eval_cmd->add_option("--model", ev.model, "Model file")->required();
  eval_cmd->add_option("--data", ev.data, "Dataset root directory")->required();
  eval_cmd->add_option("--report", ev.report, "Also write the report as CSV");
  eval_cmd->add_option("--threads", ev.threads, "Worker threads (0 = all cores)");
  add_overrides(eval_cmd, ev.overrides);

  RulesArgs rl;
  auto* rules_cmd = app.add_subcommand("rules", "List the global rules of a model");
  rules_cmd->add_option("--model", rl.model, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train, out, err);
    if (classify_cmd->parsed()) return cmd_classify(cls, out, err);
    if (eval_cmd->parsed()) return cmd_eval(ev, out, err);
    if (rules_cmd->parsed()) return cmd_rules(rl, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace regioncreep::cli
