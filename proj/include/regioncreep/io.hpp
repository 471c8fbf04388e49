#pragma once

// External formats: ASCII grids ('0'/'1' per pixel, one line per row),
// plain PBM (P1), dataset directories laid out as root/<category>/<file>,
// and the line-oriented model file (header "RCMODEL v1").

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "regioncreep/core.hpp"
#include "regioncreep/rules.hpp"
#include "regioncreep/store.hpp"

namespace regioncreep {

/// Malformed input. line/column are 1-based; 0 means "not applicable".
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& message, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

  /// Same error with `prefix` (e.g. a file name) in front of the message.
  FormatError with_prefix(const std::string& prefix) const;

 protected:
  struct Raw {};
  FormatError(Raw, const std::string& full_message, int line, int column)
      : std::runtime_error(full_message), line_(line), column_(column) {}

 private:
  int line_;
  int column_;
};

class UnsupportedVersionError : public FormatError {
 public:
  using FormatError::FormatError;
  UnsupportedVersionError with_prefix(const std::string& prefix) const {
    return UnsupportedVersionError(Raw{}, prefix + what(), line(), column());
  }

 private:
  UnsupportedVersionError(Raw r, const std::string& m, int line, int column) : FormatError(r, m, line, column) {}
};

BinaryImage parse_ascii_grid(std::string_view text);
std::string emit_ascii_grid(const BinaryImage& image);

BinaryImage parse_pbm_p1(std::string_view text);
std::string emit_pbm_p1(const BinaryImage& image);

/// Reads an image file, choosing the format by extension (.pbm -> P1,
/// anything else -> ASCII grid).
BinaryImage read_image_file(const std::filesystem::path& path);
void write_ascii_grid_file(const std::filesystem::path& path, const BinaryImage& image);

struct DatasetEntry {
  std::filesystem::path file;
  CategoryId category;
};

struct DatasetManifest {
  std::filesystem::path root;
  std::vector<DatasetEntry> entries;
  int width = 0;
  int height = 0;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<LabeledImage> images;  // parallel to manifest.entries
  std::vector<std::string> warnings;
};

/// Loads root/<category>/<image files>. Files ending in .txt, .asc or .pbm
/// are read; others are skipped with a warning. Ordering is by category
/// name, then file name.
Dataset load_dataset(const std::filesystem::path& root);

std::string serialize_model(const Model& model);
Model deserialize_model(std::string_view text);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

/// One rule in the inspection/model line format:
/// RULE present=[(x,y),...] missing=[(x,y),...] from=(i,j)[,(k,l)...]
std::string format_rule(const GlobalRule& rule);
GlobalRule parse_rule(std::string_view line);

}  // namespace regioncreep
