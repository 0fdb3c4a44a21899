#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "lpl/datagen.hpp"

namespace lpl {

/// CSV layout: header `f1,...,fd,label` (single-label, integer class) or
/// `f1,...,fd,y1,...,yC` (multi-hot). Comma separated, LF line endings.
/// Doubles are written in shortest round-trip form.
void write_dataset_csv(std::ostream& os, const Dataset& ds);
/// Throws ParseError carrying the 1-based line number of the bad row.
/// `num_classes` fixes C for single-label data; 0 means max label + 1.
Dataset read_dataset_csv(std::istream& is, std::size_t num_classes = 0);

/// Writes `path` and the key=value sidecar `path.meta` (generator,
/// parameters, seed, classes).
void save_csv(const Dataset& ds, const std::filesystem::path& path);
/// Reads `path`; picks up `path.meta` when present.
Dataset load_csv(const std::filesystem::path& path);

std::filesystem::path meta_path(const std::filesystem::path& path);
/// `key=value` lines; blank lines and `#` comments skipped.
std::map<std::string, std::string> read_key_values(std::istream& is);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Strict double parse of a whole cell; throws ParseError(line) otherwise.
double parse_double(const std::string& cell, std::size_t line);

}  // namespace lpl
