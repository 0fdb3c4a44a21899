#include "lpl/dataset_io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lpl/errors.hpp"

namespace lpl {
namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool next_line(std::istream& is, std::string& line) {
  if (!std::getline(is, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

double parse_double(const std::string& cell, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError("not a finite number: '" + cell + "'", line);
  }
  return v;
}

void write_dataset_csv(std::ostream& os, const Dataset& ds) {
  const std::size_t d = ds.dim();
  const std::size_t classes = ds.num_classes();
  std::string header;
  for (std::size_t j = 0; j < d; ++j) header += fmt::format("f{},", j + 1);
  if (ds.kind == TaskKind::single_label) {
    header += "label";
  } else {
    for (std::size_t c = 0; c < classes; ++c) header += fmt::format("{}y{}", c == 0 ? "" : ",", c + 1);
  }
  os << header << '\n';
  std::string row;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    row.clear();
    for (std::size_t j = 0; j < d; ++j) {
      row += fmt::format("{},", ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    if (ds.kind == TaskKind::single_label) {
      row += std::to_string(ds.label(i));
    } else {
      for (std::size_t c = 0; c < classes; ++c) row += fmt::format("{}{}", c == 0 ? "" : ",", ds.targets[i][c] == 1.0 ? 1 : 0);
    }
    os << row << '\n';
  }
}

Dataset read_dataset_csv(std::istream& is, std::size_t num_classes) {
  std::string line;
  if (!next_line(is, line)) throw ParseError("missing header row", 1);
  const std::vector<std::string> header = split_row(line);
  std::size_t d = 0;
  while (d < header.size() && header[d] == "f" + std::to_string(d + 1)) ++d;
  if (d == 0) throw ParseError("header must start with f1", 1);

  Dataset ds;
  std::size_t classes = 0;
  if (header.size() == d + 1 && header[d] == "label") {
    ds.kind = TaskKind::single_label;
  } else {
    ds.kind = TaskKind::multi_label;
    classes = header.size() - d;
    for (std::size_t c = 0; c < classes; ++c) {
      if (header[d + c] != "y" + std::to_string(c + 1)) {
        throw ParseError("unexpected header column '" + header[d + c] + "'", 1);
      }
    }
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> labels;
  std::vector<RealVec> targets;
  std::size_t lineno = 1;
  while (next_line(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != header.size()) {
      throw ParseError(fmt::format("expected {} columns, found {}", header.size(), cells.size()), lineno);
    }
    std::vector<double> x(d);
    for (std::size_t j = 0; j < d; ++j) x[j] = parse_double(cells[j], lineno);
    rows.push_back(std::move(x));
    if (ds.kind == TaskKind::single_label) {
      const double v = parse_double(cells[d], lineno);
      if (v < 0.0 || v != std::floor(v)) throw ParseError("label must be a non-negative integer", lineno);
      labels.push_back(static_cast<std::size_t>(v));
    } else {
      RealVec t(classes);
      for (std::size_t c = 0; c < classes; ++c) {
        t[c] = parse_double(cells[d + c], lineno);
        if (t[c] != 0.0 && t[c] != 1.0) throw ParseError("multi-hot target must be 0 or 1", lineno);
      }
      targets.push_back(std::move(t));
    }
  }
  if (rows.empty()) throw ParseError("no data rows", lineno);

  if (ds.kind == TaskKind::single_label) {
    std::size_t max_label = 0;
    for (std::size_t l : labels) max_label = std::max(max_label, l);
    classes = num_classes == 0 ? max_label + 1 : num_classes;
    if (max_label >= classes) throw ParseError("label exceeds the declared class count", 0);
    for (std::size_t l : labels) {
      RealVec t(classes, 0.0);
      t[l] = 1.0;
      targets.push_back(std::move(t));
    }
  }
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  ds.targets = std::move(targets);
  ds.refresh_profile();
  return ds;
}

std::filesystem::path meta_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".meta");
}

std::map<std::string, std::string> read_key_values(std::istream& is) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os.flush()) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  ds.validate();
  std::ostringstream csv;
  write_dataset_csv(csv, ds);
  std::ostringstream meta;
  meta << "generator=" << ds.provenance.generator << '\n'
       << "seed=" << ds.provenance.seed << '\n'
       << "stream=" << ds.provenance.stream << '\n'
       << "kind=" << (ds.kind == TaskKind::single_label ? "single_label" : "multi_label") << '\n'
       << "classes=" << ds.num_classes() << '\n';
  for (const auto& [k, v] : ds.provenance.params) meta << "param." << k << '=' << v << '\n';
  write_text_atomic(path, csv.str());
  write_text_atomic(meta_path(path), meta.str());
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open dataset " + path.string());
  std::map<std::string, std::string> meta;
  if (std::ifstream ms(meta_path(path)); ms) meta = read_key_values(ms);

  std::size_t classes = 0;
  if (auto it = meta.find("classes"); it != meta.end()) classes = std::stoul(it->second);
  Dataset ds = read_dataset_csv(is, classes);
  if (!meta.empty()) {
    ds.provenance.generator = meta["generator"];
    if (!meta["seed"].empty()) ds.provenance.seed = std::stoull(meta["seed"]);
    if (!meta["stream"].empty()) ds.provenance.stream = std::stoull(meta["stream"]);
    for (const auto& [k, v] : meta) {
      if (k.rfind("param.", 0) == 0) ds.provenance.params.emplace_back(k.substr(6), v);
    }
  }
  return ds;
}

}  // namespace lpl
