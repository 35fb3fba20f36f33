// Copyright 2026 The CMSA-BIP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cmsa/mps.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cmsa/error.hpp"
#include "text_util.hpp"

namespace cmsa {
namespace {

using internal::format_double;
using internal::parse_double;
using internal::split_whitespace;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Bound magnitudes at or above this are read as infinite.
constexpr double kInfiniteBound = 1e30;

// Declaration order is the required file order.
enum class Section {
  kStart,
  kName,
  kObjsense,
  kRows,
  kColumns,
  kRhs,
  kRanges,
  kBounds,
  kEndata
};

std::optional<Section> section_from_keyword(std::string_view keyword) {
  if (keyword == "NAME") return Section::kName;
  if (keyword == "OBJSENSE") return Section::kObjsense;
  if (keyword == "ROWS") return Section::kRows;
  if (keyword == "COLUMNS") return Section::kColumns;
  if (keyword == "RHS") return Section::kRhs;
  if (keyword == "RANGES") return Section::kRanges;
  if (keyword == "BOUNDS") return Section::kBounds;
  if (keyword == "ENDATA") return Section::kEndata;
  return std::nullopt;
}

enum class RowKind { kObjective, kFree, kLe, kGe, kEq };

struct RawRow {
  std::string name;
  RowKind kind;
  std::vector<std::pair<int, double>> entries;
  double rhs = 0.0;
  std::optional<double> range;
};

struct RawColumn {
  std::string name;
  bool integer = false;
  double lower = 0.0;
  double upper = kInf;
  int line = 0;        // first appearance in COLUMNS
  int bound_line = 0;  // last BOUNDS line touching it
  bool semicontinuous = false;
};

class MpsReader {
 public:
  BipInstance read(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no_;
      if (line.empty() || line[0] == '*') continue;
      auto tokens = split_whitespace(line);
      if (tokens.empty()) continue;
      const bool header = line[0] != ' ' && line[0] != '\t';
      if (header) {
        start_section(tokens);
        if (section_ == Section::kEndata) return lower();
        continue;
      }
      switch (section_) {
        case Section::kStart:
        case Section::kName:
          fail("data line outside of any section");
        case Section::kObjsense:
          read_objsense(tokens[0]);
          break;
        case Section::kRows:
          read_row(tokens);
          break;
        case Section::kColumns:
          read_column(tokens);
          break;
        case Section::kRhs:
          read_rhs_or_range(tokens, /*is_range=*/false);
          break;
        case Section::kRanges:
          read_rhs_or_range(tokens, /*is_range=*/true);
          break;
        case Section::kBounds:
          read_bound(tokens);
          break;
        case Section::kEndata:
          break;
      }
    }
    throw MpsFormatError("missing ENDATA", line_no_);
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw MpsFormatError(message, line_no_);
  }

  double number(std::string_view token) const {
    auto value = parse_double(token);
    if (!value) fail("invalid number '" + std::string(token) + "'");
    return *value;
  }

  void start_section(const std::vector<std::string_view>& tokens) {
    std::string keyword(tokens[0]);
    auto next = section_from_keyword(keyword);
    if (!next) fail("unknown section '" + keyword + "'");
    if (*next <= section_) fail("section " + keyword + " out of order");
    section_ = *next;
    if (section_ == Section::kName) {
      name_ = tokens.size() > 1 ? std::string(tokens[1]) : std::string();
    } else if (section_ == Section::kObjsense && tokens.size() > 1) {
      read_objsense(tokens[1]);
    } else if (tokens.size() > 1 && section_ != Section::kEndata) {
      fail("unexpected tokens after " + keyword);
    }
  }

  void read_objsense(std::string_view token) {
    if (token == "MAX" || token == "MAXIMIZE") {
      sense_ = ObjectiveSense::kMaximize;
    } else if (token == "MIN" || token == "MINIMIZE") {
      sense_ = ObjectiveSense::kMinimize;
    } else {
      fail("unknown objective sense '" + std::string(token) + "'");
    }
  }

  void read_row(const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 2) fail("ROWS entry needs a type and a name");
    RowKind kind;
    if (tokens[0] == "N") {
      kind = objective_row_ < 0 ? RowKind::kObjective : RowKind::kFree;
    } else if (tokens[0] == "L") {
      kind = RowKind::kLe;
    } else if (tokens[0] == "G") {
      kind = RowKind::kGe;
    } else if (tokens[0] == "E") {
      kind = RowKind::kEq;
    } else {
      fail("unknown row type '" + std::string(tokens[0]) + "'");
    }
    std::string name(tokens[1]);
    const int index = static_cast<int>(rows_.size());
    if (!row_index_.emplace(name, index).second) {
      fail("duplicate row name '" + name + "'");
    }
    if (kind == RowKind::kObjective) objective_row_ = index;
    rows_.push_back({std::move(name), kind, {}, 0.0, std::nullopt});
  }

  int find_row(std::string_view name) const {
    auto it = row_index_.find(std::string(name));
    if (it == row_index_.end()) fail("unknown row '" + std::string(name) + "'");
    return it->second;
  }

  int find_column(std::string_view name) const {
    auto it = column_index_.find(std::string(name));
    if (it == column_index_.end()) {
      fail("unknown column '" + std::string(name) + "'");
    }
    return it->second;
  }

  void read_column(const std::vector<std::string_view>& tokens) {
    if (tokens.size() >= 3 && tokens[1] == "'MARKER'") {
      if (tokens[2] == "'INTORG'") {
        in_integer_block_ = true;
      } else if (tokens[2] == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        fail("unknown marker " + std::string(tokens[2]));
      }
      return;
    }
    if (tokens.size() != 3 && tokens.size() != 5) {
      fail("COLUMNS entry needs a column and one or two (row, value) pairs");
    }
    std::string name(tokens[0]);
    if (columns_.empty() || columns_.back().name != name) {
      const int index = static_cast<int>(columns_.size());
      if (!column_index_.emplace(name, index).second) {
        fail("duplicate column name '" + name + "'");
      }
      RawColumn column;
      column.name = std::move(name);
      column.integer = in_integer_block_;
      column.line = line_no_;
      columns_.push_back(std::move(column));
      objective_.push_back(0.0);
      column_rows_.clear();
    }
    const int col = static_cast<int>(columns_.size()) - 1;
    for (std::size_t k = 1; k + 1 < tokens.size(); k += 2) {
      const int row = find_row(tokens[k]);
      const double value = number(tokens[k + 1]);
      if (!column_rows_.insert(row).second) {
        fail("column '" + columns_.back().name + "' repeats row '" +
             rows_[row].name + "'");
      }
      switch (rows_[row].kind) {
        case RowKind::kObjective:
          objective_[col] = value;
          break;
        case RowKind::kFree:
          break;
        default:
          rows_[row].entries.emplace_back(col, value);
      }
    }
  }

  // RHS and RANGES share a layout: an optional set name, then one or two
  // (row, value) pairs. Only the first set is used.
  void read_rhs_or_range(const std::vector<std::string_view>& tokens,
                         bool is_range) {
    std::size_t first = 0;
    if (tokens.size() == 3 || tokens.size() == 5) {
      first = 1;
      std::string& set = is_range ? range_set_ : rhs_set_;
      if (set.empty()) set = std::string(tokens[0]);
      if (set != tokens[0]) return;
    } else if (tokens.size() != 2 && tokens.size() != 4) {
      fail(std::string(is_range ? "RANGES" : "RHS") +
           " entry needs (row, value) pairs");
    }
    for (std::size_t k = first; k + 1 < tokens.size(); k += 2) {
      const int row = find_row(tokens[k]);
      const double value = number(tokens[k + 1]);
      RawRow& r = rows_[row];
      if (is_range) {
        if (r.kind == RowKind::kObjective || r.kind == RowKind::kFree) {
          fail("RANGES entry on free row '" + r.name + "'");
        }
        r.range = value;
      } else if (r.kind == RowKind::kObjective) {
        objective_constant_ = -value;
      } else {
        r.rhs = value;
      }
    }
  }

  void read_bound(const std::vector<std::string_view>& tokens) {
    const std::string type(tokens.empty() ? "" : tokens[0]);
    const bool has_value = type == "UP" || type == "LO" || type == "FX" ||
                           type == "LI" || type == "UI" || type == "SC";
    const bool no_value =
        type == "FR" || type == "MI" || type == "PL" || type == "BV";
    if (!has_value && !no_value) fail("unknown bound type '" + type + "'");

    std::string_view column_token;
    std::optional<double> value;
    if (has_value) {
      if (tokens.size() == 4) {
        column_token = tokens[2];
      } else if (tokens.size() == 3) {
        column_token = tokens[1];
      } else {
        fail("bound " + type + " needs a column and a value");
      }
      value = number(tokens.back());
    } else if (tokens.size() == 3) {
      column_token = tokens[2];
    } else if (tokens.size() == 2) {
      column_token = tokens[1];
    } else if (type == "BV" && tokens.size() == 4) {
      column_token = tokens[2];
    } else {
      fail("malformed " + type + " bound");
    }

    RawColumn& column = columns_[find_column(column_token)];
    column.bound_line = line_no_;
    double v = value.value_or(0.0);
    if (v >= kInfiniteBound) v = kInf;
    if (v <= -kInfiniteBound) v = -kInf;
    if (type == "UP") {
      column.upper = v;
    } else if (type == "LO") {
      column.lower = v;
    } else if (type == "FX") {
      column.lower = column.upper = v;
    } else if (type == "LI") {
      column.integer = true;
      column.lower = v;
    } else if (type == "UI") {
      column.integer = true;
      column.upper = v;
    } else if (type == "SC") {
      column.semicontinuous = true;
    } else if (type == "FR") {
      column.lower = -kInf;
      column.upper = kInf;
    } else if (type == "MI") {
      column.lower = -kInf;
    } else if (type == "PL") {
      column.upper = kInf;
    } else {  // BV
      column.integer = true;
      column.lower = 0.0;
      column.upper = 1.0;
    }
  }

  BipInstance lower() {
    if (objective_row_ < 0 && rows_.empty()) {
      throw MpsFormatError("no ROWS section", 0);
    }
    if (columns_.empty()) throw MpsFormatError("no columns", 0);
    std::vector<std::string> names;
    names.reserve(columns_.size());
    for (const RawColumn& column : columns_) {
      const int line = column.bound_line > 0 ? column.bound_line : column.line;
      if (column.semicontinuous) {
        throw UnsupportedVariable(column.name, "semicontinuous", line);
      }
      if (!column.integer) {
        throw UnsupportedVariable(column.name, "continuous variable", line);
      }
      if (column.lower != 0.0 || column.upper != 1.0) {
        throw UnsupportedVariable(
            column.name,
            "integer bounds [" + format_double(column.lower) + ", " +
                format_double(column.upper) + "] are not [0, 1]",
            line);
      }
      names.push_back(column.name);
    }

    std::unordered_set<std::string> taken;
    for (const RawRow& r : rows_) taken.insert(r.name);
    std::vector<RowSpec> specs;
    for (RawRow& r : rows_) {
      if (r.kind == RowKind::kObjective || r.kind == RowKind::kFree) continue;
      if (!r.range) {
        RowSense sense = r.kind == RowKind::kLe   ? RowSense::kLe
                         : r.kind == RowKind::kGe ? RowSense::kGe
                                                  : RowSense::kEq;
        specs.push_back({r.name, std::move(r.entries), sense, r.rhs});
        continue;
      }
      const double width = std::abs(*r.range);
      double lo = r.rhs;
      double hi = r.rhs;
      if (r.kind == RowKind::kLe) {
        lo = r.rhs - width;
      } else if (r.kind == RowKind::kGe) {
        hi = r.rhs + width;
      } else if (*r.range > 0) {
        hi = r.rhs + width;
      } else {
        lo = r.rhs - width;
      }
      if (lo == hi) {
        specs.push_back({r.name, std::move(r.entries), RowSense::kEq, lo});
        continue;
      }
      std::string upper_name = r.name + "_rng";
      while (!taken.insert(upper_name).second) upper_name += "_";
      specs.push_back({r.name, r.entries, RowSense::kGe, lo});
      specs.push_back(
          {std::move(upper_name), std::move(r.entries), RowSense::kLe, hi});
    }
    try {
      return BipInstance(std::move(names), std::move(objective_), sense_,
                         std::move(specs), name_, objective_constant_);
    } catch (const UsageError& e) {
      throw MpsFormatError(e.what(), 0);
    }
  }

  int line_no_ = 0;
  Section section_ = Section::kStart;
  std::string name_;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  std::vector<RawRow> rows_;
  std::unordered_map<std::string, int> row_index_;
  int objective_row_ = -1;
  std::vector<RawColumn> columns_;
  std::unordered_map<std::string, int> column_index_;
  std::unordered_set<int> column_rows_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
  bool in_integer_block_ = false;
  std::string rhs_set_;
  std::string range_set_;
};

bool representable_name(const std::string& name) {
  if (name.empty() || name[0] == '*') return false;
  return std::none_of(name.begin(), name.end(),
                      [](unsigned char ch) { return std::isspace(ch) != 0; });
}

}  // namespace

BipInstance parse_mps(std::istream& in) { return MpsReader().read(in); }

BipInstance parse_mps(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_mps(in);
}

BipInstance read_mps_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_mps(in);
}

void write_mps(const BipInstance& instance, std::ostream& out) {
  const auto var_names = instance.var_names();
  const auto row_names = instance.row_names();
  for (const std::string& name : var_names) {
    if (!representable_name(name)) {
      throw UsageError("variable name '" + name + "' cannot be written to MPS");
    }
  }
  std::unordered_set<std::string_view> taken;
  for (const std::string& name : row_names) {
    if (!representable_name(name)) {
      throw UsageError("row name '" + name + "' cannot be written to MPS");
    }
    taken.insert(name);
  }
  std::string objective_name = "OBJ";
  while (taken.count(objective_name)) objective_name += "_";

  const std::string name =
      representable_name(instance.name()) ? instance.name() : "BIP";
  out << "NAME " << name << "\n";
  if (instance.objective_negated()) out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n N  " << objective_name << "\n";
  for (int i = 0; i < instance.num_rows(); ++i) {
    const char type = instance.row(i).sense == RowSense::kLe   ? 'L'
                      : instance.row(i).sense == RowSense::kGe ? 'G'
                                                               : 'E';
    out << ' ' << type << "  " << row_names[i] << "\n";
  }

  // Objective coefficients are written in the input's sense.
  const double sign = instance.objective_negated() ? -1.0 : 1.0;
  const auto objective = instance.objective();
  out << "COLUMNS\n";
  out << "    MARKER  'MARKER'  'INTORG'\n";
  for (int j = 0; j < instance.num_vars(); ++j) {
    const auto column = instance.column(j);
    if (objective[j] != 0.0 || column.empty()) {
      out << "    " << var_names[j] << "  " << objective_name << "  "
          << format_double(sign * objective[j]) << "\n";
    }
    for (const ColumnEntry& entry : column) {
      out << "    " << var_names[j] << "  " << row_names[entry.row] << "  "
          << format_double(entry.coefficient) << "\n";
    }
  }
  out << "    MARKER  'MARKER'  'INTEND'\n";

  out << "RHS\n";
  if (instance.objective_constant() != 0.0) {
    out << "    RHS  " << objective_name << "  "
        << format_double(-instance.objective_constant()) << "\n";
  }
  for (int i = 0; i < instance.num_rows(); ++i) {
    if (instance.row(i).rhs != 0.0) {
      out << "    RHS  " << row_names[i] << "  "
          << format_double(instance.row(i).rhs) << "\n";
    }
  }
  out << "BOUNDS\n";
  for (int j = 0; j < instance.num_vars(); ++j) {
    out << " BV BND  " << var_names[j] << "\n";
  }
  out << "ENDATA\n";
}

void write_mps_file(const BipInstance& instance,
                    const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_mps(instance, out);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace cmsa
