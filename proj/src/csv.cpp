#include "censreg/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace censreg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

bool is_missing_token(const std::string& token) { return token.empty() || token == "NA"; }

double parse_cell(const std::string& token, ColumnType type, const std::string& column, int line) {
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ", column '" + column + "': " + what +
                             " (got '" + token + "')");
  };
  if (is_missing_token(token)) {
    if (type == ColumnType::NumericOrNA) return kNaN;
    fail("missing value not allowed");
  }
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) fail("expected a finite number");
  switch (type) {
    case ColumnType::Binary:
      if (v != 0.0 && v != 1.0) fail("expected 0 or 1");
      break;
    case ColumnType::PositiveNumeric:
      if (!(v > 0.0)) fail("expected a positive value");
      break;
    default:
      break;
  }
  return v;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size())
    throw std::invalid_argument("Dataset: names/columns mismatch");
  n_rows_ = columns_.empty() ? 0 : static_cast<int>(columns_[0].size());
  for (const auto& col : columns_)
    if (static_cast<int>(col.size()) != n_rows_)
      throw std::invalid_argument("Dataset: ragged columns");
}

bool Dataset::has_column(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& Dataset::column(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::runtime_error("no such column: '" + name + "'");
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

std::string Dataset::to_csv() const {
  std::ostringstream out;
  for (std::size_t j = 0; j < names_.size(); ++j) out << (j ? "," : "") << names_[j];
  out << "\n";
  char buffer[64];
  for (int i = 0; i < n_rows_; ++i) {
    for (std::size_t j = 0; j < columns_.size(); ++j) {
      if (j) out << ",";
      const double v = columns_[j][i];
      if (std::isnan(v)) {
        out << "NA";
      } else {
        std::snprintf(buffer, sizeof(buffer), "%.17g", v);
        out << buffer;
      }
    }
    out << "\n";
  }
  return out.str();
}

Dataset ingest_csv_text(const std::string& text, const std::vector<ColumnSpec>& schema,
                        const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(origin + ": empty file, header row required");
  const std::vector<std::string> header = split_csv_line(line);

  std::vector<int> positions;
  for (const ColumnSpec& spec : schema) {
    const auto it = std::find(header.begin(), header.end(), spec.name);
    if (it == header.end())
      throw std::runtime_error(origin + ": missing declared column '" + spec.name + "'");
    positions.push_back(static_cast<int>(it - header.begin()));
  }

  std::vector<std::vector<double>> columns(schema.size());
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw std::runtime_error(origin + ": line " + std::to_string(lineno) + ": expected " +
                               std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    for (std::size_t j = 0; j < schema.size(); ++j)
      columns[j].push_back(
          parse_cell(fields[positions[j]], schema[j].type, schema[j].name, lineno));
  }

  std::vector<std::string> names;
  for (const ColumnSpec& spec : schema) names.push_back(spec.name);
  return Dataset(std::move(names), std::move(columns));
}

Dataset ingest_csv(const std::string& path, const std::vector<ColumnSpec>& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ingest_csv_text(buffer.str(), schema, path);
}

std::vector<CensoredValue> assemble_interval2(const Dataset& data, const std::string& low_column,
                                              const std::string& high_column) {
  const std::vector<double>& low = data.column(low_column);
  const std::vector<double>& high = data.column(high_column);
  std::vector<CensoredValue> values;
  values.reserve(low.size());
  for (std::size_t i = 0; i < low.size(); ++i) {
    const bool low_na = std::isnan(low[i]);
    const bool high_na = std::isnan(high[i]);
    try {
      if (low_na && high_na) throw std::invalid_argument("both bounds missing (NA, NA)");
      if (low_na)
        values.push_back(CensoredValue::left_censored(high[i]));
      else if (high_na)
        values.push_back(CensoredValue::right_censored(low[i]));
      else if (low[i] > high[i])
        throw std::invalid_argument("lower bound exceeds upper bound");
      else if (low[i] == high[i])
        values.push_back(CensoredValue::exact(low[i]));
      else
        values.push_back(CensoredValue::interval(low[i], high[i]));
    } catch (const std::invalid_argument& err) {
      throw std::runtime_error("row " + std::to_string(i + 1) + " (" + low_column + ", " +
                               high_column + "): " + err.what());
    }
  }
  return values;
}

}  // namespace censreg
