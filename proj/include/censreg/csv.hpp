#pragma once

#include "censreg/censoring.hpp"

#include <string>
#include <vector>

namespace censreg {

enum class ColumnType {
  Numeric,          // finite number required
  NumericOrNA,      // NA or empty allowed, stored as NaN
  Binary,           // 0 or 1
  PositiveNumeric,  // finite number > 0 (survival times)
};

struct ColumnSpec {
  std::string name;
  ColumnType type;
};

// Column-named table read from CSV. Missing values are NaN.
class Dataset {
 public:
  Dataset(std::vector<std::string> names, std::vector<std::vector<double>> columns);

  int n_rows() const { return n_rows_; }
  const std::vector<std::string>& names() const { return names_; }
  bool has_column(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;

  // Round-trip serialization; numbers written with full precision, NaN as NA.
  std::string to_csv() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  int n_rows_ = 0;
};

// Reads the declared columns from a comma-separated file with a header row.
// `NA` and empty cells are missing. Errors carry file line numbers.
Dataset ingest_csv(const std::string& path, const std::vector<ColumnSpec>& schema);
Dataset ingest_csv_text(const std::string& text, const std::vector<ColumnSpec>& schema,
                        const std::string& origin = "<string>");

// Assembles the two-column interval2 coding into censored values, reporting
// parse errors with row numbers.
std::vector<CensoredValue> assemble_interval2(const Dataset& data, const std::string& low_column,
                                              const std::string& high_column);

}  // namespace censreg
