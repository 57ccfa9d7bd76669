#pragma once

#include "plasmoheat/types.hpp"

#include <fstream>
#include <optional>

namespace ph {

// Locale-independent formatting with 17 significant digits, so repeated runs
// are byte-identical and values round-trip exactly.
std::string format_real(Real v);

// CSV writer with a mandatory header row. Data is staged in a temp file and
// renamed into place on commit; nothing appears at `path` before that.
class CsvWriter {
public:
  CsvWriter(std::string path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<Real>& values);
  void raw_row(const std::vector<std::string>& cells);
  void commit();

private:
  std::string path_;
  std::string tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

// Reads a CSV with a header row; returns the numeric rows.
std::vector<std::vector<Real>> read_csv(const std::string& path);

// Raw cells including the header, for schema-bearing sidecars.
std::vector<std::vector<std::string>> read_csv_raw(const std::string& path);

}  // namespace ph
