#include "plasmoheat/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

namespace ph {

std::string format_real(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::string path, const std::vector<std::string>& header)
    : path_(std::move(path)), tmp_path_(path_ + ".tmp") {
  out_.open(tmp_path_, std::ios::trunc);
  if (!out_) throw std::runtime_error("cannot open " + tmp_path_ + " for writing");
  raw_row(header);
}

CsvWriter::~CsvWriter() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_path_, ec);
  }
}

void CsvWriter::row(const std::vector<Real>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (Real v : values) cells.push_back(format_real(v));
  raw_row(cells);
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::commit() {
  out_.close();
  std::filesystem::rename(tmp_path_, path_);
  committed_ = true;
}

std::vector<std::vector<std::string>> read_csv_raw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::vector<std::vector<Real>> read_csv(const std::string& path) {
  auto raw = read_csv_raw(path);
  std::vector<std::vector<Real>> rows;
  bool first = true;
  for (const auto& cells : raw) {
    if (first) {  // header row
      first = false;
      continue;
    }
    std::vector<Real> vals;
    vals.reserve(cells.size());
    for (const auto& c : cells) vals.push_back(std::stod(c));
    rows.push_back(std::move(vals));
  }
  return rows;
}

}  // namespace ph
