#include "lagflow/harness/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lagflow::harness {

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  if (header.empty()) throw std::invalid_argument("csv: empty header");
  for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
  text_ += "\n";
}

void CsvTable::close_row() {
  if (pending_ != 0 && pending_ != width_) throw std::logic_error("csv: row has the wrong number of cells");
  if (pending_ == width_) text_ += "\n";
  pending_ = 0;
}

CsvTable::Row CsvTable::row() {
  close_row();
  ++rows_;
  return Row(*this);
}

std::string CsvTable::str() const {
  if (pending_ != 0 && pending_ != width_) throw std::logic_error("csv: unfinished row");
  return pending_ == width_ ? text_ + "\n" : text_;
}

void CsvTable::Row::cell(const std::string& s) {
  if (table_.pending_ == table_.width_) throw std::logic_error("csv: too many cells in a row");
  if (s.find_first_of(",\"\n") != std::string::npos) throw std::invalid_argument("csv: cell needs quoting: " + s);
  table_.text_ += (table_.pending_ ? "," : "") + s;
  ++table_.pending_;
  ++cells_;
}

CsvTable::Row& CsvTable::Row::operator<<(double v) { return cell(format_value(v)), *this; }
CsvTable::Row& CsvTable::Row::operator<<(int v) { return cell(std::to_string(v)), *this; }
CsvTable::Row& CsvTable::Row::operator<<(long v) { return cell(std::to_string(v)), *this; }
CsvTable::Row& CsvTable::Row::operator<<(unsigned long v) { return cell(std::to_string(v)), *this; }
CsvTable::Row& CsvTable::Row::operator<<(unsigned long long v) { return cell(std::to_string(v)), *this; }
CsvTable::Row& CsvTable::Row::operator<<(bool v) { return cell(v ? "true" : "false"), *this; }
CsvTable::Row& CsvTable::Row::operator<<(const std::string& v) { return cell(v), *this; }

void write_file_atomic(const std::filesystem::path& p, const std::string& content) {
  const auto tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, p);
}

}  // namespace lagflow::harness
