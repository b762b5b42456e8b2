#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

namespace lagflow::harness {

/// Fixed-format CSV text: doubles with 12 significant digits, so output is a
/// pure function of the values written.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  class Row {
   public:
    Row& operator<<(double v);
    Row& operator<<(int v);
    Row& operator<<(long v);
    Row& operator<<(unsigned long v);
    Row& operator<<(unsigned long long v);
    Row& operator<<(bool v);
    Row& operator<<(const std::string& v);
    Row& operator<<(const char* v) { return *this << std::string(v); }

   private:
    friend class CsvTable;
    explicit Row(CsvTable& t) : table_(t) {}
    void cell(const std::string& s);
    CsvTable& table_;
    std::size_t cells_ = 0;
  };

  /// Starts a new row; the row must be filled to the header width before the next one.
  Row row();
  std::string str() const;
  std::size_t rows() const { return rows_; }

 private:
  void close_row();
  std::size_t width_;
  std::size_t rows_ = 0;
  std::size_t pending_ = 0;
  std::string text_;
};

std::string format_value(double v);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& p, const std::string& content);

}  // namespace lagflow::harness
