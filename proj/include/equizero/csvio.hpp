#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace equizero {

// Shortest round-trip decimal form (std::to_chars); the reproducibility
// contract for all CSV bodies.
std::string format_double(double x);

// Write-temp-then-rename so partially written artifacts never appear
// under their final name.
void write_text_atomic(const std::filesystem::path& path, const std::string& body);

std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_hex(const std::string& s);
std::string sha256_file_hex(const std::filesystem::path& path);

// Row-oriented CSV accumulator committed atomically on flush().
class CsvFile {
 public:
  explicit CsvFile(std::vector<std::string> columns);

  void push_row(const std::vector<std::string>& cells);
  std::string body() const { return body_; }
  void write(const std::filesystem::path& path) const;

 private:
  std::size_t n_cols_;
  std::string body_;
};

std::string csv_cell(double x);
std::string csv_cell(int x);

}  // namespace equizero
