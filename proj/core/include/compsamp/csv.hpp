#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "compsamp/rng.hpp"

namespace compsamp {

// Doubles are written with 17 significant digits so they round-trip exactly.
std::string format_double(double value);

// Streams a CSV file with a fixed header. Fields are not quoted; callers pass plain tokens.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(long value);
  CsvWriter& cell(std::uint64_t value);
  CsvWriter& cell(int value) { return cell(static_cast<long>(value)); }
  CsvWriter& cell(const std::string& value);
  CsvWriter& cell(const char* value) { return cell(std::string(value)); }
  void end_row();

  // One row per matrix row.
  void rows(const Matrix& values);

  std::size_t columns() const { return columns_; }

 private:
  void separator();

  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column; throws std::out_of_range if absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace compsamp
