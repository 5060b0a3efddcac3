#pragma once

// CSV tables and JSON run summaries.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace bscount::cli {

inline constexpr int kCsvSchema = 1;

/// 17 significant digits, "nan"/"inf" spelled out.
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  class Row {
   public:
    Row& add(double x);
    Row& add(long long x);
    Row& add(unsigned long long x);
    Row& add(int x) { return add(static_cast<long long>(x)); }
    Row& add(std::size_t x) { return add(static_cast<unsigned long long>(x)); }
    Row& add(bool b);
    Row& add(const std::string& s);
    Row& add(const char* s) { return add(std::string(s)); }
    const std::vector<std::string>& cells() const { return cells_; }

   private:
    std::vector<std::string> cells_;
  };

  Row& row();
  std::string render() const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> columns_;
  std::vector<Row> rows_;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Writes <dir>/<name>.csv and <dir>/<name>.summary.json; throws IoError.
void write_outputs(const std::filesystem::path& dir, const std::string& name, const CsvTable& csv,
                   const nlohmann::ordered_json& summary);

}  // namespace bscount::cli
