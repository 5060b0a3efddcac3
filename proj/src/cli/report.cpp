#include "bscount/cli/report.hpp"

#include "bscount/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace bscount::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + p.string() + "'");
  out << body;
  out.flush();
  if (!out) throw IoError("write failed for '" + p.string() + "'");
}

}  // namespace

CsvTable::Row& CsvTable::Row::add(double x) {
  cells_.push_back(format_double(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(long long x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(unsigned long long x) {
  cells_.push_back(std::to_string(x));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(bool b) {
  cells_.push_back(b ? "true" : "false");
  return *this;
}
CsvTable::Row& CsvTable::Row::add(const std::string& s) {
  cells_.push_back(quote_csv(s));
  return *this;
}

CsvTable::Row& CsvTable::row() {
  rows_.emplace_back();
  return rows_.back();
}

std::string CsvTable::render() const {
  std::string out = "# schema=" + std::to_string(kCsvSchema) + "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
  out += '\n';
  for (const Row& r : rows_) {
    const auto& c = r.cells();
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? "," : "") + c[i];
    out += '\n';
  }
  return out;
}

void write_outputs(const std::filesystem::path& dir, const std::string& name, const CsvTable& csv,
                   const nlohmann::ordered_json& summary) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_file(dir / (name + ".csv"), csv.render());
  write_file(dir / (name + ".summary.json"), summary.dump(2) + "\n");
}

}  // namespace bscount::cli
