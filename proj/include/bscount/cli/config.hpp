#pragma once

// Flat dotted-key configuration documents:
//
//   # comment
//   command = "twobody"
//   seed = 0xB5C0
//   potential.kind = "square_well"
//   scan.epsilons = [1e-6, 1e-5, 1e-4]
//   efimov.cutoff_check = true
//
// Values are strings, numbers, booleans or single-line numeric arrays.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bscount::cli {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& msg);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { String, Number, Bool, NumberArray };

struct ConfigValue {
  std::variant<std::string, double, bool, std::vector<double>> value;
  std::string raw;  // source text of the value
  int line = 0;
  int column = 0;   // column of the key

  ValueType type() const { return static_cast<ValueType>(value.index()); }
};

class Config {
 public:
  Config() = default;
  explicit Config(std::string source) : source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, ConfigValue>& entries() const { return entries_; }
  const std::string& source() const { return source_; }
  void set(const std::string& key, ConfigValue v) { entries_[key] = std::move(v); }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_number(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_array(const std::string& key, const std::vector<double>& fallback) const;
  std::optional<std::uint64_t> get_u64(const std::string& key) const;

 private:
  [[noreturn]] void type_error(const std::string& key, const char* expected) const;
  std::string source_;
  std::map<std::string, ConfigValue> entries_;
};

Config parse_config(std::string_view text, const std::string& source = "<config>");
Config load_config(const std::string& path);

/// Parses a decimal or 0x-prefixed hexadecimal 64-bit unsigned integer.
std::optional<std::uint64_t> parse_u64(std::string_view text);

/// Rejects keys outside the documented schema and values of the wrong type.
void validate_schema(const Config& cfg);

}  // namespace bscount::cli
