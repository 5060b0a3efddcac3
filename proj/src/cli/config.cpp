#include "bscount/cli/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bscount::cli {

ParseError::ParseError(const std::string& source, int line, int column, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                         msg),
      line_(line),
      column_(column) {}

std::optional<std::uint64_t> parse_u64(std::string_view text) {
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    base = 16;
    text.remove_prefix(2);
  }
  if (text.empty()) return std::nullopt;
  std::uint64_t v = 0;
  for (const char ch : text) {
    int d;
    if (ch >= '0' && ch <= '9') d = ch - '0';
    else if (base == 16 && ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
    else if (base == 16 && ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
    else return std::nullopt;
    if (v > (UINT64_MAX - static_cast<std::uint64_t>(d)) / static_cast<std::uint64_t>(base)) {
      return std::nullopt;
    }
    v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
  }
  return v;
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, int lineno, const std::string& source)
      : s_(line), lineno_(lineno), source_(source) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source_, lineno_, static_cast<int>(pos_) + 1, msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  bool at_end_or_comment() {
    skip_ws();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  std::size_t pos() const { return pos_; }

  std::string key() {
    skip_ws();
    const std::size_t start = pos_;
    auto ok_first = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ok_rest = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    };
    if (pos_ >= s_.size() || !ok_first(s_[pos_])) fail("expected a key");
    while (pos_ < s_.size() && ok_rest(s_[pos_])) ++pos_;
    std::string k(s_.substr(start, pos_ - start));
    if (k.back() == '.' || k.find("..") != std::string::npos) {
      pos_ = start;
      fail("malformed dotted key '" + k + "'");
    }
    return k;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  ConfigValue value() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing value");
    const std::size_t start = pos_;
    ConfigValue v;
    const char c = s_[pos_];
    if (c == '"') {
      v.value = string_literal();
    } else if (c == '[') {
      v.value = array();
    } else if (word("true")) {
      v.value = true;
    } else if (word("false")) {
      v.value = false;
    } else {
      v.value = number();
    }
    v.raw = std::string(s_.substr(start, pos_ - start));
    return v;
  }

 private:
  bool word(std::string_view w) {
    if (s_.substr(pos_, w.size()) != w) return false;
    const std::size_t end = pos_ + w.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) {
      return false;
    }
    pos_ = end;
    return true;
  }

  std::string string_literal() {
    ++pos_;  // opening quote
    std::string out;
    while (true) {
      if (pos_ >= s_.size()) fail("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= s_.size()) fail("unterminated escape");
        const char e = s_[pos_++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: --pos_; fail(std::string("unknown escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
    return out;
  }

  double number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '#') {
      ++pos_;
    }
    const std::string tok(s_.substr(start, pos_ - start));
    if (tok.empty()) {
      pos_ = start;
      fail("expected a value");
    }
    if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
      if (const auto u = parse_u64(tok)) return static_cast<double>(*u);
      pos_ = start;
      fail("malformed hexadecimal integer '" + tok + "'");
    }
    char* end = nullptr;
    const double d = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(d)) {
      pos_ = start;
      fail("malformed number '" + tok + "'");
    }
    return d;
  }

  std::vector<double> array() {
    ++pos_;  // '['
    std::vector<double> out;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return out;
    }
    while (true) {
      skip_ws();
      out.push_back(number());
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return out;
      }
      fail("expected ',' or ']' in array");
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int lineno_;
  const std::string& source_;
};

}  // namespace

Config parse_config(std::string_view text, const std::string& source) {
  Config cfg(source);
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    ++lineno;
    LineParser p(line, lineno, source);
    if (!p.at_end_or_comment()) {
      const int col = static_cast<int>(p.pos()) + 1;
      const std::string key = p.key();
      p.expect('=');
      ConfigValue v = p.value();
      if (!p.at_end_or_comment()) p.fail("unexpected trailing characters");
      if (cfg.has(key)) throw ParseError(source, lineno, col, "duplicate key '" + key + "'");
      v.line = lineno;
      v.column = col;
      cfg.set(key, std::move(v));
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void Config::type_error(const std::string& key, const char* expected) const {
  const ConfigValue& v = entries_.at(key);
  throw ParseError(source_, v.line, v.column, "key '" + key + "' expects " + expected);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (const auto* s = std::get_if<std::string>(&it->second.value)) return *s;
  type_error(key, "a string");
}

double Config::get_number(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (const auto* d = std::get_if<double>(&it->second.value)) return *d;
  type_error(key, "a number");
}

long Config::get_int(const std::string& key, long fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const auto* d = std::get_if<double>(&it->second.value);
  if (!d || *d != std::floor(*d) || std::abs(*d) > 1e15) type_error(key, "an integer");
  return static_cast<long>(*d);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (const auto* b = std::get_if<bool>(&it->second.value)) return *b;
  type_error(key, "a boolean");
}

std::vector<double> Config::get_array(const std::string& key,
                                      const std::vector<double>& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (const auto* a = std::get_if<std::vector<double>>(&it->second.value)) return *a;
  type_error(key, "a numeric array");
}

std::optional<std::uint64_t> Config::get_u64(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  if (it->second.type() != ValueType::Number) type_error(key, "an unsigned 64-bit integer");
  if (const auto u = parse_u64(it->second.raw)) return u;
  type_error(key, "an unsigned 64-bit integer");
}

namespace {

struct KeySpec {
  const char* key;
  ValueType type;
};

constexpr KeySpec kSchema[] = {
    {"command", ValueType::String},
    {"seed", ValueType::Number},
    {"output.name", ValueType::String},
    {"verify.bs_equality", ValueType::Number},
    {"verify.bs_inequality", ValueType::Number},
    {"verify.bs_bounded", ValueType::Number},
    {"verify.iterbs", ValueType::Number},
    {"verify.hs_bound", ValueType::Number},
    {"verify.rank_one", ValueType::Number},
    {"verify.mu_monotone", ValueType::Number},
    {"twobody.mode", ValueType::String},
    {"potential.kind", ValueType::String},
    {"potential.strength", ValueType::Number},
    {"potential.range", ValueType::Number},
    {"potential.table", ValueType::String},
    {"potential.repulsive.kind", ValueType::String},
    {"potential.repulsive.strength", ValueType::Number},
    {"potential.repulsive.range", ValueType::Number},
    {"potential.repulsive.table", ValueType::String},
    {"grid.ell", ValueType::Number},
    {"grid.r_max", ValueType::Number},
    {"grid.n", ValueType::Number},
    {"grid.scheme", ValueType::String},
    {"grid.r0", ValueType::Number},
    {"scan.strengths", ValueType::NumberArray},
    {"scan.epsilons", ValueType::NumberArray},
    {"scan.ells", ValueType::NumberArray},
    {"scan.tol", ValueType::Number},
    {"scan.fit_lo", ValueType::Number},
    {"scan.fit_hi", ValueType::Number},
    {"scan.agreement", ValueType::Number},
    {"kernel.gammas", ValueType::NumberArray},
    {"kernel.epsilons", ValueType::NumberArray},
    {"kernel.radii", ValueType::NumberArray},
    {"iterbs.dim", ValueType::Number},
    {"iterbs.steps", ValueType::Number},
    {"model.beta", ValueType::Number},
    {"model.lambda_ratio", ValueType::Number},
    {"model.p_min", ValueType::Number},
    {"model.p_max", ValueType::Number},
    {"model.n_p", ValueType::Number},
    {"model.n_x", ValueType::Number},
    {"model.map", ValueType::String},
    {"model.map_c", ValueType::Number},
    {"model.masses", ValueType::NumberArray},
    {"efimov.e_floor", ValueType::Number},
    {"efimov.cutoff_check", ValueType::Bool},
};

const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::String: return "a string";
    case ValueType::Number: return "a number";
    case ValueType::Bool: return "a boolean";
    case ValueType::NumberArray: return "a numeric array";
  }
  return "?";
}

}  // namespace

void validate_schema(const Config& cfg) {
  for (const auto& [key, v] : cfg.entries()) {
    const KeySpec* spec = nullptr;
    for (const KeySpec& k : kSchema)
      if (key == k.key) spec = &k;
    if (!spec) throw ParseError(cfg.source(), v.line, v.column, "unknown key '" + key + "'");
    if (v.type() != spec->type) {
      throw ParseError(cfg.source(), v.line, v.column,
                       "key '" + key + "' expects " + type_name(spec->type));
    }
  }
  if (!cfg.has("command")) throw ParseError(cfg.source(), 1, 1, "missing required key 'command'");
}

}  // namespace bscount::cli
