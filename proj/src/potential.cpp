#include "bscount/potential.hpp"

#include "bscount/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bscount {

ShapeKind parse_shape_kind(std::string_view name) {
  if (name == "yukawa") return ShapeKind::Yukawa;
  if (name == "exponential") return ShapeKind::Exponential;
  if (name == "gaussian") return ShapeKind::Gaussian;
  if (name == "square_well") return ShapeKind::SquareWell;
  if (name == "table") return ShapeKind::Table;
  throw PreconditionError("unknown potential kind '" + std::string(name) + "'");
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Yukawa: return "yukawa";
    case ShapeKind::Exponential: return "exponential";
    case ShapeKind::Gaussian: return "gaussian";
    case ShapeKind::SquareWell: return "square_well";
    case ShapeKind::Table: return "table";
  }
  return "?";
}

Shape Shape::table(std::vector<double> r, std::vector<double> s) {
  Shape out;
  out.kind = ShapeKind::Table;
  out.table_r = std::move(r);
  out.table_s = std::move(s);
  out.range = out.table_r.empty() ? 1.0 : out.table_r.back();
  out.validate();
  return out;
}

Shape Shape::table_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential table '" + path + "'");
  std::vector<double> r, s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) {
      throw PreconditionError(path + ":" + std::to_string(lineno) + ": expected two columns");
    }
    r.push_back(a);
    s.push_back(b);
  }
  return table(std::move(r), std::move(s));
}

double Shape::operator()(double r) const {
  const double x = r / range;
  switch (kind) {
    case ShapeKind::Yukawa: return x > 0.0 ? std::exp(-x) / x : 0.0;
    case ShapeKind::Exponential: return std::exp(-x);
    case ShapeKind::Gaussian: return std::exp(-x * x);
    case ShapeKind::SquareWell: return r < range ? 1.0 : 0.0;
    case ShapeKind::Table: {
      if (r <= table_r.front()) return table_s.front();
      if (r >= table_r.back()) return 0.0;
      const auto it = std::upper_bound(table_r.begin(), table_r.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - table_r.begin());
      const double t = (r - table_r[i - 1]) / (table_r[i] - table_r[i - 1]);
      return (1.0 - t) * table_s[i - 1] + t * table_s[i];
    }
  }
  return 0.0;
}

double Shape::cell_value(double lo, double hi, double node) const {
  if (kind == ShapeKind::SquareWell) {
    if (hi <= range) return 1.0;
    if (lo >= range) return 0.0;
    return (range - lo) / (hi - lo);
  }
  return (*this)(node);
}

double Shape::effective_extent() const {
  switch (kind) {
    case ShapeKind::Yukawa:
    case ShapeKind::Exponential: return 60.0 * range;
    case ShapeKind::Gaussian: return 10.0 * range;
    case ShapeKind::SquareWell: return range;
    case ShapeKind::Table: return table_r.back();
  }
  return range;
}

std::vector<double> Shape::breakpoints() const {
  if (kind == ShapeKind::SquareWell) return {range};
  if (kind == ShapeKind::Table) return table_r;
  return {};
}

void Shape::validate() const {
  if (kind == ShapeKind::Table) {
    if (table_r.size() < 2 || table_r.size() != table_s.size()) {
      throw PreconditionError("table potential needs at least two (r, s) rows");
    }
    if (table_r.front() < 0.0) throw PreconditionError("table potential: negative radius");
    for (std::size_t i = 1; i < table_r.size(); ++i) {
      if (!(table_r[i] > table_r[i - 1])) {
        throw PreconditionError("table potential: radii must be strictly increasing");
      }
    }
    for (const double s : table_s) {
      if (!(s >= 0.0) || !std::isfinite(s)) {
        throw PreconditionError("table potential: shape values must be finite and >= 0");
      }
    }
    return;
  }
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw PreconditionError("potential range must be positive");
  }
}

PotentialSpec PotentialSpec::with_strength(double lambda) const {
  PotentialSpec out = *this;
  out.strength = lambda;
  return out;
}

double PotentialSpec::value(double r) const {
  double v = -strength * attractive(r);
  if (repulsive) v += repulsive_strength * (*repulsive)(r);
  return v;
}

double PotentialSpec::v_minus(double r) const { return std::max(-value(r), 0.0); }
double PotentialSpec::v_plus(double r) const { return std::max(value(r), 0.0); }

double PotentialSpec::cell_value(double lo, double hi, double node) const {
  double v = -strength * attractive.cell_value(lo, hi, node);
  if (repulsive) v += repulsive_strength * repulsive->cell_value(lo, hi, node);
  return v;
}

double PotentialSpec::effective_extent() const {
  double e = attractive.effective_extent();
  if (repulsive) e = std::max(e, repulsive->effective_extent());
  return e;
}

std::vector<double> PotentialSpec::breakpoints() const {
  std::vector<double> b = attractive.breakpoints();
  if (repulsive) {
    const auto rb = repulsive->breakpoints();
    b.insert(b.end(), rb.begin(), rb.end());
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

void PotentialSpec::validate() const {
  attractive.validate();
  if (!(strength >= 0.0) || !std::isfinite(strength)) {
    throw PreconditionError("potential strength must be finite and >= 0");
  }
  if (repulsive) {
    repulsive->validate();
    if (!(repulsive_strength >= 0.0)) {
      throw PreconditionError("repulsive strength must be >= 0");
    }
  }
}

}  // namespace bscount
