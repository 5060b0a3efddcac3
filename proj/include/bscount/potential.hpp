#pragma once

// Radial pair potentials v(r) = −λ·shape(r) [+ λ_rep·shape_rep(r)] in units H = −Δ + v.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bscount {

enum class ShapeKind { Yukawa, Exponential, Gaussian, SquareWell, Table };

ShapeKind parse_shape_kind(std::string_view name);
std::string to_string(ShapeKind kind);

/// Nonnegative unit shape with range a:
///   yukawa       e^{−r/a}/(r/a)
///   exponential  e^{−r/a}
///   gaussian     e^{−(r/a)²}
///   square_well  1 for r < a
///   table        linear interpolation of (r, s) samples, zero past the last sample
struct Shape {
  ShapeKind kind = ShapeKind::SquareWell;
  double range = 1.0;
  std::vector<double> table_r;
  std::vector<double> table_s;

  static Shape table(std::vector<double> r, std::vector<double> s);
  /// Two whitespace-separated columns (r, s); `#` starts a comment.
  static Shape table_from_file(const std::string& path);

  double operator()(double r) const;
  /// Mean over [lo, hi]; exact for the square well, the value at `node` otherwise.
  double cell_value(double lo, double hi, double node) const;
  /// Radius beyond which the shape is negligible (exactly zero for compact shapes).
  double effective_extent() const;
  /// Jump points of the shape (square-well edge, table knots inside the support).
  std::vector<double> breakpoints() const;
  void validate() const;
};

struct PotentialSpec {
  Shape attractive;
  double strength = 0.0;
  std::optional<Shape> repulsive;
  double repulsive_strength = 0.0;

  PotentialSpec with_strength(double lambda) const;
  double value(double r) const;
  double v_minus(double r) const;
  double v_plus(double r) const;
  double cell_value(double lo, double hi, double node) const;
  double effective_extent() const;
  std::vector<double> breakpoints() const;
  void validate() const;
};

}  // namespace bscount
