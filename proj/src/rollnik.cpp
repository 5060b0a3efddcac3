#include "bscount/rollnik.hpp"

#include "bscount/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace bscount {

namespace {

constexpr int kEllMax = 25;

double angular_factor(double r, double rp, double gamma) {
  if (gamma == 0.0) return std::log((r + rp) / std::abs(r - rp));
  const double e = 8.0 * gamma;
  return (std::pow(r + rp, e) - std::pow(std::abs(r - rp), e)) / e;
}

// Sorted cut points inside (0, rc), including the potential's jump points.
std::vector<double> cuts(const PotentialSpec& pot, double rc) {
  std::vector<double> c{0.0};
  for (const double b : pot.breakpoints())
    if (b > 0.0 && b < rc) c.push_back(b);
  c.push_back(rc);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

double integrate_segments(const std::vector<double>& pts, const std::function<double(double)>& f) {
  boost::math::quadrature::tanh_sinh<double> ts(12);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    s += ts.integrate(f, pts[i], pts[i + 1], 1e-11);
  }
  return s;
}

double rollnik_integral_to(const PotentialSpec& pot, double gamma, double rc) {
  const std::vector<double> base = cuts(pot, rc);
  auto outer = [&](double r) {
    // Below this radius the weight r²v₋ is negligible and r·v₋ may overflow.
    if (r < 1e-150) return 0.0;
    const double vr = pot.v_minus(r);
    if (vr == 0.0) return 0.0;
    // Split the inner integral at the log singularity r' = r.
    std::vector<double> pts = base;
    pts.push_back(r);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto inner = [&](double rp) {
      if (rp == r || rp < 1e-150) return 0.0;
      const double vp = pot.v_minus(rp);
      if (vp == 0.0) return 0.0;
      return rp * vp * angular_factor(r, rp, gamma);
    };
    return r * vr * integrate_segments(pts, inner);
  };
  return 8.0 * std::numbers::pi * std::numbers::pi * integrate_segments(base, outer);
}

}  // namespace

double rollnik_integral(const PotentialSpec& pot, double gamma) {
  pot.validate();
  if (!(gamma >= 0.0 && gamma < 0.125)) {
    throw PreconditionError("rollnik_integral: gamma must lie in [0, 1/8)");
  }
  if (pot.strength == 0.0) return 0.0;
  const double rc = pot.effective_extent();
  const double full = rollnik_integral_to(pot, gamma, rc);
  if (full == 0.0) return 0.0;
  const bool compact = pot.attractive.kind == ShapeKind::SquareWell ||
                       pot.attractive.kind == ShapeKind::Table;
  if (compact) return full;
  const double half = rollnik_integral_to(pot, gamma, 0.5 * rc);
  if (std::abs(full - half) > 1e-3 * std::abs(full)) {
    std::ostringstream os;
    os.precision(17);
    os << "rollnik_integral: tail contribution " << (full - half) << " exceeds 1e-3 of " << full;
    throw ConvergenceError(os.str(), 0);
  }
  return full;
}

double rollnik_norm(const PotentialSpec& pot, double gamma) {
  return std::sqrt(rollnik_integral(pot, gamma));
}

SchwingerCheck schwinger_bound_check(const PotentialSpec& pot, const RadialGrid& grid_template) {
  if (pot.strength <= 0.0) throw PreconditionError("schwinger_bound_check: attractive part is zero");
  SchwingerCheck out;
  for (int ell = 0;; ++ell) {
    RadialGrid g = grid_template;
    g.ell = ell;
    const std::size_t n = count_bound_states_radial(pot, g, 0.0);
    out.counts_per_ell.push_back(n);
    out.count_total += static_cast<std::size_t>(2 * ell + 1) * n;
    if (n == 0) break;
    if (ell >= kEllMax) {
      throw ConvergenceError("schwinger_bound_check: bound states persist at ell = 25", ell);
    }
  }
  out.bound = rollnik_integral(pot, 0.0) / (16.0 * std::numbers::pi * std::numbers::pi);
  out.holds = static_cast<double>(out.count_total) <= out.bound;
  return out;
}

}  // namespace bscount
