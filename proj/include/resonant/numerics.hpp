#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

namespace resonant::numerics {

/// Root of f on [a, b] given endpoint values of opposite sign (or zero).
/// Terminates when the bracket is narrower than xtol.
template <class F>
double find_root(F&& f, double a, double b, double fa, double fb, double xtol = 0.0) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (a > b) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  // The caller's values may come from samples that disagree in sign with the
  // continuous f near a tangency; bracket on f itself and fall back to the end
  // with the smaller residual.
  const double ga = f(a), gb = f(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if ((ga > 0.0) == (gb > 0.0)) return std::abs(ga) <= std::abs(gb) ? a : b;
  fa = ga;
  fb = gb;
  if (!(xtol > 0.0)) xtol = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
  auto stop = [xtol](double lo, double hi) { return std::abs(hi - lo) <= xtol; };
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iters);
  // Return the end of the final bracket with the smaller residual.
  double fl = f(r.first), fh = f(r.second);
  return std::abs(fl) <= std::abs(fh) ? r.first : r.second;
}

template <class F>
double find_root(F&& f, double a, double b, double xtol = 0.0) {
  return find_root(f, a, b, f(a), f(b), xtol);
}

inline double periodic_mean(std::span<const double> f) {
  double s = 0.0;
  for (double v : f) s += v;
  return f.empty() ? 0.0 : s / static_cast<double>(f.size());
}

/// Sign-split integrals of a periodic sampled function over one period,
/// divided by the period. The negative part integrates, over every cell with
/// a negative end sample, the cubic through four neighbouring samples split
/// at its real roots; the positive part is the trapezoid mean plus that.
struct SignedParts {
  double positive = 0.0;  ///< mean of f·[f > 0]
  double negative = 0.0;  ///< mean of |f|·[f < 0], reported as a magnitude
  double weighted_negative = 0.0;  ///< mean of q·|f|·[f < 0] when a weight is supplied
};

SignedParts signed_parts(std::span<const double> f, std::span<const double> weight = {},
                         double deadband_rel = 1e-12);

/// Fraction of the period where |f| exceeds threshold, on the piecewise-linear
/// interpolant of the samples.
double fraction_above(std::span<const double> f, double threshold);

/// Adaptive tanh-sinh quadrature on [a, b] split at the supplied interior points.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breaks = {}, double rel_tol = 1e-12);

/// Sign changes of a continuous function, located on a sample grid and
/// refined by bracketing. Values with |f| <= zero_tol are treated as zero
/// and do not produce crossings.
std::vector<double> sign_changes(const std::function<double(double)>& f, std::span<const double> grid,
                                 double zero_tol, double xtol);

/// Turning points of a periodic signal from its rate: times of the maximum
/// and minimum in [0, T), and the number of monotone segments per period
/// counted on an m-point grid (rates within 1e-9 of the peak rate ignored).
struct TurningPoints {
  double t_min = 0.0, t_max = 0.0;
  int segments = 0;
};
TurningPoints turning_points(const std::function<double(double)>& rate, double period, std::size_t m);

}  // namespace resonant::numerics
