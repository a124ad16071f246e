#include "resonant/numerics.hpp"

#include <algorithm>
#include <array>

#include <boost/math/quadrature/tanh_sinh.hpp>

namespace resonant::numerics {
namespace {

struct Cubic {
  double c0, c1, c2, c3;
  double operator()(double s) const { return c0 + s * (c1 + s * (c2 + s * c3)); }
  double antideriv(double s) const { return s * (c0 + s * (c1 / 2 + s * (c2 / 3 + s * c3 / 4))); }
};

// Cubic through samples at s = -1, 0, 1, 2.
Cubic lagrange4(double fm, double f0, double f1, double f2) {
  return {f0, -fm / 3 - f0 / 2 + f1 - f2 / 6, fm / 2 - f0 + f1 / 2, -fm / 6 + f0 / 2 - f1 / 2 + f2 / 6};
}

// Points in (0,1) where the cubic changes sign, sorted.
int cubic_roots01(const Cubic& p, std::array<double, 3>& out) {
  std::array<double, 4> knots{0.0, 0.0, 0.0, 0.0};
  int nk = 0;
  knots[nk++] = 0.0;
  // stationary points split [0,1] into monotone pieces
  const double a = 3 * p.c3, b = 2 * p.c2, c = p.c1;
  std::array<double, 2> crit{};
  int nc = 0;
  if (std::abs(a) > 1e-300) {
    double disc = b * b - 4 * a * c;
    if (disc > 0) {
      double sq = std::sqrt(disc);
      double q = -0.5 * (b + std::copysign(sq, b));
      double r1 = q / a, r2 = (q != 0.0) ? c / q : r1;
      crit[nc++] = std::min(r1, r2);
      crit[nc++] = std::max(r1, r2);
    }
  } else if (std::abs(b) > 1e-300) {
    crit[nc++] = -c / b;
  }
  for (int i = 0; i < nc; ++i)
    if (crit[i] > 0.0 && crit[i] < 1.0) knots[nk++] = crit[i];
  std::array<double, 4> k2{};
  std::copy(knots.begin(), knots.begin() + nk, k2.begin());
  std::sort(k2.begin(), k2.begin() + nk);
  k2[nk++] = 1.0;

  int nr = 0;
  for (int i = 0; i + 1 < nk; ++i) {
    double lo = k2[i], hi = k2[i + 1];
    double flo = p(lo), fhi = p(hi);
    if (flo == 0.0 || fhi == 0.0 || (flo < 0) == (fhi < 0)) continue;
    for (int it = 0; it < 64 && hi - lo > 1e-16; ++it) {
      double mid = 0.5 * (lo + hi);
      double fm = p(mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    out[nr++] = 0.5 * (lo + hi);
  }
  return nr;
}

}  // namespace

SignedParts signed_parts(std::span<const double> f, std::span<const double> weight, double deadband_rel) {
  const std::size_t n = f.size();
  SignedParts out;
  if (n < 4) return out;
  const bool weighted = !weight.empty();

  double peak = 0.0;
  for (double v : f) peak = std::max(peak, std::abs(v));
  const double db = deadband_rel * peak;
  std::vector<double> g(f.begin(), f.end());
  for (double& v : g)
    if (std::abs(v) <= db) v = 0.0;
  std::vector<double> gw;
  if (weighted) {
    gw.resize(n);
    for (std::size_t i = 0; i < n; ++i) gw[i] = g[i] * weight[i];
  }

  auto at = [n](const std::vector<double>& v, std::ptrdiff_t i) {
    auto m = static_cast<std::ptrdiff_t>(n);
    return v[static_cast<std::size_t>(((i % m) + m) % m)];
  };

  double neg = 0.0, wneg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto ii = static_cast<std::ptrdiff_t>(i);
    const double f0 = at(g, ii), f1 = at(g, ii + 1);
    // Cells whose end samples are both non-negative count as positive even
    // if the cubic dips below zero (overshoot next to a kink or jump).
    if (f0 >= 0.0 && f1 >= 0.0) continue;
    Cubic p = lagrange4(at(g, ii - 1), f0, f1, at(g, ii + 2));
    Cubic pw{};
    if (weighted) pw = lagrange4(at(gw, ii - 1), at(gw, ii), at(gw, ii + 1), at(gw, ii + 2));
    if (f0 <= 0.0 && f1 <= 0.0) {
      neg -= p.antideriv(1.0);
      if (weighted) wneg -= pw.antideriv(1.0);
      continue;
    }
    std::array<double, 3> roots{};
    int nr = cubic_roots01(p, roots);
    double lo = 0.0;
    for (int k = 0; k <= nr; ++k) {
      double hi = (k < nr) ? roots[k] : 1.0;
      if (hi > lo && p(0.5 * (lo + hi)) < 0) {
        neg -= p.antideriv(hi) - p.antideriv(lo);
        if (weighted) wneg -= pw.antideriv(hi) - pw.antideriv(lo);
      }
      lo = hi;
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  out.negative = neg * inv;
  out.weighted_negative = wneg * inv;
  // trapezoid mean plus the negative part, so positive - negative is the
  // spectrally accurate periodic mean
  double mean = 0.0;
  for (double v : f) mean += v;
  out.positive = mean * inv + out.negative;
  return out;
}

double fraction_above(std::span<const double> f, double threshold) {
  const std::size_t n = f.size();
  if (n == 0) return 0.0;
  auto measure_gt = [](double a, double b, double th) {
    // measure of {s in [0,1] : a + (b-a) s > th}
    if (a == b) return a > th ? 1.0 : 0.0;
    double s = (th - a) / (b - a);
    if (b > a) return std::clamp(1.0 - s, 0.0, 1.0);
    return std::clamp(s, 0.0, 1.0);
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = f[i], b = f[(i + 1) % n];
    total += measure_gt(a, b, threshold) + measure_gt(-a, -b, threshold);
  }
  return total / static_cast<double>(n);
}

double integrate(const std::function<double(double)>& f, double a, double b, std::span<const double> breaks,
                 double rel_tol) {
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double lo = pts[i], hi = pts[i + 1];
    if (hi - lo <= 1e-15 * std::max(1.0, std::abs(hi))) continue;
    sum += ts.integrate([&f](double x) { return f(x); }, lo, hi, rel_tol);
  }
  return sum;
}

std::vector<double> sign_changes(const std::function<double(double)>& f, std::span<const double> grid,
                                 double zero_tol, double xtol) {
  std::vector<double> roots;
  int last_sign = 0;
  std::size_t last_idx = 0;
  double last_val = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double v = f(grid[j]);
    int s = (std::abs(v) <= zero_tol) ? 0 : (v > 0 ? 1 : -1);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) {
      if (last_idx + 1 == j)
        roots.push_back(find_root(f, grid[last_idx], grid[j], last_val, v, xtol));
      else
        roots.push_back(0.5 * (grid[last_idx + 1] + grid[j - 1]));
    }
    last_sign = s;
    last_idx = j;
    last_val = v;
  }
  return roots;
}

TurningPoints turning_points(const std::function<double(double)>& rate, double T, std::size_t m) {
  std::vector<double> v(m);
  double vmax = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    v[i] = rate(T * static_cast<double>(i) / static_cast<double>(m));
    vmax = std::max(vmax, std::abs(v[i]));
  }
  TurningPoints tp;
  if (vmax == 0.0) return tp;
  const double db = 1e-9 * vmax;
  // start from a significant sample so the wrap-around is handled once
  std::size_t start = 0;
  while (std::abs(v[start]) <= db) ++start;
  std::size_t last = start;
  int last_sign = v[start] > 0 ? 1 : -1;
  for (std::size_t k = 1; k <= m; ++k) {
    std::size_t i = (start + k) % m;
    if (std::abs(v[i]) <= db) continue;
    int sg = v[i] > 0 ? 1 : -1;
    if (sg != last_sign) {
      ++tp.segments;
      double ta = T * static_cast<double>(last) / static_cast<double>(m);
      double tb = T * static_cast<double>(i) / static_cast<double>(m);
      if (tb < ta) tb += T;
      // across a dead-banded plateau the extremum is flat; take its centre
      double r = ((last + 1) % m == i) ? find_root(rate, ta, tb, v[last], v[i])
                                       : 0.5 * (ta + T / static_cast<double>(m) + tb - T / static_cast<double>(m));
      r = std::fmod(r, T);
      if (r < 0) r += T;
      if (r < 1e-12 * T || r > T * (1.0 - 1e-12)) r = 0.0;
      (last_sign > 0 ? tp.t_max : tp.t_min) = r;
    }
    last_sign = sg;
    last = i;
  }
  return tp;
}

}  // namespace resonant::numerics
