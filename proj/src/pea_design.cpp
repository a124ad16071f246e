#include "resonant/pea_design.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "resonant/interp.hpp"
#include "resonant/numerics.hpp"
#include "resonant/power.hpp"

namespace resonant {

std::string to_string(Side s) { return s == Side::upper ? "upper" : "lower"; }

Side side_from_string(const std::string& s) {
  if (s == "upper") return Side::upper;
  if (s == "lower") return Side::lower;
  throw std::invalid_argument("side must be 'upper' or 'lower', got '" + s + "'");
}

namespace {

double half_range(const PeaLoop& loop) { return 0.5 * (loop.x2() - loop.x1()); }

double peak_load(const PeaLoop& loop) {
  double p = 0.0;
  for (std::size_t j = 0; j < loop.x().size(); ++j)
    p = std::max({p, std::abs(loop.g_plus()[j]), std::abs(loop.g_minus()[j])});
  return p;
}

/// Stiffness scale for the realizability proxy.
double typical_stiffness(const PeaLoop& loop) {
  double k = peak_load(loop) / half_range(loop);
  if (loop.origin()) k = std::max(k, loop.origin()->model.m * loop.origin()->omega * loop.origin()->omega);
  return k;
}

bool branch_end_realizable(const PeaLoop& loop, Branch b, bool at_min, bool at_max) {
  const double limit = 1e6 * typical_stiffness(loop);
  if (at_min && !(loop.end_slope(b, false) <= limit)) return false;
  if (at_max && !(loop.end_slope(b, true) <= limit)) return false;
  return true;
}

void finish(ElasticProfile& p, const PeaLoop& loop) {
  p.equilibria = equilibria(p);
  p.bound = check_elastic_bound(p, loop);
}

double smoothstep(double u) { return u * u * (3.0 - 2.0 * u); }
double smoothstep_prime(double u) { return 6.0 * u * (1.0 - u); }

}  // namespace

double default_bound_tol(const PeaLoop& loop) { return 1e-9 * loop.max_arc(); }

BoundReport check_elastic_bound(const ElasticProfile& fs, const PeaLoop& loop, double tol) {
  BoundReport r;
  r.tol = tol < 0.0 ? default_bound_tol(loop) : tol;
  r.max_violation = -std::numeric_limits<double>::infinity();
  auto visit = [&](double x, double gp, double gm) {
    const double s = fs(x);
    const double v = std::max(-s - gp, gm + s);
    if (!(v <= r.max_violation)) {  // also catches NaN
      r.max_violation = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
      r.worst = x;
    }
    ++r.points;
  };
  const auto& xs = loop.x();
  const std::size_t n = xs.size();
  std::vector<double> over(n), under(n);
  for (std::size_t j = 0; j < n; ++j) {
    visit(xs[j], loop.g_plus()[j], loop.g_minus()[j]);
    over[j] = -fs(xs[j]) - loop.g_plus()[j];
    under[j] = loop.g_minus()[j] + fs(xs[j]);
  }
  for (double x : fs.breakpoints())
    if (x > loop.x1() && x < loop.x2()) visit(x, loop.g_plus_at(x), loop.g_minus_at(x));

  // A tangency between grid nodes (or against a loop tip) can hide a
  // violation of order h^2, so the largest local maxima of each margin,
  // end nodes included, are polished by Brent's method.
  auto polish = [&](const std::vector<double>& v, bool upper) {
    std::vector<std::size_t> peaks;
    for (std::size_t j = 0; j < n; ++j)
      if ((j == 0 || v[j] >= v[j - 1]) && (j + 1 == n || v[j] >= v[j + 1])) peaks.push_back(j);
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    if (peaks.size() > 8) peaks.resize(8);
    for (std::size_t j : peaks) {
      auto neg = [&](double x) { return upper ? fs(x) + loop.g_plus_at(x) : -(loop.g_minus_at(x) + fs(x)); };
      const double x = boost::math::tools::brent_find_minima(neg, xs[j == 0 ? 0 : j - 1], xs[std::min(j + 1, n - 1)], 40).first;
      visit(x, loop.g_plus_at(x), loop.g_minus_at(x));
    }
  };
  polish(over, true);
  polish(under, false);
  r.optimal = r.max_violation <= r.tol;
  std::ostringstream os;
  if (r.optimal) {
    os << "-F_s lies within [G-, G+] at all " << r.points << " points";
  } else {
    const double s = fs(r.worst);
    const bool above = -s > loop.g_plus_at(r.worst);
    os << "-F_s " << (above ? "exceeds G+" : "falls below G-") << " by " << r.max_violation << " at x = " << r.worst;
  }
  r.detail = os.str();
  return r;
}

ElasticProfile linear_profile(const PeaLoop& loop, double k) {
  ElasticProfile p = polynomial_profile({0.0, k}, loop.x1(), loop.x2(), "linear");
  p.parameters = {{"k", k}};
  finish(p, loop);
  return p;
}

ElasticProfile polynomial_family(const PeaLoop& loop, int degree, double blend) {
  if (degree != 3 && degree != 5) throw std::invalid_argument("polynomial family: degree must be 3 or 5");
  if (!(blend >= 0.0 && blend <= 1.0)) throw std::invalid_argument("polynomial family: blend must lie in [0, 1]");
  if (!loop.origin() || loop.origin()->kind != WaveformKind::harmonic)
    throw std::invalid_argument("polynomial family: needs a loop built from a dynamics model on harmonic kinematics");
  const auto& o = *loop.origin();
  const double k = o.model.m * o.omega * o.omega;
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c[1] = (1.0 - blend) * k;
  c[static_cast<std::size_t>(degree)] = blend * k / std::pow(o.amplitude, degree - 1);
  ElasticProfile p = polynomial_profile(std::move(c), loop.x1(), loop.x2(), degree == 3 ? "cubic-blend" : "quintic-blend");
  p.parameters = {{"degree", degree}, {degree == 3 ? "alpha" : "beta", blend}, {"k", k}};
  finish(p, loop);
  return p;
}

BlendLimit max_admissible_blend(const PeaLoop& loop, int degree) {
  auto passes = [&](double a) { return check_elastic_bound(polynomial_family(loop, degree, a), loop).optimal; };
  BlendLimit r;
  constexpr int probes = 21;
  std::vector<bool> ok(probes);
  for (int i = 0; i < probes; ++i) ok[static_cast<std::size_t>(i)] = passes(i / double(probes - 1));
  auto first_fail = std::find(ok.begin(), ok.end(), false);
  r.monotone = std::find(first_fail, ok.end(), true) == ok.end();
  if (!ok.front()) {
    r.blend = 0.0;
    r.detail = "the linear member already violates the elastic bound";
    return r;
  }
  if (first_fail == ok.end()) {
    r.blend = 1.0;
    r.detail = "every blend in [0, 1] passes";
    return r;
  }
  const auto i = first_fail - ok.begin();
  double lo = static_cast<double>(i - 1) / (probes - 1), hi = static_cast<double>(i) / (probes - 1);
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  r.blend = lo;
  std::ostringstream os;
  os << "bisection between passing " << lo << " and failing " << hi;
  if (!r.monotone) os << "; passing blends are not a single interval on the probe grid";
  r.detail = os.str();
  return r;
}

CriticalDisplacements critical_displacements(const PeaLoop& loop) {
  CriticalDisplacements r;
  const double xtol = 1e-12 * half_range(loop);
  const double ztol = 1e-12 * peak_load(loop);
  auto closest_zero = [&](Branch b) -> std::optional<double> {
    auto roots = numerics::sign_changes([&](double x) { return loop.g(b, x); }, loop.x(), ztol, xtol);
    if (roots.empty()) return std::nullopt;
    return *std::min_element(roots.begin(), roots.end(),
                             [](double a, double c) { return std::abs(a) < std::abs(c); });
  };
  r.l_plus = closest_zero(Branch::upper);
  r.l_minus = closest_zero(Branch::lower);
  std::ostringstream os;
  if (!r.l_plus) os << "G+ has no zero on the loop range; ";
  if (!r.l_minus) os << "G- has no zero on the loop range; ";
  if (r.l_plus && r.l_minus) r.delta_max = std::max(0.0, std::min(*r.l_plus, -*r.l_minus));
  if (r.delta_max == 0.0) os << "freeplay range degenerates to delta = 0";
  r.detail = os.str();
  return r;
}

ElasticProfile freeplay(const PeaLoop& loop, double k, double delta) {
  if (!(k > 0.0)) throw std::invalid_argument("freeplay: k must be positive");
  if (!(delta >= 0.0)) throw std::invalid_argument("freeplay: delta must be non-negative");
  if (!(delta < loop.x2() && -delta > loop.x1())) throw std::invalid_argument("freeplay: dead band exceeds the loop range");
  auto value = [k, delta](double x) { return x > delta ? k * (x - delta) : (x < -delta ? k * (x + delta) : 0.0); };
  auto slope = [k, delta](double x) { return std::abs(x) > delta ? k : 0.0; };
  std::vector<double> breaks;
  if (delta > 0.0) breaks = {-delta, delta};
  ElasticProfile p(ElasticProfile::Representation::piecewise_linear, "freeplay", loop.x1(), loop.x2(), value, slope,
                   breaks);
  const auto cd = critical_displacements(loop);
  p.parameters = {{"k", k}, {"delta", delta}, {"delta_max", cd.delta_max}};
  if (cd.l_plus) p.parameters["l_plus"] = *cd.l_plus;
  if (cd.l_minus) p.parameters["l_minus"] = *cd.l_minus;
  finish(p, loop);
  return p;
}

double freeplay_stiffness(const PeaLoop& loop, double delta) {
  if (!(delta < loop.x2())) throw std::invalid_argument("freeplay: dead band exceeds the loop range");
  return -loop.g_plus_at(loop.x2()) / (loop.x2() - delta);
}

ElasticProfile bistable_family(const PeaLoop& loop, double delta, double w) {
  const double xh = half_range(loop);
  const double rtol = 1e-8 * xh;
  if (!(delta > 0.0) || delta > loop.x2() + rtol)
    throw std::invalid_argument("bistable family: delta must lie in (0, x2]");
  if (w < 0.0) w = 0.02 * xh;
  const auto cd = critical_displacements(loop);
  const bool linear = delta >= loop.x2() - rtol;

  const double b = linear ? loop.x2() : delta;
  const double a = linear ? loop.x1() : std::max(-delta, loop.x1());
  const double yl = -loop.g_minus_at(a), yr = -loop.g_plus_at(b);
  const double chord_slope = (yr - yl) / (b - a);
  if (linear) w = 0.0;
  w = std::min(w, 0.25 * (b - a));
  const double wr = b - 2.0 * w, wl = a + 2.0 * w;  // inner ends of the blend windows

  // The loop is held through a shared pointer so the profile may outlive it.
  auto L = std::make_shared<const PeaLoop>(loop);
  auto value = [=](double x) {
    if (x >= b) return -L->g_plus_at(x);
    if (x <= a) return -L->g_minus_at(x);
    const double c = yl + chord_slope * (x - a);
    if (w > 0.0 && x > wr) return c + smoothstep((x - wr) / (2.0 * w)) * (-L->g_plus_at(x) - c);
    if (w > 0.0 && x < wl) return c + smoothstep((wl - x) / (2.0 * w)) * (-L->g_minus_at(x) - c);
    return c;
  };
  auto slope = [=](double x) {
    if (x >= b) return -L->slope(Branch::upper, x);
    if (x <= a) return -L->slope(Branch::lower, x);
    const double c = yl + chord_slope * (x - a);
    if (w > 0.0 && x > wr) {
      const double u = (x - wr) / (2.0 * w), o = -L->g_plus_at(x), op = -L->slope(Branch::upper, x);
      return chord_slope + smoothstep_prime(u) / (2.0 * w) * (o - c) + smoothstep(u) * (op - chord_slope);
    }
    if (w > 0.0 && x < wl) {
      const double u = (wl - x) / (2.0 * w), o = -L->g_minus_at(x), op = -L->slope(Branch::lower, x);
      return chord_slope - smoothstep_prime(u) / (2.0 * w) * (o - c) + smoothstep(u) * (op - chord_slope);
    }
    return chord_slope;
  };
  std::vector<double> breaks;
  if (!linear) breaks = {a, b};
  if (w > 0.0) {
    breaks.push_back(wl);
    breaks.push_back(wr);
  }
  std::sort(breaks.begin(), breaks.end());
  ElasticProfile p(w > 0.0 ? ElasticProfile::Representation::smoothed_piecewise
                           : ElasticProfile::Representation::piecewise_linear,
                   "bistable", loop.x1(), loop.x2(), value, slope, breaks);

  if (linear) {
    p.regime = "linear";
  } else if (cd.l_plus && std::abs(delta - *cd.l_plus) <= rtol) {
    p.regime = "freeplay strain-hardening";
  } else if (cd.l_plus && delta < *cd.l_plus) {
    p.regime = "bistable";
  } else {
    p.regime = "strain hardening";
  }
  p.parameters = {{"delta", delta}, {"w", w}};
  if (cd.l_plus) p.parameters["l_plus"] = *cd.l_plus;
  p.realizable = branch_end_realizable(loop, Branch::lower, !linear, false) &&
                 branch_end_realizable(loop, Branch::upper, false, !linear);
  finish(p, loop);
  return p;
}

ElasticProfile one_way_drive(const PeaLoop& loop, Side side) {
  const Branch b = side == Side::upper ? Branch::upper : Branch::lower;
  auto L = std::make_shared<const PeaLoop>(loop);
  ElasticProfile p(
      ElasticProfile::Representation::tabulated, "one-way-" + to_string(side), loop.x1(), loop.x2(),
      [L, b](double x) { return -L->g(b, x); }, [L, b](double x) { return -L->slope(b, x); });
  p.parameters = {{"side", to_string(side)}};
  p.realizable = branch_end_realizable(loop, b, true, true);
  finish(p, loop);
  return p;
}

std::vector<Equilibrium> equilibria(const ElasticProfile& fs) {
  constexpr std::size_t n = 4097;
  const double x1 = fs.x1(), x2 = fs.x2();
  std::vector<double> xs(n), f(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x1 + (x2 - x1) * static_cast<double>(i) / static_cast<double>(n - 1);
    f[i] = fs(xs[i]);
    peak = std::max(peak, std::abs(f[i]));
  }
  std::vector<Equilibrium> out;
  if (peak == 0.0) {
    out.push_back({x1, x2, Stability::marginal});
    return out;
  }
  const double ztol = 1e-12 * peak, xtol = 1e-13 * (x2 - x1);
  auto is_zero = [&](double x) { return std::abs(fs(x)) <= ztol; };
  // edge of a zero run between a nonzero point p and a zero point q
  auto edge = [&](double p, double q) {
    for (int it = 0; it < 200 && std::abs(q - p) > xtol; ++it) {
      const double m = 0.5 * (p + q);
      (is_zero(m) ? q : p) = m;
    }
    return q;
  };
  auto classify = [&](double x) {
    const double s = fs.slope(x);
    const double scale = peak / (x2 - x1);
    if (std::abs(s) <= 1e-9 * scale) return Stability::marginal;
    return s > 0 ? Stability::stable : Stability::unstable;
  };

  std::size_t i = 0;
  while (i < n) {
    if (std::abs(f[i]) <= ztol) {
      std::size_t j = i;
      while (j + 1 < n && std::abs(f[j + 1]) <= ztol) ++j;
      const double lo = i > 0 ? edge(xs[i - 1], xs[i]) : xs[i];
      const double hi = j + 1 < n ? edge(xs[j + 1], xs[j]) : xs[j];
      if (j > i || hi - lo > 1e-9 * (x2 - x1)) {
        out.push_back({lo, hi, Stability::marginal});
      } else {
        out.push_back({xs[i], xs[i], classify(xs[i])});
      }
      i = j + 1;
      continue;
    }
    if (i + 1 < n && std::abs(f[i + 1]) > ztol && (f[i] > 0) != (f[i + 1] > 0)) {
      const double r = numerics::find_root([&](double x) { return fs(x); }, xs[i], xs[i + 1], f[i], f[i + 1]);
      out.push_back({r, r, classify(r)});
    }
    ++i;
  }
  return out;
}

nlohmann::json DissipationReport::to_json() const {
  nlohmann::json j{{"zero_inertia", zero_inertia}, {"max_midline", max_midline}, {"tol", tol},
                   {"midline_zero", midline_zero}};
  if (pb_saving) j["P_b_saving"] = *pb_saving;
  return j;
}

DissipationReport dissipation_dominated_report(const PeaLoop& loop, const ElasticProfile* fs) {
  DissipationReport r;
  r.zero_inertia = loop.origin() && loop.origin()->model.m == 0.0;
  for (double g : loop.g_mid()) r.max_midline = std::max(r.max_midline, std::abs(g));
  r.tol = 1e-9 * peak_load(loop);
  r.midline_zero = r.max_midline <= r.tol;
  if (fs) {
    ElasticProfile none = polynomial_profile({0.0}, loop.x1(), loop.x2(), "none");
    r.pb_saving = metrics_pea_loop(loop, none).p_b - metrics_pea_loop(loop, *fs).p_b;
  }
  return r;
}

LoadWaveform pea_actuator_load(const LoadWaveform& G, const PeriodicWaveform& w, const ElasticProfile& fs) {
  if (!G.same_grid(w.displacement())) throw std::invalid_argument("actuator load: load and waveform grids differ");
  const std::size_t n = G.size();
  std::vector<double> f(n), fd(n);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = G.values()[i] + fs(w.x()[i]);
    fd[i] = G.rates()[i] + fs.slope(w.x()[i]) * w.xdot()[i];
  }
  auto s = w.series_ptr();
  return LoadWaveform(
      G.period(), std::move(f), std::move(fd), [G, fs, s](double t) { return G.value_at(t) + fs(s->eval(t).x); },
      [G, fs, s](double t) {
        const Derivs d = s->eval(t);
        return G.rate_at(t) + fs.slope(d.x) * d.v;
      });
}

void write_profile_csv(std::ostream& os, const ElasticProfile& fs, std::size_t samples) {
  os << "x,F_s\n" << std::setprecision(17);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = fs.x1() + (fs.x2() - fs.x1()) * static_cast<double>(i) / static_cast<double>(samples - 1);
    os << x << ',' << fs(x) << '\n';
  }
}

namespace {

ElasticProfile tabulated_profile(std::vector<double> x, std::vector<double> y, bool linear, std::string family) {
  const double x1 = x.front(), x2 = x.back();
  if (linear) {
    LinearTable t(std::move(x), std::move(y));
    return ElasticProfile(
        ElasticProfile::Representation::piecewise_linear, std::move(family), x1, x2, [t](double v) { return t(v); },
        [t](double v) { return t.prime(v); });
  }
  MonotoneCubic c(std::move(x), std::move(y));
  return ElasticProfile(
      ElasticProfile::Representation::tabulated, std::move(family), x1, x2, [c](double v) { return c(v); },
      [c](double v) { return c.prime(v); });
}

}  // namespace

ElasticProfile profile_from_json(const nlohmann::json& j) {
  const std::string family = j.value("family", "imported");
  if (j.contains("coefficients")) {
    const auto dom = j.at("domain").get<std::vector<double>>();
    if (dom.size() != 2) throw std::invalid_argument("profile JSON: domain must be [x1, x2]");
    ElasticProfile p = polynomial_profile(j.at("coefficients").get<std::vector<double>>(), dom[0], dom[1], family);
    if (j.contains("parameters")) p.parameters = j.at("parameters");
    return p;
  }
  if (!j.contains("samples")) throw std::invalid_argument("profile JSON: needs 'coefficients' or 'samples'");
  std::vector<double> x, y;
  for (const auto& row : j.at("samples")) {
    x.push_back(row.at(0).get<double>());
    y.push_back(row.at(1).get<double>());
  }
  const bool linear = j.value("representation", "") == "piecewise-linear";
  ElasticProfile p = tabulated_profile(std::move(x), std::move(y), linear, family);
  if (j.contains("parameters")) p.parameters = j.at("parameters");
  return p;
}

ElasticProfile read_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile CSV '" + path + "'");
  std::vector<double> x, y;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (ls >> a >> b) {
      x.push_back(a);
      y.push_back(b);
    }
  }
  if (x.size() < 4) throw std::runtime_error("profile CSV '" + path + "' has too few rows");
  return tabulated_profile(std::move(x), std::move(y), false, "imported");
}

}  // namespace resonant
