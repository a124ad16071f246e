#include "resonant/workloop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

// Boost 1.74's pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "resonant/errors.hpp"
#include "resonant/numerics.hpp"

namespace resonant {
namespace {

using Eval = std::function<double(double)>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Branches traced by a periodic signal pair (s(t), y(t)) over two monotone
// half-cycles of s. The upper branch runs over [ta_u, tb_u], the lower over
// [ta_l, tb_l]; each interval is oriented so that s increases with t when
// `increasing` is set for that branch.
class TimeSource final : public detail::BranchSource {
 public:
  struct Half {
    double ta, tb;
    bool increasing;
  };

  TimeSource(Eval s, Eval sdot, Eval y, Eval ydot, double s_lo, double s_hi, Half up, Half lo)
      : s_(std::move(s)), sdot_(std::move(sdot)), y_(std::move(y)), ydot_(std::move(ydot)),
        s_lo_(s_lo), s_hi_(s_hi), up_(up), lo_(lo) {
    for (int i = 0; i < 64; ++i)
      rate_scale_ = std::max(rate_scale_, std::abs(sdot_(up_.ta + (up_.tb - up_.ta) * i / 63.0)));
  }

  double t_of(Branch b, double S) const {
    const Half& h = (b == Branch::upper) ? up_ : lo_;
    const double t_lo = h.increasing ? h.ta : h.tb;  // time where s = s_lo
    const double t_hi = h.increasing ? h.tb : h.ta;
    if (S <= s_lo_) return t_lo;
    if (S >= s_hi_) return t_hi;
    auto f = [this, S](double t) { return s_(t) - S; };
    return numerics::find_root(f, h.ta, h.tb, f(h.ta), f(h.tb));
  }

  double value(Branch b, double S) const override { return y_(t_of(b, S)); }
  double indep_rate(Branch b, double S) const override { return sdot_(t_of(b, S)); }
  double dep_rate(Branch b, double S) const override { return ydot_(t_of(b, S)); }
  std::optional<double> time(Branch b, double S) const override { return t_of(b, S); }

  double slope(Branch b, double S) const override {
    const double t = t_of(b, S);
    const double sd = sdot_(t);
    if (std::abs(sd) > 1e-12 * rate_scale_) return ydot_(t) / sd;
    // at a turning point of s: one-sided difference toward the interior
    const double h = 1e-3 * (s_hi_ - s_lo_);
    const double S2 = (S - s_lo_ < s_hi_ - S) ? S + h : S - h;
    return (value(b, S2) - value(b, S)) / (S2 - S);
  }

  double end_slope(Branch b, bool at_max) const override {
    const Half& h = (b == Branch::upper) ? up_ : lo_;
    const double span = h.tb - h.ta;
    const double tau = 1e-9 * span;
    // time at the requested end, stepped inward by tau
    const bool end_is_tb = (at_max == h.increasing);
    const double t = end_is_tb ? h.tb - tau : h.ta + tau;
    return std::abs(ydot_(t) / sdot_(t));
  }

 private:
  Eval s_, sdot_, y_, ydot_;
  double s_lo_, s_hi_;
  Half up_, lo_;
  double rate_scale_ = 0.0;
};

class TableSource final : public detail::BranchSource {
 public:
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  TableSource(const std::vector<double>& s, const std::vector<double>& up, const std::vector<double>& lo)
      : up_(std::vector<double>(s), std::vector<double>(up)), lo_(std::vector<double>(s), std::vector<double>(lo)),
        s_lo_(s.front()), s_hi_(s.back()) {}

  double value(Branch b, double S) const override { return pick(b)(clamp(S)); }
  double indep_rate(Branch, double) const override { return kNaN; }
  double dep_rate(Branch, double) const override { return kNaN; }
  std::optional<double> time(Branch, double) const override { return std::nullopt; }
  double slope(Branch b, double S) const override { return pick(b).prime(clamp(S)); }
  double end_slope(Branch b, bool at_max) const override { return std::abs(pick(b).prime(at_max ? s_hi_ : s_lo_)); }

 private:
  const Pchip& pick(Branch b) const { return b == Branch::upper ? up_ : lo_; }
  double clamp(double S) const { return std::clamp(S, s_lo_, s_hi_); }
  Pchip up_, lo_;
  double s_lo_, s_hi_;
};

std::vector<double> uniform(double a, double b, std::size_t m) {
  std::vector<double> g(m);
  for (std::size_t j = 0; j < m; ++j) g[j] = a + (b - a) * static_cast<double>(j) / static_cast<double>(m - 1);
  g.back() = b;
  return g;
}

double unwrap_after(double t, double t0, double T) {
  while (t <= t0) t += T;
  return t;
}

}  // namespace

// ---------------------------------------------------------------- PEA

double PeaLoop::max_arc() const {
  double m = 0.0;
  for (double a : garc_) m = std::max(m, a);
  return m;
}

void PeaLoop::fill_tables(std::size_t m, double x1, double x2) {
  x_ = uniform(x1, x2, m);
  gp_.resize(m);
  gm_.resize(m);
  gmid_.resize(m);
  garc_.resize(m);
  vp_.resize(m);
  vm_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    gp_[j] = src_->value(Branch::upper, x_[j]);
    gm_[j] = src_->value(Branch::lower, x_[j]);
    gmid_[j] = 0.5 * (gp_[j] + gm_[j]);
    garc_[j] = 0.5 * (gp_[j] - gm_[j]);
    vp_[j] = src_->indep_rate(Branch::upper, x_[j]);
    vm_[j] = src_->indep_rate(Branch::lower, x_[j]);
  }
}

double PeaLoop::area() const {
  auto f = [this](double x) { return g_plus_at(x) - g_minus_at(x); };
  return numerics::integrate(f, x1(), x2()) / period_;
}

PeaLoop PeaLoop::from_tables(std::vector<double> x, std::vector<double> g_plus, std::vector<double> g_minus,
                             double period) {
  if (x.size() < 4 || g_plus.size() != x.size() || g_minus.size() != x.size())
    throw std::invalid_argument("pea loop: tables need >= 4 matching rows");
  PeaLoop L;
  L.period_ = period;
  L.src_ = std::make_shared<TableSource>(x, g_plus, g_minus);
  const std::size_t m = x.size();
  L.x_ = std::move(x);
  L.gp_ = std::move(g_plus);
  L.gm_ = std::move(g_minus);
  L.gmid_.resize(m);
  L.garc_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    L.gmid_[j] = 0.5 * (L.gp_[j] + L.gm_[j]);
    L.garc_[j] = 0.5 * (L.gp_[j] - L.gm_[j]);
  }
  L.vp_.assign(m, kNaN);
  L.vm_.assign(m, kNaN);
  return L;
}

PeaLoop PeaLoop::from_mid_arc(const std::vector<double>& x, const std::vector<double>& g_mid,
                              const std::vector<double>& g_arc, double period) {
  std::vector<double> gp(x.size()), gm(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    gp[j] = g_mid[j] + g_arc[j];
    gm[j] = g_mid[j] - g_arc[j];
  }
  return from_tables(x, std::move(gp), std::move(gm), period);
}

PeaLoop build_pea_loop(const LoadWaveform& G, const PeriodicWaveform& w, std::size_t grid) {
  if (!G.same_grid(w.displacement())) throw std::invalid_argument("pea loop: load and waveform grids differ");
  if (grid < 16) throw std::invalid_argument("pea loop: grid too small");
  const double T = w.period();
  const double t_min = w.t_of_min();
  const double t_max = unwrap_after(w.t_of_max(), t_min, T);
  const double t_min2 = unwrap_after(t_min, t_max, T);
  auto s = w.series_ptr();
  auto src = std::make_shared<TimeSource>(
      [s](double t) { return s->eval(t).x; }, [s](double t) { return s->eval(t).v; },
      [G](double t) { return G.value_at(t); }, [G](double t) { return G.rate_at(t); }, w.x_min(), w.x_max(),
      TimeSource::Half{t_min, t_max, true}, TimeSource::Half{t_max, t_min2, false});

  PeaLoop L;
  L.period_ = T;
  L.src_ = src;
  L.fill_tables(grid, w.x_min(), w.x_max());

  const double a = L.area();
  if (!(a > 0.0)) {
    std::ostringstream os;
    os << "work loop is not dissipative: (1/T) integral of (G+ - G-) dx = " << a;
    throw InadmissibleError(InadmissibleError::Kind::non_dissipative, os.str());
  }
  const double tol = 1e-9 * L.max_arc();
  for (std::size_t j = 0; j < L.x_.size(); ++j) {
    if (L.garc_[j] < -tol) {
      std::ostringstream os;
      os << "work loop self-intersects: G_arc = " << L.garc_[j] << " at x = " << L.x_[j];
      throw InadmissibleError(InadmissibleError::Kind::self_intersecting, os.str());
    }
  }
  return L;
}

PeaLoop build_pea_loop(const DynamicsModel& d, const PeriodicWaveform& w, std::size_t grid) {
  PeaLoop L = build_pea_loop(inelastic_load(d, w), w, grid);
  L.origin_ = LoopOrigin{d, w.kind(), w.omega(), w.amplitude()};
  return L;
}

nlohmann::json AdmissibilityReport::to_json() const {
  nlohmann::json j;
  j["admissible"] = admissible;
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}, {"detail", c.detail}});
  return j;
}

AdmissibilityReport check_admissible_pea(const PeaLoop& loop) {
  AdmissibilityReport r;
  double scale = 0.0;
  for (std::size_t j = 0; j < loop.x().size(); ++j)
    scale = std::max({scale, std::abs(loop.g_plus()[j]), std::abs(loop.g_minus()[j])});
  const double tol = 1e-9 * std::max(scale, 1e-300);

  const double gap1 = std::abs(loop.g_plus().front() - loop.g_minus().front());
  const double gap2 = std::abs(loop.g_plus().back() - loop.g_minus().back());
  r.checks.push_back({"closed", std::max(gap1, gap2) <= tol, std::max(gap1, gap2), "branch gap at the turning points"});

  bool single = loop.x().size() >= 2;
  for (std::size_t j = 1; j < loop.x().size(); ++j) single = single && loop.x()[j] > loop.x()[j - 1];
  for (std::size_t j = 0; j < loop.x().size(); ++j)
    single = single && std::isfinite(loop.g_plus()[j]) && std::isfinite(loop.g_minus()[j]);
  r.checks.push_back({"bivalued", single, 0.0, "two single-valued branches over an increasing x grid"});

  double min_arc = std::numeric_limits<double>::infinity();
  for (double a : loop.g_arc()) min_arc = std::min(min_arc, a);
  r.checks.push_back({"arc-positive", min_arc >= -tol, min_arc, "min G_arc"});

  const double area = loop.area();
  r.checks.push_back({"dissipative", area > 0.0, area, "(1/T) loop area, clockwise travel"});

  r.admissible = std::all_of(r.checks.begin(), r.checks.end(), [](const CheckResult& c) { return c.pass; });
  return r;
}

// ---------------------------------------------------------------- SEA

void SeaLoop::fill_tables(std::vector<double> grid) {
  f_ = std::move(grid);
  const std::size_t m = f_.size();
  for (auto* v : {&xp_, &xm_, &xpp_, &xpm_, &fdp_, &fdm_, &vxp_, &vxm_, &vfp_, &vfm_}) v->resize(m);
  flag_.assign(m, 0);
  double fdot_max = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    xp_[k] = src_->value(Branch::upper, f_[k]);
    xm_[k] = src_->value(Branch::lower, f_[k]);
    vxp_[k] = src_->dep_rate(Branch::upper, f_[k]);
    vxm_[k] = src_->dep_rate(Branch::lower, f_[k]);
    vfp_[k] = src_->indep_rate(Branch::upper, f_[k]);
    vfm_[k] = src_->indep_rate(Branch::lower, f_[k]);
    if (std::isfinite(vfp_[k])) fdot_max = std::max({fdot_max, std::abs(vfp_[k]), std::abs(vfm_[k])});
  }
  const double h = f_[1] - f_[0];
  auto fd = [&](const std::vector<double>& X, std::size_t k) {
    if (k == 0) return (X[1] - X[0]) / h;
    if (k == m - 1) return (X[m - 1] - X[m - 2]) / h;
    return (X[k + 1] - X[k - 1]) / (2 * h);
  };
  for (std::size_t k = 0; k < m; ++k) {
    fdp_[k] = fd(xp_, k);
    fdm_[k] = fd(xm_, k);
    const bool known = std::isfinite(vfp_[k]);
    const bool end = known ? (std::abs(vfp_[k]) <= 1e-9 * fdot_max || std::abs(vfm_[k]) <= 1e-9 * fdot_max)
                           : (k == 0 || k == m - 1);
    flag_[k] = end ? 1 : 0;
    if (known && !end) {
      xpp_[k] = vxp_[k] / vfp_[k];
      xpm_[k] = vxm_[k] / vfm_[k];
    } else if (known) {
      xpp_[k] = fdp_[k];
      xpm_[k] = fdm_[k];
    } else {
      xpp_[k] = src_->slope(Branch::upper, f_[k]);
      xpm_[k] = src_->slope(Branch::lower, f_[k]);
    }
  }
}

SeaLoop SeaLoop::from_tables(std::vector<double> f, std::vector<double> x_plus, std::vector<double> x_minus,
                             double period) {
  if (f.size() < 4 || x_plus.size() != f.size() || x_minus.size() != f.size())
    throw std::invalid_argument("sea loop: tables need >= 4 matching rows");
  SeaLoop L;
  L.period_ = period;
  L.src_ = std::make_shared<TableSource>(f, x_plus, x_minus);
  L.fill_tables(std::move(f));
  return L;
}

SeaLoop build_sea_loop(const LoadWaveform& F, const PeriodicWaveform& w, std::size_t grid) {
  if (!F.same_grid(w.displacement())) throw std::invalid_argument("sea loop: load and waveform grids differ");
  if (grid < 16) throw std::invalid_argument("sea loop: grid too small");
  const double T = w.period();
  auto tp = numerics::turning_points([&F](double t) { return F.rate_at(t); }, T,
                                     std::max<std::size_t>(4 * F.size(), 8 * w.series().harmonics() + 64));
  if (tp.segments != 2) {
    std::ostringstream os;
    os << "load F(t) has " << tp.segments << " monotone segments per period; exactly two are required";
    throw InadmissibleError(InadmissibleError::Kind::non_monotonic, os.str());
  }
  const double t_fmax = tp.t_max;
  const double t_fmin = unwrap_after(tp.t_min, t_fmax, T);
  const double t_fmax2 = unwrap_after(t_fmax, t_fmin, T);
  const double f1 = F.value_at(tp.t_min), f2 = F.value_at(tp.t_max);
  auto s = w.series_ptr();
  auto src = std::make_shared<TimeSource>(
      [F](double t) { return F.value_at(t); }, [F](double t) { return F.rate_at(t); },
      [s](double t) { return s->eval(t).x; }, [s](double t) { return s->eval(t).v; }, f1, f2,
      TimeSource::Half{t_fmax, t_fmin, false}, TimeSource::Half{t_fmin, t_fmax2, true});

  SeaLoop L;
  L.period_ = T;
  L.src_ = src;
  L.t_fmax_ = t_fmax;
  L.t_fmin_ = std::fmod(t_fmin, T);
  L.fill_tables(uniform(f1, f2, grid));

  const double tol = 1e-9 * w.amplitude();
  for (std::size_t k = 0; k < L.f_.size(); ++k) {
    if (L.xp_[k] < L.xm_[k] - tol) {
      std::ostringstream os;
      os << "SEA loop branch ordering fails: X+ - X- = " << (L.xp_[k] - L.xm_[k]) << " at F = " << L.f_[k];
      throw InadmissibleError(InadmissibleError::Kind::branch_ordering, os.str());
    }
  }
  return L;
}

nlohmann::json AccessibilityReport::to_json() const {
  return {{"accessible", accessible},         {"margin_negative_side", margin_negative},
          {"margin_positive_side", margin_positive}, {"zero_load_gap", zero_gap},
          {"zero_load_tolerance", zero_tol},   {"boundary_case", boundary_case},
          {"detail", detail}};
}

AccessibilityReport sea_accessibility(const SeaLoop& loop, double tol_rel) {
  AccessibilityReport r;
  const auto& F = loop.f();
  const std::size_t m = F.size();
  if (!(loop.f1() < 0.0 && loop.f2() > 0.0)) {
    r.detail = "load range does not straddle zero";
    return r;
  }
  double xmax = 0.0;
  for (std::size_t k = kSeaGuardCells; k + kSeaGuardCells < m; ++k)
    xmax = std::max({xmax, std::abs(loop.xprime_plus()[k]), std::abs(loop.xprime_minus()[k])});
  const double tol = tol_rel * xmax;
  r.margin_negative = std::numeric_limits<double>::infinity();
  r.margin_positive = std::numeric_limits<double>::infinity();
  for (std::size_t k = kSeaGuardCells; k + kSeaGuardCells < m; ++k) {
    if (loop.endpoint_flag()[k]) continue;
    const double d = loop.xprime_plus()[k] - loop.xprime_minus()[k];
    if (F[k] < 0.0)
      r.margin_negative = std::min(r.margin_negative, d);
    else if (F[k] > 0.0)
      r.margin_positive = std::min(r.margin_positive, -d);
  }
  r.zero_tol = 1e-6 * xmax;
  r.zero_gap = std::abs(loop.xprime(Branch::upper, 0.0) - loop.xprime(Branch::lower, 0.0));
  r.boundary_case = r.zero_gap <= r.zero_tol;
  r.accessible = r.margin_negative >= -tol && r.margin_positive >= -tol && r.boundary_case;
  std::ostringstream os;
  if (!r.boundary_case) os << "X'+(0) != X'-(0) (gap " << r.zero_gap << "); ";
  if (r.margin_negative < -tol) os << "X'- > X'+ somewhere on [F1,0); ";
  if (r.margin_positive < -tol) os << "X'+ > X'- somewhere on (0,F2]; ";
  r.detail = r.accessible ? "accessible; equality holds at zero load" : os.str();
  return r;
}

}  // namespace resonant
