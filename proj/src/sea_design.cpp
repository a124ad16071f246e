#include "resonant/sea_design.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "resonant/errors.hpp"
#include "resonant/interp.hpp"
#include "resonant/numerics.hpp"

namespace resonant {

std::string to_string(ComplianceProfile::SignClass s) {
  switch (s) {
    case ComplianceProfile::SignClass::always_stable: return "always-stable";
    case ComplianceProfile::SignClass::always_unstable: return "always-unstable";
    case ComplianceProfile::SignClass::indefinite: return "indefinite";
  }
  return "unknown";
}

ComplianceProfile::ComplianceProfile(std::string family, double f1, double f2, Fn gradient, Fn displacement)
    : family_(std::move(family)), f1_(f1), f2_(f2), grad_(std::move(gradient)), disp_(std::move(displacement)) {
  if (!(f2_ > f1_)) throw std::invalid_argument("compliance: empty load range");
  constexpr int n = 257;
  std::vector<double> g;
  double gmax = 0.0;
  for (int k = 1; k < n - 1; ++k) {
    g.push_back(grad_(f1_ + (f2_ - f1_) * k / (n - 1.0)));
    gmax = std::max(gmax, std::abs(g.back()));
  }
  const double tol = 1e-12 * gmax;
  const bool any_pos = std::any_of(g.begin(), g.end(), [tol](double v) { return v > tol; });
  const bool any_neg = std::any_of(g.begin(), g.end(), [tol](double v) { return v < -tol; });
  sign_ = (any_pos && any_neg) ? SignClass::indefinite
                               : (any_neg ? SignClass::always_unstable : SignClass::always_stable);
}

ComplianceProfile ComplianceProfile::with_offset(double C) const {
  ComplianceProfile p = *this;
  p.offset_ = C;
  return p;
}

nlohmann::json ComplianceProfile::to_json(std::size_t samples) const {
  nlohmann::json j{{"family", family_}, {"domain", {f1_, f2_}}, {"offset", offset_}, {"sign_class", to_string(sign_)}};
  if (stiffness) {
    j["stiffness"] = *stiffness;
    j["compliance"] = 1.0 / *stiffness;
  }
  j["parameters"] = parameters.is_null() ? nlohmann::json::object() : parameters;
  auto& tab = j["samples"] = nlohmann::json::array();
  for (std::size_t i = 0; i < samples; ++i) {
    const double F = f1_ + (f2_ - f1_) * static_cast<double>(i) / static_cast<double>(samples - 1);
    tab.push_back({F, gradient(F), displacement(F)});
  }
  return j;
}

ComplianceProfile linear_compliance(double k1, double f1, double f2) {
  if (!(k1 != 0.0) || !std::isfinite(k1)) throw std::invalid_argument("linear compliance: k1 must be finite and nonzero");
  ComplianceProfile p(
      "linear", f1, f2, [k1](double) { return 1.0 / k1; }, [k1](double F) { return F / k1; });
  p.stiffness = k1;
  p.parameters = {{"k1", k1}};
  return p;
}

ComplianceProfile functional_compliance(std::string family, double f1, double f2, ComplianceProfile::Fn gradient) {
  auto disp = [gradient](double F) {
    if (F == 0.0) return 0.0;
    const double v = numerics::integrate(gradient, std::min(0.0, F), std::max(0.0, F));
    return F > 0 ? v : -v;
  };
  return ComplianceProfile(std::move(family), f1, f2, gradient, disp);
}

namespace {

double max_abs_xprime(const SeaLoop& loop) {
  double m = 0.0;
  const std::size_t n = loop.f().size();
  for (std::size_t k = kSeaGuardCells; k + kSeaGuardCells < n; ++k)
    if (!loop.endpoint_flag()[k])
      m = std::max({m, std::abs(loop.xprime_plus()[k]), std::abs(loop.xprime_minus()[k])});
  return m;
}

}  // namespace

BoundReport check_sea_bound(const ComplianceProfile& cp, const SeaLoop& loop, double tol) {
  BoundReport r;
  const double xmax = max_abs_xprime(loop);
  r.tol = tol < 0.0 ? 1e-9 * xmax : tol;
  r.max_violation = -std::numeric_limits<double>::infinity();
  const auto& F = loop.f();
  const std::size_t n = F.size();
  for (std::size_t k = kSeaGuardCells; k + kSeaGuardCells < n; ++k) {
    if (loop.endpoint_flag()[k] || F[k] == 0.0) continue;
    const double s = -cp.gradient(F[k]);
    const double xp = loop.xprime_plus()[k], xm = loop.xprime_minus()[k];
    // below zero load X'- <= s <= X'+, above it X'+ <= s <= X'-
    double v = F[k] < 0.0 ? std::max(xm - s, s - xp) : std::max(xp - s, s - xm);
    if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
    if (v > r.max_violation) {
      r.max_violation = v;
      r.worst = F[k];
    }
    ++r.points;
  }
  const double s0 = -cp.gradient(0.0);
  r.zero_margin_plus = s0 - loop.xprime(Branch::upper, 0.0);
  r.zero_margin_minus = s0 - loop.xprime(Branch::lower, 0.0);
  r.zero_tol = 1e-6 * xmax;
  r.zero_ok = std::abs(*r.zero_margin_plus) <= r.zero_tol && std::abs(*r.zero_margin_minus) <= r.zero_tol;
  const bool pointwise = r.max_violation <= r.tol;
  r.optimal = pointwise && r.zero_ok;
  std::ostringstream os;
  if (r.optimal) {
    os << "-(F_s^-1)' lies within the bounds at all " << r.points << " points and meets the zero-load equality";
  } else {
    if (!pointwise) os << "bound violated by " << r.max_violation << " at F = " << r.worst << "; ";
    if (!r.zero_ok)
      os << "zero-load equality missed: -(F_s^-1)'(0) - X'(0) = " << *r.zero_margin_plus << " / "
         << *r.zero_margin_minus;
  }
  r.detail = os.str();
  return r;
}

bool IntegratedBound::contains(const ComplianceProfile& cp, double tol) const {
  const double d0 = cp.displacement(0.0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double s = -(cp.displacement(f[k]) - d0);
    if (s < lower[k] - tol || s > upper[k] + tol) return false;
  }
  return true;
}

IntegratedBound integrated_bound(const SeaLoop& loop) {
  IntegratedBound b;
  b.f = loop.f();
  const double p0 = loop.x(Branch::upper, 0.0), m0 = loop.x(Branch::lower, 0.0);
  for (std::size_t k = 0; k < b.f.size(); ++k) {
    const double p = loop.x_plus()[k] - p0, m = loop.x_minus()[k] - m0;
    b.lower.push_back(std::min(p, m));
    b.upper.push_back(std::max(p, m));
  }
  return b;
}

LinearCompliance optimal_linear_compliance(double m, double c, double omega) {
  if (!(m > 0.0))
    throw std::invalid_argument("optimal linear compliance: m must be positive (no finite linear optimum without inertia)");
  LinearCompliance r;
  r.compliance = m / (m * m * omega * omega + c * c);
  r.stiffness = 1.0 / r.compliance;
  return r;
}

double global_resonant_frequency(double omega0, double zeta) {
  if (!(zeta >= 0.0)) throw std::invalid_argument("global resonant frequency: zeta must be non-negative");
  if (!(zeta < 0.5)) {
    std::ostringstream os;
    os << "global resonant frequency: no real solution for zeta = " << zeta << " (requires zeta < 1/2)";
    throw std::domain_error(os.str());
  }
  return omega0 * std::sqrt(1.0 - 4.0 * zeta * zeta);
}

ComplianceProfile dwell_time_compliance(const SeaLoop& loop, Side side) {
  const auto acc = sea_accessibility(loop);
  if (!acc.accessible)
    throw InadmissibleError(InadmissibleError::Kind::inaccessible,
                            "dwell-time compliance refused: loop is inaccessible (" + acc.detail + ")");
  const Branch b = side == Side::upper ? Branch::upper : Branch::lower;
  auto L = std::make_shared<const SeaLoop>(loop);
  ComplianceProfile p(
      "dwell-time-" + to_string(side), loop.f1(), loop.f2(), [L, b](double F) { return -L->xprime(b, F); },
      [L, b](double F) { return -L->x(b, F); });
  p.parameters = {{"side", to_string(side)}};
  return p;
}

DisplacementWaveform actuator_displacement(const ComplianceProfile& cp, const LoadWaveform& F, const PeriodicWaveform& w) {
  if (!F.same_grid(w.displacement())) throw std::invalid_argument("actuator displacement: load and waveform grids differ");
  const auto& f = F.values();
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double tol = 1e-9 * std::max(std::abs(*lo), std::abs(*hi));
  if (*lo < cp.f1() - tol || *hi > cp.f2() + tol) {
    std::ostringstream os;
    os << "actuator displacement: load range [" << *lo << ", " << *hi << "] exceeds the compliance domain ["
       << cp.f1() << ", " << cp.f2() << "]";
    throw std::invalid_argument(os.str());
  }
  const double f1 = cp.f1(), f2 = cp.f2();
  auto clampF = [f1, f2](double v) { return std::clamp(v, f1, f2); };
  const std::size_t n = f.size();
  std::vector<double> u(n), ud(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double Fi = clampF(f[i]);
    u[i] = w.x()[i] + cp.displacement(Fi);
    ud[i] = w.xdot()[i] + cp.gradient(Fi) * F.rates()[i];
  }
  auto s = w.series_ptr();
  return DisplacementWaveform(
      w.period(), std::move(u), std::move(ud),
      [=](double t) { return s->eval(t).x + cp.displacement(clampF(F.value_at(t))); },
      [=](double t) { return s->eval(t).v + cp.gradient(clampF(F.value_at(t))) * F.rate_at(t); });
}

VelocityWaveform actuator_velocity(const DisplacementWaveform& u) {
  return VelocityWaveform::from_samples(u.period(), u.rates());
}

std::function<double(double)> spring_force(const ComplianceProfile& cp) {
  if (cp.stiffness) {
    const double k = *cp.stiffness, C = cp.offset();
    return [k, C](double d) { return k * (d - C); };
  }
  if (cp.sign_class() != ComplianceProfile::SignClass::always_stable)
    throw InadmissibleError(InadmissibleError::Kind::domain,
                            "spring law needs an always-stable compliance (" + to_string(cp.sign_class()) + ")");
  constexpr std::size_t n = 2049;
  std::vector<double> d, f;
  for (std::size_t k = 0; k < n; ++k) {
    const double F = cp.f1() + (cp.f2() - cp.f1()) * static_cast<double>(k) / static_cast<double>(n - 1);
    const double v = cp.displacement(F);
    if (!d.empty() && !(v > d.back())) continue;  // flat stretches carry no invertible information
    d.push_back(v);
    f.push_back(F);
  }
  MonotoneCubic inv(d, f);
  const double d1 = d.front(), d2 = d.back();
  const double s1 = inv.prime(d1), s2 = inv.prime(d2), F1 = f.front(), F2 = f.back();
  // linear continuation outside the table
  return [inv, d1, d2, s1, s2, F1, F2](double x) {
    if (x < d1) return F1 + s1 * (x - d1);
    if (x > d2) return F2 + s2 * (x - d2);
    return inv(x);
  };
}

void write_compliance_csv(std::ostream& os, const ComplianceProfile& cp, std::size_t samples) {
  os << "F,gradient,displacement\n" << std::setprecision(17);
  for (std::size_t i = 0; i < samples; ++i) {
    const double F = cp.f1() + (cp.f2() - cp.f1()) * static_cast<double>(i) / static_cast<double>(samples - 1);
    os << F << ',' << cp.gradient(F) << ',' << cp.displacement(F) << '\n';
  }
}

ComplianceProfile compliance_from_json(const nlohmann::json& j) {
  const auto dom = j.at("domain").get<std::vector<double>>();
  if (dom.size() != 2) throw std::invalid_argument("compliance JSON: domain must be [F1, F2]");
  const double C = j.value("offset", 0.0);
  if (j.contains("stiffness")) return linear_compliance(j.at("stiffness").get<double>(), dom[0], dom[1]).with_offset(C);
  std::vector<double> F, g, d;
  for (const auto& row : j.at("samples")) {
    F.push_back(row.at(0).get<double>());
    g.push_back(row.at(1).get<double>());
    d.push_back(row.at(2).get<double>() - C);
  }
  MonotoneCubic gi(F, g), di(F, d);
  ComplianceProfile p(
      j.value("family", "imported"), dom[0], dom[1], [gi](double v) { return gi(v); }, [di](double v) { return di(v); });
  if (j.contains("parameters")) p.parameters = j.at("parameters");
  return p.with_offset(C);
}

}  // namespace resonant
