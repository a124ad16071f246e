#include "resonant/power.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "resonant/numerics.hpp"

namespace resonant {

Penalty Penalty::constant(double q) {
  if (!(q >= 0.0) || !std::isfinite(q)) throw std::invalid_argument("penalty: Q must be finite and non-negative");
  Penalty p;
  p.q_ = q;
  return p;
}

Penalty Penalty::sampled(std::vector<double> q) {
  if (q.empty()) throw std::invalid_argument("penalty: empty Q(t) samples");
  for (double v : q)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("penalty: sampled Q(t) must be > 0 everywhere");
  Penalty p;
  p.q_ = numerics::periodic_mean(q);
  p.samples_ = std::move(q);
  return p;
}

double Penalty::at(double t, double period) const {
  if (is_constant()) return q_;
  const auto n = samples_.size();
  double s = std::fmod(t / period, 1.0);
  if (s < 0) s += 1.0;
  const double u = s * static_cast<double>(n);
  const auto i = static_cast<std::size_t>(u) % n;
  const double f = u - std::floor(u);
  return (1.0 - f) * samples_[i] + f * samples_[(i + 1) % n];
}

nlohmann::json Penalty::to_json() const {
  if (is_constant()) return {{"kind", "constant"}, {"Q", q_}};
  return {{"kind", "sampled"}, {"samples", samples_.size()}, {"mean", q_}};
}

nlohmann::json ForceMetrics::to_json() const {
  return {{"F2", f2}, {"absF", abs_f}, {"absFdot", abs_fdot}, {"Fdot2", fdot2}};
}

nlohmann::json PowerReport::to_json() const {
  nlohmann::json j{{"P_a", p_a},           {"P_b", p_b},           {"P_c", p_c},
                   {"P_d", p_d},           {"Q", q.to_json()},     {"peak_load", peak_load},
                   {"peak_power", peak_power}, {"min_power", min_power}};
  if (q_lower) j["Q_lower"] = q_lower->to_json();
  if (duty_cycle) j["duty_cycle"] = *duty_cycle;
  if (force) j["force_metrics"] = force->to_json();
  if (transfer_ratio) j["transfer_ratio"] = *transfer_ratio;
  return j;
}

namespace {

double max_abs(std::span<const double> f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

double mean_abs(std::span<const double> f) {
  auto p = numerics::signed_parts(f);
  return p.positive + p.negative;
}

}  // namespace

PowerReport metrics_time(const LoadWaveform& F, const VelocityWaveform& v, const Penalty& q) {
  if (!F.same_grid(v)) throw std::invalid_argument("metrics: load and velocity grids differ");
  if (!q.is_constant() && q.samples().size() != F.size())
    throw std::invalid_argument("metrics: sampled Q(t) must share the load's grid");
  const std::vector<double> P = F.times(v);
  const auto parts = numerics::signed_parts(P, q.is_constant() ? std::span<const double>{} : q.samples());

  PowerReport r;
  r.q = q;
  r.p_a = numerics::periodic_mean(P);
  r.p_c = r.p_a + parts.negative;
  r.p_b = r.p_a + 2.0 * parts.negative;
  r.p_d = r.p_a + (q.is_constant() ? q.value() * parts.negative : parts.weighted_negative);
  r.peak_load = max_abs(F.values());
  r.peak_power = max_abs(P);
  r.min_power = *std::min_element(P.begin(), P.end());
  r.force = force_metrics(F);
  r.duty_cycle = duty_cycle(F);
  return r;
}

PowerReport metrics_pea_loop(const PeaLoop& loop, const ElasticProfile& fs, const Penalty& q_plus,
                             const std::optional<Penalty>& q_minus) {
  const Penalty& qp = q_plus;
  const Penalty& qm = q_minus ? *q_minus : q_plus;
  const bool sampled = !qp.is_constant() || !qm.is_constant();
  if (sampled && !loop.has_time_map())
    throw std::invalid_argument("metrics: sampled Q(t) needs a loop with a time map");

  const double x1 = loop.x1(), x2 = loop.x2(), T = loop.period();
  const auto& xs = loop.x();
  std::vector<double> fp(xs.size()), fm(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double s = fs(xs[j]);
    if (!std::isfinite(s)) throw std::invalid_argument("metrics: elastic profile is not finite on the loop range");
    fp[j] = loop.g_plus()[j] + s;
    fm[j] = loop.g_minus()[j] + s;
  }
  const double peak = std::max(max_abs(fp), max_abs(fm));

  PowerReport r;
  r.q = qp;
  if (q_minus) r.q_lower = qm;
  r.peak_load = peak;
  r.peak_power = 0.0;
  r.min_power = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double pu = fp[j] * loop.v_plus()[j], pl = fm[j] * loop.v_minus()[j];
    if (std::isnan(pu) || std::isnan(pl)) continue;
    r.peak_power = std::max({r.peak_power, std::abs(pu), std::abs(pl)});
    r.min_power = std::min({r.min_power, pu, pl});
  }

  const double zero_tol = 1e-12 * peak, xtol = 1e-14 * (x2 - x1);
  // One branch: (integral of the positive part, of the negative part,
  // of Q times the negative part) of s * F, where s = +1 upper, -1 lower.
  auto branch = [&](Branch b, double sgn, const Penalty& q) {
    auto F = [&](double x) { return loop.g(b, x) + fs(x); };
    std::vector<double> breaks = numerics::sign_changes(F, xs, zero_tol, xtol);
    for (double x : fs.breakpoints()) breaks.push_back(x);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> pts{x1};
    for (double x : breaks)
      if (x > x1 && x < x2) pts.push_back(x);
    pts.push_back(x2);
    double pos = 0.0, neg = 0.0, wneg = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double a = pts[i], c = pts[i + 1];
      if (c - a <= 1e-15 * (x2 - x1)) continue;
      const double mid = sgn * F(0.5 * (a + c));
      if (std::abs(mid) <= zero_tol) continue;
      const double val = sgn * numerics::integrate(F, a, c);
      if (mid > 0) {
        pos += val;
      } else {
        neg -= val;
        if (!q.is_constant()) {
          auto qf = [&](double x) { return q.at(*loop.time(b, x), T) * std::abs(F(x)); };
          wneg += numerics::integrate(qf, a, c);
        } else {
          wneg -= q.value() * val;
        }
      }
    }
    return std::array<double, 3>{pos / T, neg / T, wneg / T};
  };
  const auto up = branch(Branch::upper, 1.0, qp);
  const auto lo = branch(Branch::lower, -1.0, qm);
  r.p_a = up[0] - up[1] + lo[0] - lo[1];
  r.p_c = r.p_a + up[1] + lo[1];
  r.p_b = r.p_a + 2.0 * (up[1] + lo[1]);
  r.p_d = r.p_a + up[2] + lo[2];
  return r;
}

ForceMetrics force_metrics(const LoadWaveform& F) {
  ForceMetrics m;
  const auto& f = F.values();
  const auto& fd = F.rates();
  for (std::size_t i = 0; i < f.size(); ++i) {
    m.f2 += f[i] * f[i];
    m.fdot2 += fd[i] * fd[i];
  }
  m.f2 /= static_cast<double>(f.size());
  m.fdot2 /= static_cast<double>(f.size());
  m.abs_f = mean_abs(f);
  m.abs_fdot = mean_abs(fd);
  return m;
}

double duty_cycle(const PeriodicSignal& f, double eps_rel) {
  if (!(eps_rel > 0.0 && eps_rel <= 0.1)) throw std::invalid_argument("duty cycle: eps_rel must lie in (0, 0.1]");
  const double peak = max_abs(f.values());
  if (peak == 0.0) return 0.0;
  return numerics::fraction_above(f.values(), eps_rel * peak);
}

double transfer_ratio(std::span<const double> output_power, std::span<const double> input_power) {
  if (output_power.size() != input_power.size()) throw std::invalid_argument("transfer ratio: sample counts differ");
  const double den = mean_abs(input_power);
  if (!(den > 0.0)) throw std::invalid_argument("transfer ratio: input power is identically zero");
  return mean_abs(output_power) / den;
}

double transfer_ratio_pea(const DynamicsModel& d, const PeriodicWaveform& w, const LoadWaveform& F) {
  if (!F.same_grid(w.velocity())) throw std::invalid_argument("transfer ratio: load and waveform grids differ");
  return transfer_ratio(dissipated_power(d, w), F.times(w.velocity()));
}

double transfer_ratio_sea(const DynamicsModel& d, const PeriodicWaveform& w, const LoadWaveform& F,
                          const VelocityWaveform& udot) {
  if (!F.same_grid(udot)) throw std::invalid_argument("transfer ratio: load and actuator velocity grids differ");
  return transfer_ratio(dissipated_power(d, w), F.times(udot));
}

}  // namespace resonant
