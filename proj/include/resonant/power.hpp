#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "resonant/models.hpp"
#include "resonant/profile.hpp"
#include "resonant/signal.hpp"
#include "resonant/workloop.hpp"

namespace resonant {

/// Negative-power penalty for metric (d): a constant, or Q(t) sampled on the
/// load's time grid.
class Penalty {
 public:
  Penalty() = default;
  /// Q >= 0. Q = 0, 1, 2 reproduce metrics (a), (c), (b).
  static Penalty constant(double q);
  /// Every sample must be strictly positive.
  static Penalty sampled(std::vector<double> q);

  bool is_constant() const { return samples_.empty(); }
  double value() const { return q_; }
  const std::vector<double>& samples() const { return samples_; }
  /// Q at time t of a cycle of length `period` (periodic linear interpolation).
  double at(double t, double period) const;
  nlohmann::json to_json() const;

 private:
  double q_ = 2.0;
  std::vector<double> samples_;
};

/// Force-based metrics with unit prefactor 1/T.
struct ForceMetrics {
  double f2 = 0.0;        ///< mean F^2
  double abs_f = 0.0;     ///< mean |F|
  double abs_fdot = 0.0;  ///< mean |dF/dt|
  double fdot2 = 0.0;     ///< mean (dF/dt)^2
  nlohmann::json to_json() const;
};

struct PowerReport {
  double p_a = 0.0, p_b = 0.0, p_c = 0.0, p_d = 0.0;
  Penalty q;
  /// Lower-branch penalty of a loop-domain report when it differs from q.
  std::optional<Penalty> q_lower;
  std::optional<double> duty_cycle;
  double peak_load = 0.0;
  double peak_power = 0.0;
  double min_power = 0.0;
  std::optional<ForceMetrics> force;
  std::optional<double> transfer_ratio;

  /// True when no negative power exceeds rel_tol * peak power.
  bool globally_resonant(double rel_tol = 1e-9) const { return min_power >= -rel_tol * peak_power; }
  nlohmann::json to_json() const;
};

/// Metrics (a)-(d) of P = F v on the shared time grid. Sign-split integrals
/// use the cubic through neighbouring samples, split at its roots.
PowerReport metrics_time(const LoadWaveform& F, const VelocityWaveform& v, const Penalty& q = Penalty::constant(2.0));

/// Metrics (a)-(d) from the loop branches: F+- = G+- + F_s, integrated in x
/// with tanh-sinh quadrature split at the zeros of F+- and the profile's
/// breakpoints. Sampled penalties are carried to each branch via its time map.
PowerReport metrics_pea_loop(const PeaLoop& loop, const ElasticProfile& fs, const Penalty& q_plus = Penalty::constant(2.0),
                             const std::optional<Penalty>& q_minus = std::nullopt);

ForceMetrics force_metrics(const LoadWaveform& F);

/// Fraction of the period where |f| > eps_rel * max|f|. Zero signal gives 0.
double duty_cycle(const PeriodicSignal& f, double eps_rel = 1e-3);

/// mean |output| / mean |input|.
double transfer_ratio(std::span<const double> output_power, std::span<const double> input_power);

/// PEA: dissipated power over actuator power F xdot.
double transfer_ratio_pea(const DynamicsModel& d, const PeriodicWaveform& w, const LoadWaveform& F);
/// SEA: dissipated power over actuator power F udot.
double transfer_ratio_sea(const DynamicsModel& d, const PeriodicWaveform& w, const LoadWaveform& F,
                          const VelocityWaveform& udot);

}  // namespace resonant
