#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resonant/models.hpp"
#include "resonant/pea_design.hpp"
#include "resonant/power.hpp"
#include "resonant/sea_design.hpp"
#include "resonant/workloop.hpp"

namespace resonant {

/// max_i |m xddot + c xdot + c_q xdot|xdot| + F_s(x) - F| over the grid.
double residual_pea(const ElasticProfile& fs, const DynamicsModel& d, const PeriodicWaveform& w, const LoadWaveform& F);

/// Fixed-step RK4 trajectory. One sample per step, including t = 0.
struct Trajectory {
  double step = 0.0;
  std::size_t steps_per_period = 0;
  std::vector<double> t, x, v;
  /// Half peak-to-peak displacement and time of the maximum (mod T) per cycle.
  std::vector<double> cycle_amplitude, cycle_phase;
  bool converged = false;
  bool diverged = false;
  /// sup |x| difference between the last two cycles.
  double cycle_change = 0.0;
  /// sup |x - x_prescribed| over the last cycle, when a reference was given.
  std::optional<double> limit_cycle_error;
  std::string detail;
  nlohmann::json to_json() const;
};

struct IntegrationOptions {
  std::size_t n_cycles = 10;
  std::size_t steps_per_period = 512;
  /// Displacement scale for the convergence (1e-4) and divergence (100) tests.
  double xhat = 1.0;
};

/// m xddot + c xdot + c_q xdot|xdot| + F_s(x) = F(t).
Trajectory forward_integrate_pea(const DynamicsModel& d, const std::function<double(double)>& fs,
                                 const LoadWaveform& drive, double x0, double v0, const IntegrationOptions& opt = {},
                                 const PeriodicWaveform* prescribed = nullptr);

/// m xddot + c xdot + c_q xdot|xdot| = F_s(u(t) - x).
Trajectory forward_integrate_sea(const DynamicsModel& d, const std::function<double(double)>& spring,
                                 const DisplacementWaveform& u, double x0, double v0, const IntegrationOptions& opt = {},
                                 const PeriodicWaveform* prescribed = nullptr);

struct SweepRow {
  double omega = 0.0;
  double p_a = 0.0, p_b = 0.0;
  double excess() const { return p_b / p_a - 1.0; }
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// argmin of P_b over the scanned range, refined by a parabola through the
  /// best row and its neighbours.
  double argmin_pb = 0.0;
  bool argmin_at_boundary = false;
  /// argmin of P_b / P_a - 1 (the negative-power overhead). The best row is
  /// refined by Brent's method on the depth of the most negative power, which
  /// vanishes at the same frequency but is not flat there.
  double argmin_excess = 0.0;
  double min_excess = 0.0;
  nlohmann::json to_json() const;
};

/// Harmonic x = xhat cos(w t) driven through a linear spring k1 at each w in
/// [omega_lo, omega_hi]; rows run concurrently.
SweepResult sweep_frequency_sea(double m, double c, double k1, double omega_lo, double omega_hi, std::size_t n,
                                double xhat = 1.0, std::size_t samples = 2048, unsigned threads = 0);

struct InvarianceRow {
  std::string family;
  bool optimal = false;
  double abs_f = 0.0;
  double f2 = 0.0;
  double p_b = 0.0, p_a = 0.0;
};

struct InvarianceReport {
  bool symmetric = false;
  std::vector<InvarianceRow> rows;
  /// (max - min) / mean over the rows.
  double spread_abs_f = 0.0;
  double spread_f2 = 0.0;
  /// symmetric: spread_abs_f < 1e-6; asymmetric: spread_abs_f > 1e-3.
  bool pass = false;
  std::string detail;
  nlohmann::json to_json() const;
};

/// P_|F| across profiles that satisfy the elastic bound on the loop.
InvarianceReport invariance_suite(const PeaLoop& loop, const std::vector<ElasticProfile>& profiles,
                                  const PeriodicWaveform& w, const LoadWaveform& G);

/// Loop integrals W(A+), W(B+), W(A-), W(B-), W_Q of the positive and
/// negative parts of F+- and the metrics assembled from them. Integrated by
/// Gauss-Kronrod in the angle x = xm - r cos(theta), which removes the
/// square-root behaviour at the turning points.
struct LoopDecomposition {
  double w_ap = 0.0, w_bp = 0.0, w_am = 0.0, w_bm = 0.0, w_q = 0.0;
  double p_a = 0.0, p_b = 0.0, p_c = 0.0, p_d = 0.0;
  nlohmann::json to_json() const;
};
LoopDecomposition decompose_pea(const PeaLoop& loop, const ElasticProfile& fs, double q_plus, double q_minus);

}  // namespace resonant
