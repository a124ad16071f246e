#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "resonant/fourier.hpp"
#include "resonant/signal.hpp"

namespace resonant {

enum class WaveformKind { harmonic, smoothed_triangle, smoothed_square, smoothed_sawtooth, tabulated };

std::string to_string(WaveformKind k);
WaveformKind waveform_kind_from_string(const std::string& s);

/// Prescribed periodic displacement x(t). Backed by a Fourier series, so
/// x and its first three derivatives are available at any t.
class PeriodicWaveform {
 public:
  WaveformKind kind() const { return kind_; }
  double amplitude() const { return amplitude_; }
  double omega() const { return series_->omega(); }
  double period() const { return 2.0 * M_PI / series_->omega(); }
  double smoothing() const { return smoothing_; }
  std::size_t samples() const { return x_.size(); }
  double step() const { return period() / static_cast<double>(x_.size()); }

  const std::vector<double>& t() const { return t_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& xdot() const { return v_; }
  const std::vector<double>& xddot() const { return a_; }
  const std::vector<double>& xdddot() const { return j_; }

  double x_min() const { return x1_; }
  double x_max() const { return x2_; }
  /// Times of the displacement minimum and maximum within [0, T).
  double t_of_min() const { return t_min_; }
  double t_of_max() const { return t_max_; }

  Derivs at(double t) const { return series_->eval(t); }
  const FourierSeries& series() const { return *series_; }
  std::shared_ptr<const FourierSeries> series_ptr() const { return series_; }

  PeriodicSignal displacement() const;
  PeriodicSignal velocity() const;

  /// Built from an explicit series; runs the admissibility checks.
  static PeriodicWaveform from_series(WaveformKind kind, FourierSeries series, std::size_t n, double smoothing);

 private:
  WaveformKind kind_ = WaveformKind::harmonic;
  double amplitude_ = 0.0, smoothing_ = 0.0;
  double x1_ = 0.0, x2_ = 0.0, t_min_ = 0.0, t_max_ = 0.0;
  std::shared_ptr<const FourierSeries> series_;
  std::vector<double> t_, x_, v_, a_, j_;
};

/// Shapes are normalised so that (max - min) / 2 = amplitude and the range is
/// centred on zero, with the maximum at t = 0. Smoothing applies a Gaussian
/// taper exp(-(k s pi/4)^2 / 2) to harmonic k; smoothing = 0 keeps every
/// harmonic below the Nyquist limit.
PeriodicWaveform make_waveform(WaveformKind kind, double amplitude, double omega, double smoothing = 0.1,
                               std::size_t n = 2048);

/// Samples x_i at t_i = i T / N (N even, one period, no closing duplicate).
PeriodicWaveform make_tabulated_waveform(double period, const std::vector<double>& samples);

/// Two-column CSV (t, x) on a uniform grid. A final row repeating the first
/// value one period later is dropped.
PeriodicWaveform read_waveform_csv(const std::string& path);

bool is_symmetric(const PeriodicWaveform& w, double tol = 1e-9);

/// Inelastic operator D(x, xdot, xddot) = m xddot + c xdot + c_q xdot |xdot|.
struct DynamicsModel {
  double m = 1.0;
  double c = 1.0;
  double c_q = 0.0;

  void validate() const;
  bool zero_inertia() const { return m == 0.0; }
  double force(double v, double a) const { return m * a + c * v + c_q * v * std::abs(v); }
  /// Dissipative part of the load only.
  double damping(double v) const { return c * v + c_q * v * std::abs(v); }
};

/// G(t) with analytic rate m x''' + c x'' + 2 c_q |x'| x''.
LoadWaveform inelastic_load(const DynamicsModel& d, const PeriodicWaveform& w);

/// Dissipated power (c xdot + c_q xdot|xdot|) xdot at each sample.
std::vector<double> dissipated_power(const DynamicsModel& d, const PeriodicWaveform& w);

nlohmann::json to_json(const DynamicsModel& d);
DynamicsModel dynamics_from_json(const nlohmann::json& j);

}  // namespace resonant
