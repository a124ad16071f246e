#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace resonant {

/// A periodic quantity sampled on the uniform grid t_i = i T / N, together
/// with continuous evaluators for its value and time derivative.
class PeriodicSignal {
 public:
  using Eval = std::function<double(double)>;

  PeriodicSignal() = default;
  PeriodicSignal(double period, std::vector<double> values, std::vector<double> rates, Eval value_at,
                 Eval rate_at);

  /// Samples only: the continuous form and the rate come from the
  /// trigonometric interpolant (spectral differentiation).
  static PeriodicSignal from_samples(double period, std::vector<double> values);

  double period() const { return period_; }
  std::size_t size() const { return values_.size(); }
  double step() const { return period_ / static_cast<double>(values_.size()); }
  double time(std::size_t i) const { return static_cast<double>(i) * step(); }

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& rates() const { return rates_; }
  double value_at(double t) const { return value_at_(t); }
  double rate_at(double t) const { return rate_at_(t); }

  /// Pointwise product of the samples (e.g. power from load and velocity).
  std::vector<double> times(const PeriodicSignal& other) const;
  bool same_grid(const PeriodicSignal& other, double rel_tol = 1e-12) const;

 private:
  double period_ = 0.0;
  std::vector<double> values_, rates_;
  Eval value_at_, rate_at_;
};

using LoadWaveform = PeriodicSignal;
using VelocityWaveform = PeriodicSignal;
using DisplacementWaveform = PeriodicSignal;

}  // namespace resonant
