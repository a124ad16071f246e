#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace resonant {

/// Value and first three time derivatives at one instant.
struct Derivs {
  double x = 0.0, v = 0.0, a = 0.0, j = 0.0;
};

/// Finite real Fourier series  mean + sum_k a_k cos(k w t) + b_k sin(k w t).
class FourierSeries {
 public:
  FourierSeries() = default;
  FourierSeries(double omega, double mean, std::vector<double> a, std::vector<double> b);

  /// Trigonometric interpolant of N uniform samples over one period (t_i = i T / N).
  static FourierSeries from_samples(double period, std::span<const double> samples);

  double omega() const { return omega_; }
  double mean() const { return mean_; }
  std::size_t harmonics() const { return a_.size(); }
  const std::vector<double>& cos_coeffs() const { return a_; }
  const std::vector<double>& sin_coeffs() const { return b_; }

  Derivs eval(double t) const;
  double value(double t) const { return eval(t).x; }

  /// Series of t -> scale * x(t + dt) + offset.
  FourierSeries transformed(double dt, double scale, double offset) const;

 private:
  double omega_ = 1.0;
  double mean_ = 0.0;
  std::vector<double> a_, b_;
};

}  // namespace resonant
