#pragma once

#include <memory>
#include <vector>

namespace resonant {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes) on
/// strictly increasing abscissae. Arguments outside the table are clamped.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double prime(double x) const;
  double x_min() const { return lo_; }
  double x_max() const { return hi_; }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  double lo_ = 0.0, hi_ = 0.0;
};

/// Piecewise-linear interpolant; clamped outside the table.
class LinearTable {
 public:
  LinearTable() = default;
  LinearTable(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double prime(double x) const;

 private:
  std::size_t cell(double x) const;
  std::vector<double> x_, y_;
};

}  // namespace resonant
