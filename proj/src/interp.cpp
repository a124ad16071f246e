#include "resonant/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

// Boost 1.74's pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

namespace resonant {

struct MonotoneCubic::Impl {
  boost::math::interpolators::pchip<std::vector<double>> p;
};

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size() || x.size() < 4) throw std::invalid_argument("interpolation: need >= 4 matching samples");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("interpolation: abscissae must increase strictly");
  lo_ = x.front();
  hi_ = x.back();
  impl_ = std::make_shared<const Impl>(Impl{{std::move(x), std::move(y)}});
}

double MonotoneCubic::operator()(double x) const { return impl_->p(std::clamp(x, lo_, hi_)); }
double MonotoneCubic::prime(double x) const { return impl_->p.prime(std::clamp(x, lo_, hi_)); }

LinearTable::LinearTable(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size() || x_.size() < 2) throw std::invalid_argument("interpolation: need >= 2 matching samples");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("interpolation: abscissae must increase strictly");
}

std::size_t LinearTable::cell(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x_.begin() - 1, 0));
  return std::min(i, x_.size() - 2);
}

double LinearTable::operator()(double x) const {
  x = std::clamp(x, x_.front(), x_.back());
  const std::size_t i = cell(x);
  const double f = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return (1.0 - f) * y_[i] + f * y_[i + 1];
}

double LinearTable::prime(double x) const {
  const std::size_t i = cell(std::clamp(x, x_.front(), x_.back()));
  return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
}

}  // namespace resonant
