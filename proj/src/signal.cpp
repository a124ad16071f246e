#include "resonant/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "resonant/fourier.hpp"

namespace resonant {

PeriodicSignal::PeriodicSignal(double period, std::vector<double> values, std::vector<double> rates, Eval value_at,
                               Eval rate_at)
    : period_(period),
      values_(std::move(values)),
      rates_(std::move(rates)),
      value_at_(std::move(value_at)),
      rate_at_(std::move(rate_at)) {
  if (!(period_ > 0.0)) throw std::invalid_argument("signal: period must be positive");
  if (values_.size() != rates_.size()) throw std::invalid_argument("signal: values/rates length mismatch");
}

PeriodicSignal PeriodicSignal::from_samples(double period, std::vector<double> values) {
  auto series = std::make_shared<const FourierSeries>(FourierSeries::from_samples(period, values));
  std::vector<double> rates(values.size());
  const double h = period / static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) rates[i] = series->eval(static_cast<double>(i) * h).v;
  return PeriodicSignal(
      period, std::move(values), std::move(rates), [series](double t) { return series->eval(t).x; },
      [series](double t) { return series->eval(t).v; });
}

std::vector<double> PeriodicSignal::times(const PeriodicSignal& other) const {
  if (!same_grid(other)) throw std::invalid_argument("signal: mismatched grids");
  std::vector<double> p(values_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = values_[i] * other.values_[i];
  return p;
}

bool PeriodicSignal::same_grid(const PeriodicSignal& other, double rel_tol) const {
  return values_.size() == other.values_.size() &&
         std::abs(period_ - other.period_) <= rel_tol * std::max(period_, other.period_);
}

}  // namespace resonant
