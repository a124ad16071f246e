#include "resonant/fourier.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace resonant {
namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FourierSeries::FourierSeries(double omega, double mean, std::vector<double> a, std::vector<double> b)
    : omega_(omega), mean_(mean), a_(std::move(a)), b_(std::move(b)) {
  if (a_.size() != b_.size()) throw std::invalid_argument("fourier: coefficient length mismatch");
}

FourierSeries FourierSeries::from_samples(double period, std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("fourier: need an even number of samples >= 4");
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    // planner calls are not thread-safe in FFTW
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double dn = static_cast<double>(n);
  const std::size_t kmax = n / 2;
  std::vector<double> a(kmax), b(kmax);
  for (std::size_t k = 1; k < kmax; ++k) {
    a[k - 1] = 2.0 * out[k].real() / dn;
    b[k - 1] = -2.0 * out[k].imag() / dn;
  }
  a[kmax - 1] = out[kmax].real() / dn;
  b[kmax - 1] = 0.0;
  return FourierSeries(2.0 * M_PI / period, out[0].real() / dn, std::move(a), std::move(b));
}

Derivs FourierSeries::eval(double t) const {
  Derivs d;
  d.x = mean_;
  const double th = omega_ * t;
  const double c1 = std::cos(th), s1 = std::sin(th);
  double c = c1, s = s1;
  const std::size_t K = a_.size();
  for (std::size_t k = 1; k <= K; ++k) {
    if (k > 1) {
      if (k % 32 == 0) {
        c = std::cos(static_cast<double>(k) * th);
        s = std::sin(static_cast<double>(k) * th);
      } else {
        double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
      }
    }
    const double a = a_[k - 1], b = b_[k - 1];
    if (a == 0.0 && b == 0.0) continue;
    const double kw = static_cast<double>(k) * omega_;
    const double val = a * c + b * s;
    const double der = kw * (b * c - a * s);
    d.x += val;
    d.v += der;
    d.a -= kw * kw * val;
    d.j -= kw * kw * der;
  }
  return d;
}

FourierSeries FourierSeries::transformed(double dt, double scale, double offset) const {
  std::vector<double> a(a_.size()), b(b_.size());
  for (std::size_t k = 1; k <= a_.size(); ++k) {
    const double phi = static_cast<double>(k) * omega_ * dt;
    const double cp = std::cos(phi), sp = std::sin(phi);
    a[k - 1] = scale * (a_[k - 1] * cp + b_[k - 1] * sp);
    b[k - 1] = scale * (b_[k - 1] * cp - a_[k - 1] * sp);
  }
  return FourierSeries(omega_, scale * mean_ + offset, std::move(a), std::move(b));
}

}  // namespace resonant
