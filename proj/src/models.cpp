#include "resonant/models.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "resonant/errors.hpp"
#include "resonant/numerics.hpp"

namespace resonant {

std::string to_string(WaveformKind k) {
  switch (k) {
    case WaveformKind::harmonic: return "harmonic";
    case WaveformKind::smoothed_triangle: return "smoothed-triangle";
    case WaveformKind::smoothed_square: return "smoothed-square";
    case WaveformKind::smoothed_sawtooth: return "smoothed-sawtooth";
    case WaveformKind::tabulated: return "tabulated";
  }
  return "unknown";
}

WaveformKind waveform_kind_from_string(const std::string& s) {
  for (auto k : {WaveformKind::harmonic, WaveformKind::smoothed_triangle, WaveformKind::smoothed_square,
                 WaveformKind::smoothed_sawtooth, WaveformKind::tabulated})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown waveform kind '" + s + "'");
}

namespace {

numerics::TurningPoints scan_turning_points(const FourierSeries& s, std::size_t n) {
  const std::size_t m = std::max<std::size_t>(4 * n, 8 * s.harmonics() + 64);
  return numerics::turning_points([&s](double t) { return s.eval(t).v; }, 2.0 * M_PI / s.omega(), m);
}

}  // namespace

PeriodicWaveform PeriodicWaveform::from_series(WaveformKind kind, FourierSeries series, std::size_t n,
                                               double smoothing) {
  if (n < 64 || n % 2 != 0) throw std::invalid_argument("waveform: N must be even and >= 64");
  numerics::TurningPoints e = scan_turning_points(series, n);
  if (e.segments != 2) {
    std::ostringstream os;
    os << to_string(kind) << " waveform has " << e.segments
       << " monotone segments per period; exactly two are required for a bivalued loop";
    throw InadmissibleError(InadmissibleError::Kind::non_monotonic, os.str());
  }
  PeriodicWaveform w;
  w.kind_ = kind;
  w.smoothing_ = smoothing;
  w.series_ = std::make_shared<const FourierSeries>(std::move(series));
  w.t_min_ = e.t_min;
  w.t_max_ = e.t_max;
  w.x1_ = w.series_->eval(e.t_min).x;
  w.x2_ = w.series_->eval(e.t_max).x;
  w.amplitude_ = 0.5 * (w.x2_ - w.x1_);
  const double h = w.period() / static_cast<double>(n);
  w.t_.resize(n);
  w.x_.resize(n);
  w.v_.resize(n);
  w.a_.resize(n);
  w.j_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.t_[i] = static_cast<double>(i) * h;
    Derivs d = w.series_->eval(w.t_[i]);
    w.x_[i] = d.x;
    w.v_[i] = d.v;
    w.a_[i] = d.a;
    w.j_[i] = d.j;
  }
  return w;
}

PeriodicSignal PeriodicWaveform::displacement() const {
  auto s = series_;
  return PeriodicSignal(
      period(), x_, v_, [s](double t) { return s->eval(t).x; }, [s](double t) { return s->eval(t).v; });
}

PeriodicSignal PeriodicWaveform::velocity() const {
  auto s = series_;
  return PeriodicSignal(
      period(), v_, a_, [s](double t) { return s->eval(t).v; }, [s](double t) { return s->eval(t).a; });
}

PeriodicWaveform make_waveform(WaveformKind kind, double amplitude, double omega, double smoothing, std::size_t n) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("waveform: amplitude must be positive");
  if (!(omega > 0.0)) throw std::invalid_argument("waveform: omega must be positive");
  if (n < 64 || n % 2 != 0) throw std::invalid_argument("waveform: N must be even and >= 64");
  if (!(smoothing >= 0.0 && smoothing <= 1.0)) throw std::invalid_argument("waveform: smoothing must lie in [0, 1]");

  if (kind == WaveformKind::harmonic) {
    PeriodicWaveform w = PeriodicWaveform::from_series(kind, FourierSeries(omega, 0.0, {amplitude}, {0.0}), n, 0.0);
    return w;
  }
  if (kind == WaveformKind::tabulated) throw std::invalid_argument("waveform: use make_tabulated_waveform");

  const double sig = smoothing * M_PI / 4.0;
  std::size_t K = n / 2 - 1;
  if (sig > 0.0) K = std::min(K, static_cast<std::size_t>(std::ceil(8.85 / sig)));
  std::vector<double> a(K, 0.0), b(K, 0.0);
  for (std::size_t k = 1; k <= K; ++k) {
    const double dk = static_cast<double>(k);
    const double taper = std::exp(-0.5 * (dk * sig) * (dk * sig));
    switch (kind) {
      case WaveformKind::smoothed_triangle:
        if (k % 2 == 1) a[k - 1] = taper * 8.0 / (M_PI * M_PI * dk * dk);
        break;
      case WaveformKind::smoothed_square:
        if (k % 2 == 1) a[k - 1] = taper * 4.0 / (M_PI * dk) * (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
        break;
      case WaveformKind::smoothed_sawtooth:
        b[k - 1] = taper / dk;
        break;
      default: break;
    }
  }
  FourierSeries raw(omega, 0.0, std::move(a), std::move(b));
  numerics::TurningPoints e = scan_turning_points(raw, n);
  if (e.segments != 2) {
    std::ostringstream os;
    os << to_string(kind) << " with smoothing " << smoothing << " has " << e.segments
       << " monotone segments per period; exactly two are required for a bivalued loop";
    throw InadmissibleError(InadmissibleError::Kind::non_monotonic, os.str());
  }
  const double xmax = raw.eval(e.t_max).x, xmin = raw.eval(e.t_min).x;
  const double scale = amplitude / (0.5 * (xmax - xmin));
  const double offset = -0.5 * (xmax + xmin) * scale;
  // Even shapes already peak at t = 0; only the sawtooth is re-phased.
  const double dt = (kind == WaveformKind::smoothed_sawtooth) ? e.t_max : 0.0;
  return PeriodicWaveform::from_series(kind, raw.transformed(dt, scale, offset), n, smoothing);
}

PeriodicWaveform make_tabulated_waveform(double period, const std::vector<double>& samples) {
  if (!(period > 0.0)) throw std::invalid_argument("waveform: period must be positive");
  if (samples.size() < 64 || samples.size() % 2 != 0)
    throw std::invalid_argument("waveform: tabulated input needs an even number (>= 64) of samples");
  return PeriodicWaveform::from_series(WaveformKind::tabulated, FourierSeries::from_samples(period, samples),
                                       samples.size(), 0.0);
}

PeriodicWaveform read_waveform_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open waveform CSV '" + path + "'");
  std::vector<double> t, x;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a >> b)) continue;  // header or junk
    t.push_back(a);
    x.push_back(b);
  }
  if (t.size() < 3) throw std::runtime_error("waveform CSV '" + path + "' has too few rows");
  const double h = t[1] - t[0];
  if (!(h > 0.0)) throw std::runtime_error("waveform CSV: times must increase");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-6 * h) throw std::runtime_error("waveform CSV: grid is not uniform");
  double range = *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
  if (std::abs(x.back() - x.front()) <= 1e-9 * range && t.size() % 2 == 1) {
    t.pop_back();
    x.pop_back();
  }
  return make_tabulated_waveform(h * static_cast<double>(t.size()), x);
}

bool is_symmetric(const PeriodicWaveform& w, double tol) {
  const auto& x = w.x();
  const std::size_t n = x.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(x[i] - x[(n - i) % n]));
  return worst <= tol * w.amplitude();
}

void DynamicsModel::validate() const {
  if (!(m >= 0.0) || !(c >= 0.0) || !(c_q >= 0.0))
    throw std::invalid_argument("dynamics: m, c and c_q must be non-negative");
  if (!(c > 0.0 || c_q > 0.0)) throw std::invalid_argument("dynamics: at least one of c, c_q must be positive");
}

LoadWaveform inelastic_load(const DynamicsModel& d, const PeriodicWaveform& w) {
  d.validate();
  const std::size_t n = w.samples();
  std::vector<double> g(n), gd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = w.xdot()[i], a = w.xddot()[i], j = w.xdddot()[i];
    g[i] = d.m * a + d.c * v + d.c_q * v * std::abs(v);
    gd[i] = d.m * j + d.c * a + 2.0 * d.c_q * std::abs(v) * a;
  }
  auto s = w.series_ptr();
  return LoadWaveform(
      w.period(), std::move(g), std::move(gd),
      [s, d](double t) {
        Derivs q = s->eval(t);
        return d.m * q.a + d.c * q.v + d.c_q * q.v * std::abs(q.v);
      },
      [s, d](double t) {
        Derivs q = s->eval(t);
        return d.m * q.j + d.c * q.a + 2.0 * d.c_q * std::abs(q.v) * q.a;
      });
}

std::vector<double> dissipated_power(const DynamicsModel& d, const PeriodicWaveform& w) {
  std::vector<double> p(w.samples());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = d.damping(w.xdot()[i]) * w.xdot()[i];
  return p;
}

nlohmann::json to_json(const DynamicsModel& d) { return {{"m", d.m}, {"c", d.c}, {"c_q", d.c_q}}; }

DynamicsModel dynamics_from_json(const nlohmann::json& j) {
  DynamicsModel d;
  d.m = j.value("m", 0.0);
  d.c = j.value("c", 0.0);
  d.c_q = j.value("c_q", 0.0);
  d.validate();
  return d;
}

}  // namespace resonant
