#include "resonant/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace resonant {

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "unknown";
}

std::string to_string(ElasticProfile::Representation r) {
  switch (r) {
    case ElasticProfile::Representation::polynomial: return "polynomial";
    case ElasticProfile::Representation::piecewise_linear: return "piecewise-linear";
    case ElasticProfile::Representation::smoothed_piecewise: return "smoothed-piecewise";
    case ElasticProfile::Representation::tabulated: return "tabulated";
  }
  return "unknown";
}

nlohmann::json BoundReport::to_json() const {
  nlohmann::json j{{"optimal", optimal}, {"max_violation", max_violation}, {"worst", worst},
                   {"tol", tol},         {"points", points}};
  if (zero_margin_plus) {
    j["zero_margin_plus"] = *zero_margin_plus;
    j["zero_margin_minus"] = zero_margin_minus.value_or(0.0);
    j["zero_tol"] = zero_tol;
    j["zero_ok"] = zero_ok;
  }
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

ElasticProfile::ElasticProfile(Representation rep, std::string family, double x1, double x2, Fn value, Fn slope,
                               std::vector<double> breakpoints)
    : rep_(rep), family_(std::move(family)), x1_(x1), x2_(x2), value_(std::move(value)), slope_(std::move(slope)),
      breaks_(std::move(breakpoints)) {
  if (!(x2_ > x1_)) throw std::invalid_argument("elastic profile: empty domain");
}

nlohmann::json ElasticProfile::to_json(std::size_t samples) const {
  nlohmann::json j;
  j["family"] = family_;
  j["representation"] = to_string(rep_);
  j["domain"] = {x1_, x2_};
  j["parameters"] = parameters.is_null() ? nlohmann::json::object() : parameters;
  if (!coefficients.empty()) j["coefficients"] = coefficients;
  if (!breaks_.empty()) j["breakpoints"] = breaks_;
  j["realizable"] = realizable;
  if (!regime.empty()) j["regime"] = regime;
  auto& eq = j["equilibria"] = nlohmann::json::array();
  for (const auto& e : equilibria) {
    nlohmann::json q{{"x", e.x}, {"stability", to_string(e.stability)}};
    if (e.is_interval()) q["x_hi"] = e.x_hi;
    eq.push_back(q);
  }
  if (bound) j["bound"] = bound->to_json();
  if (samples >= 2) {
    auto& tab = j["samples"] = nlohmann::json::array();
    for (std::size_t i = 0; i < samples; ++i) {
      double x = x1_ + (x2_ - x1_) * static_cast<double>(i) / static_cast<double>(samples - 1);
      tab.push_back({x, (*this)(x)});
    }
  }
  return j;
}

ElasticProfile polynomial_profile(std::vector<double> c, double x1, double x2, std::string family) {
  auto value = [c](double x) {
    double s = 0.0;
    for (auto k = c.size(); k-- > 0;) s = s * x + c[k];
    return s;
  };
  auto slope = [c](double x) {
    double s = 0.0;
    for (auto k = c.size(); k-- > 1;) s = s * x + static_cast<double>(k) * c[k];
    return s;
  };
  ElasticProfile p(ElasticProfile::Representation::polynomial, std::move(family), x1, x2, value, slope);
  p.coefficients = std::move(c);
  return p;
}

}  // namespace resonant
