#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace resonant {

enum class Stability { stable, unstable, marginal };
std::string to_string(Stability s);

/// A zero of F_s. Zero runs (e.g. a freeplay dead band) are reported as the
/// closed interval [x, x_hi] with marginal stability.
struct Equilibrium {
  double x = 0.0;
  double x_hi = 0.0;
  Stability stability = Stability::marginal;
  bool is_interval() const { return x_hi > x; }
};

/// Outcome of an elastic-bound check. `worst` is the displacement (PEA) or
/// load (SEA) of the largest violation; a negative max_violation is the
/// smallest clearance to either bound.
struct BoundReport {
  bool optimal = false;
  double max_violation = 0.0;
  double worst = 0.0;
  double tol = 0.0;
  std::size_t points = 0;
  /// SEA only: -(F_s^-1)'(0) - X'(0) on each branch, and whether it met tol0.
  std::optional<double> zero_margin_plus, zero_margin_minus;
  double zero_tol = 0.0;
  bool zero_ok = true;
  std::string detail;
  nlohmann::json to_json() const;
};

/// PEA elastic load F_s(x) on [x1, x2].
class ElasticProfile {
 public:
  enum class Representation { polynomial, piecewise_linear, smoothed_piecewise, tabulated };
  using Fn = std::function<double(double)>;

  ElasticProfile() = default;
  ElasticProfile(Representation rep, std::string family, double x1, double x2, Fn value, Fn slope,
                 std::vector<double> breakpoints = {});

  double operator()(double x) const { return value_(x); }
  double slope(double x) const { return slope_(x); }

  Representation representation() const { return rep_; }
  const std::string& family() const { return family_; }
  double x1() const { return x1_; }
  double x2() const { return x2_; }
  /// Points where F_s or its slope is not smooth; quadrature is split here.
  const std::vector<double>& breakpoints() const { return breaks_; }

  /// Family parameters (k, delta, alpha, ...), echoed in reports.
  nlohmann::json parameters;
  /// Polynomial coefficients c_k of sum c_k x^k (polynomial representation only).
  std::vector<double> coefficients;
  /// False where the construction needs unbounded stiffness.
  bool realizable = true;
  /// Regime label for families that have one (e.g. bistable / hardening).
  std::string regime;
  std::vector<Equilibrium> equilibria;
  std::optional<BoundReport> bound;

  nlohmann::json to_json(std::size_t samples = 257) const;

 private:
  Representation rep_ = Representation::polynomial;
  std::string family_;
  double x1_ = 0.0, x2_ = 0.0;
  Fn value_, slope_;
  std::vector<double> breaks_;
};

std::string to_string(ElasticProfile::Representation r);

/// F_s(x) = sum_k c[k] x^k.
ElasticProfile polynomial_profile(std::vector<double> c, double x1, double x2, std::string family = "polynomial");

}  // namespace resonant
