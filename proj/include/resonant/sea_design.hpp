#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resonant/models.hpp"
#include "resonant/pea_design.hpp"
#include "resonant/profile.hpp"
#include "resonant/workloop.hpp"

namespace resonant {

/// SEA compliance: the gradient (F_s^-1)'(F) and the displacement
/// F_s^-1(F) on [F1, F2]. The displacement includes the offset C.
class ComplianceProfile {
 public:
  enum class SignClass { always_stable, always_unstable, indefinite };
  using Fn = std::function<double(double)>;

  ComplianceProfile() = default;
  ComplianceProfile(std::string family, double f1, double f2, Fn gradient, Fn displacement);

  double gradient(double F) const { return grad_(F); }
  double displacement(double F) const { return disp_(F) + offset_; }

  const std::string& family() const { return family_; }
  double f1() const { return f1_; }
  double f2() const { return f2_; }
  double offset() const { return offset_; }
  /// Copy with the displacement shifted by C.
  ComplianceProfile with_offset(double C) const;
  /// Sign of the gradient over the interior of [F1, F2].
  SignClass sign_class() const { return sign_; }

  /// Set for linear springs: k1 = 1 / gradient.
  std::optional<double> stiffness;
  nlohmann::json parameters;

  nlohmann::json to_json(std::size_t samples = 257) const;

 private:
  std::string family_;
  double f1_ = 0.0, f2_ = 0.0, offset_ = 0.0;
  Fn grad_, disp_;
  SignClass sign_ = SignClass::always_stable;
};

std::string to_string(ComplianceProfile::SignClass s);

/// Linear spring of stiffness k1: gradient 1/k1, displacement F/k1.
ComplianceProfile linear_compliance(double k1, double f1, double f2);
/// Gradient given as a function; displacement is its running integral from 0.
ComplianceProfile functional_compliance(std::string family, double f1, double f2, ComplianceProfile::Fn gradient);

/// SEA elastic bounds X'- <= -g <= X'+ on [F1, 0] and X'+ <= -g <= X'- on
/// [0, F2], away from the loop ends; the zero-load equality is reported
/// separately. tol < 0 selects 1e-9 max|X'|.
BoundReport check_sea_bound(const ComplianceProfile& cp, const SeaLoop& loop, double tol = -1.0);

/// Envelope for -(F_s^-1(F) - F_s^-1(0)) implied by integrating the bounds
/// from zero load. Necessary, not sufficient.
struct IntegratedBound {
  std::vector<double> f, lower, upper;
  bool contains(const ComplianceProfile& cp, double tol = 1e-9) const;
};
IntegratedBound integrated_bound(const SeaLoop& loop);

struct LinearCompliance {
  double compliance = 0.0;
  double stiffness = 0.0;
};
/// compliance = m / (m^2 w^2 + c^2). Requires m > 0.
LinearCompliance optimal_linear_compliance(double m, double c, double omega);

/// w = w0 sqrt(1 - 4 zeta^2), for 0 <= zeta < 1/2.
double global_resonant_frequency(double omega0, double zeta);

/// Gradient -X'+ (upper) or -X'- (lower), offset so that F_s^-1 = -X+-.
/// Refused when the loop is inaccessible.
ComplianceProfile dwell_time_compliance(const SeaLoop& loop, Side side);

/// u(t) = x(t) + F_s^-1(F(t)); the rate is xdot + (F_s^-1)'(F) Fdot.
DisplacementWaveform actuator_displacement(const ComplianceProfile& cp, const LoadWaveform& F,
                                           const PeriodicWaveform& w);
/// Actuator velocity as a signal of its own (samples are u's rates).
VelocityWaveform actuator_velocity(const DisplacementWaveform& u);

/// Spring law F = F_s(u - x) obtained by inverting the displacement table.
/// Requires an always-stable profile.
std::function<double(double)> spring_force(const ComplianceProfile& cp);

void write_compliance_csv(std::ostream& os, const ComplianceProfile& cp, std::size_t samples = 1025);
ComplianceProfile compliance_from_json(const nlohmann::json& j);

}  // namespace resonant
