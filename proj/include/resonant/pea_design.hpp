#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resonant/models.hpp"
#include "resonant/profile.hpp"
#include "resonant/workloop.hpp"

namespace resonant {

enum class Side { upper, lower };
std::string to_string(Side s);
Side side_from_string(const std::string& s);

/// Default tolerance of the bound check: 1e-9 of the largest half-width.
double default_bound_tol(const PeaLoop& loop);

/// Elastic-bound check G-(x) <= -F_s(x) <= G+(x) on the loop grid and at the
/// profile's breakpoints. tol < 0 selects default_bound_tol.
BoundReport check_elastic_bound(const ElasticProfile& fs, const PeaLoop& loop, double tol = -1.0);

/// F_s = k x on the loop range.
ElasticProfile linear_profile(const PeaLoop& loop, double k);

/// Blend of the resonant linear spring with the cubic (degree 3) or quintic
/// (degree 5) member: (1 - a) m w^2 x + a m w^2 x^n / xhat^(n-1). Needs a
/// loop built from a DynamicsModel.
ElasticProfile polynomial_family(const PeaLoop& loop, int degree, double blend);

struct BlendLimit {
  double blend = 0.0;
  /// The passing blends formed a single interval [0, blend] on the probe grid.
  bool monotone = true;
  std::string detail;
};
/// Largest blend in [0, 1] that passes the bound check, to 1e-6.
BlendLimit max_admissible_blend(const PeaLoop& loop, int degree);

/// Zeros of the branches: G+(l_plus) = 0 and G-(l_minus) = 0.
struct CriticalDisplacements {
  std::optional<double> l_plus, l_minus;
  /// Largest dead band keeping the freeplay profile inside the bounds:
  /// min(l_plus, -l_minus), or 0 when a branch has no zero.
  double delta_max = 0.0;
  std::string detail;
};
CriticalDisplacements critical_displacements(const PeaLoop& loop);

/// Zero force on |x| <= delta, k (x -+ delta) outside.
ElasticProfile freeplay(const PeaLoop& loop, double k, double delta);
/// Stiffness of the freeplay line from (delta, 0) through the loop tip (x2, -G+(x2)).
double freeplay_stiffness(const PeaLoop& loop, double delta);

/// Loop boundaries outside +-delta (-G- on the left, -G+ on the right), joined
/// by their chord across [-delta, delta], with C1 blends of half-width w placed
/// just inside +-delta. w < 0 selects 0.02 xhat.
ElasticProfile bistable_family(const PeaLoop& loop, double delta, double w = -1.0);

/// F_s = -G+ (upper) or -G- (lower).
ElasticProfile one_way_drive(const PeaLoop& loop, Side side);

/// Sign changes and zero runs of F_s over its domain.
std::vector<Equilibrium> equilibria(const ElasticProfile& fs);

/// Zero-inertia check: with no inertia the midline vanishes on symmetric
/// kinematics, so every in-bound profile is energetically neutral.
struct DissipationReport {
  bool zero_inertia = false;
  double max_midline = 0.0;
  double tol = 0.0;
  bool midline_zero = false;
  /// P_b without elasticity minus P_b with the profile (when one is given).
  std::optional<double> pb_saving;
  nlohmann::json to_json() const;
};
DissipationReport dissipation_dominated_report(const PeaLoop& loop, const ElasticProfile* fs = nullptr);

/// Actuator load F = G + F_s(x) with rate dG/dt + F_s'(x) xdot.
LoadWaveform pea_actuator_load(const LoadWaveform& G, const PeriodicWaveform& w, const ElasticProfile& fs);

void write_profile_csv(std::ostream& os, const ElasticProfile& fs, std::size_t samples = 1025);
/// Polynomial profiles are rebuilt from their coefficients; any other
/// representation from its samples (linear for piecewise-linear, monotone
/// cubic otherwise).
ElasticProfile profile_from_json(const nlohmann::json& j);
/// Two-column CSV (x, F_s), interpolated by monotone cubic.
ElasticProfile read_profile_csv(const std::string& path);

}  // namespace resonant
