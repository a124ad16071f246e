#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resonant/models.hpp"
#include "resonant/signal.hpp"

namespace resonant {

/// '+' / '-' branch of a loop. For PEA loops '+' is the half-cycle with
/// increasing x; for SEA loops it is the half-cycle with decreasing F.
enum class Branch { upper, lower };

namespace detail {
/// Continuous branch evaluator shared by loops built from time-domain data
/// and loops built from tables.
class BranchSource {
 public:
  virtual ~BranchSource() = default;
  /// Dependent variable on a branch (G for PEA, X for SEA).
  virtual double value(Branch b, double s) const = 0;
  /// Time derivative of the independent variable on the branch (NaN if unknown).
  virtual double indep_rate(Branch b, double s) const = 0;
  /// Time derivative of the dependent variable on the branch (NaN if unknown).
  virtual double dep_rate(Branch b, double s) const = 0;
  /// Time at which the branch passes s, if a time map exists.
  virtual std::optional<double> time(Branch b, double s) const = 0;
  /// d(value)/ds, finite except where the independent rate vanishes.
  virtual double slope(Branch b, double s) const = 0;
  /// |slope| approached at the lower (at_max = false) or upper end.
  virtual double end_slope(Branch b, bool at_max) const = 0;
};
}  // namespace detail

struct LoopOrigin {
  DynamicsModel model;
  WaveformKind kind;
  double omega;
  double amplitude;
};

/// Inelastic PEA work loop G(x) split into single-valued branches.
class PeaLoop {
 public:
  PeaLoop() = default;

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& g_plus() const { return gp_; }
  const std::vector<double>& g_minus() const { return gm_; }
  const std::vector<double>& g_mid() const { return gmid_; }
  const std::vector<double>& g_arc() const { return garc_; }
  const std::vector<double>& v_plus() const { return vp_; }
  const std::vector<double>& v_minus() const { return vm_; }
  double x1() const { return x_.front(); }
  double x2() const { return x_.back(); }
  double period() const { return period_; }
  double max_arc() const;

  double g(Branch b, double x) const { return src_->value(b, x); }
  double g_plus_at(double x) const { return g(Branch::upper, x); }
  double g_minus_at(double x) const { return g(Branch::lower, x); }
  double g_mid_at(double x) const { return 0.5 * (g_plus_at(x) + g_minus_at(x)); }
  double g_arc_at(double x) const { return 0.5 * (g_plus_at(x) - g_minus_at(x)); }
  double velocity(Branch b, double x) const { return src_->indep_rate(b, x); }
  std::optional<double> time(Branch b, double x) const { return src_->time(b, x); }
  double slope(Branch b, double x) const { return src_->slope(b, x); }
  double end_slope(Branch b, bool at_max) const { return src_->end_slope(b, at_max); }
  bool has_time_map() const { return time(Branch::upper, x1()).has_value(); }

  /// (1/T) integral of (G+ - G-) dx.
  double area() const;

  const std::optional<LoopOrigin>& origin() const { return origin_; }

  /// Loop from raw branch tables (monotone cubic interpolation); no
  /// admissibility checks are run.
  static PeaLoop from_tables(std::vector<double> x, std::vector<double> g_plus, std::vector<double> g_minus,
                             double period);
  /// Loop from midline and half-width tables.
  static PeaLoop from_mid_arc(const std::vector<double>& x, const std::vector<double>& g_mid,
                              const std::vector<double>& g_arc, double period);

 private:
  friend PeaLoop build_pea_loop(const LoadWaveform&, const PeriodicWaveform&, std::size_t);
  friend PeaLoop build_pea_loop(const DynamicsModel&, const PeriodicWaveform&, std::size_t);
  void fill_tables(std::size_t m, double x1, double x2);

  std::shared_ptr<const detail::BranchSource> src_;
  std::vector<double> x_, gp_, gm_, gmid_, garc_, vp_, vm_;
  double period_ = 0.0;
  std::optional<LoopOrigin> origin_;
};

constexpr std::size_t kLoopGrid = 1024;

PeaLoop build_pea_loop(const LoadWaveform& G, const PeriodicWaveform& w, std::size_t grid = kLoopGrid);
/// As above, and records the model so closed-form families can be built.
PeaLoop build_pea_loop(const DynamicsModel& d, const PeriodicWaveform& w, std::size_t grid = kLoopGrid);

struct CheckResult {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

struct AdmissibilityReport {
  std::vector<CheckResult> checks;
  bool admissible = false;
  nlohmann::json to_json() const;
};

AdmissibilityReport check_admissible_pea(const PeaLoop& loop);

/// Inelastic SEA loop x(F) split by the sign of dF/dt.
class SeaLoop {
 public:
  SeaLoop() = default;

  const std::vector<double>& f() const { return f_; }
  const std::vector<double>& x_plus() const { return xp_; }
  const std::vector<double>& x_minus() const { return xm_; }
  const std::vector<double>& xprime_plus() const { return xpp_; }
  const std::vector<double>& xprime_minus() const { return xpm_; }
  /// X'± by finite differences of the X± tables (cross-check of the rate ratio).
  const std::vector<double>& xprime_fd_plus() const { return fdp_; }
  const std::vector<double>& xprime_fd_minus() const { return fdm_; }
  const std::vector<double>& xdot_plus() const { return vxp_; }
  const std::vector<double>& xdot_minus() const { return vxm_; }
  const std::vector<double>& fdot_plus() const { return vfp_; }
  const std::vector<double>& fdot_minus() const { return vfm_; }
  /// 1 where dF/dt vanishes on the branch (loop end), 0 elsewhere.
  const std::vector<unsigned char>& endpoint_flag() const { return flag_; }

  double f1() const { return f_.front(); }
  double f2() const { return f_.back(); }
  double period() const { return period_; }
  /// Times bounding the '+' window {dF/dt < 0} = [t_start, t_end) modulo T.
  double plus_window_start() const { return t_fmax_; }
  double plus_window_end() const { return t_fmin_; }

  double x(Branch b, double F) const { return src_->value(b, F); }
  double xprime(Branch b, double F) const { return src_->slope(b, F); }
  double xdot(Branch b, double F) const { return src_->dep_rate(b, F); }
  double fdot(Branch b, double F) const { return src_->indep_rate(b, F); }
  std::optional<double> time(Branch b, double F) const { return src_->time(b, F); }

  static SeaLoop from_tables(std::vector<double> f, std::vector<double> x_plus, std::vector<double> x_minus,
                             double period);

 private:
  friend SeaLoop build_sea_loop(const LoadWaveform&, const PeriodicWaveform&, std::size_t);
  void fill_tables(std::vector<double> grid);

  std::shared_ptr<const detail::BranchSource> src_;
  std::vector<double> f_, xp_, xm_, xpp_, xpm_, fdp_, fdm_, vxp_, vxm_, vfp_, vfm_;
  std::vector<unsigned char> flag_;
  double period_ = 0.0, t_fmax_ = 0.0, t_fmin_ = 0.0;
};

SeaLoop build_sea_loop(const LoadWaveform& F, const PeriodicWaveform& w, std::size_t grid = kLoopGrid);

/// Number of grid cells at each end of an SEA loop excluded from pointwise
/// bound checks.
constexpr std::size_t kSeaGuardCells = 2;

struct AccessibilityReport {
  bool accessible = false;
  double margin_negative = 0.0;  ///< min over [F1,0) of X'+ - X'-
  double margin_positive = 0.0;  ///< min over (0,F2] of X'- - X'+
  double zero_gap = 0.0;         ///< |X'+(0) - X'-(0)|
  double zero_tol = 0.0;
  bool boundary_case = false;    ///< equality at F = 0 met (always when accessible)
  std::string detail;
  nlohmann::json to_json() const;
};

/// Solvability of the SEA bound: X'- <= X'+ on [F1,0], X'+ <= X'- on [0,F2],
/// with equality at F = 0.
AccessibilityReport sea_accessibility(const SeaLoop& loop, double tol_rel = 1e-9);

}  // namespace resonant
