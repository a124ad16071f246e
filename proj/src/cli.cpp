#include "resonant/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "resonant/errors.hpp"
#include "resonant/io.hpp"
#include "resonant/pea_design.hpp"
#include "resonant/power.hpp"
#include "resonant/sea_design.hpp"

namespace resonant::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& block, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(block + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(block + ": unknown field \"" + key + "\"");
}

double number(const json& obj, const std::string& block, const char* key, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(block + ": missing field \"" + key + "\"");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(block + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(block + "." + key + ": must be finite");
  return x;
}

std::size_t count(const json& obj, const std::string& block, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError(block + "." + key + ": expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string text(const json& obj, const std::string& block, const char* key, std::optional<std::string> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    throw ConfigError(block + ": missing field \"" + key + "\"");
  }
  if (!obj.at(key).is_string()) throw ConfigError(block + "." + key + ": expected a string");
  return obj.at(key).get<std::string>();
}

std::vector<std::string> parse_formats(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& f : in) {
    if (f != "csv" && f != "json" && f != "svg") throw ConfigError("unknown output format \"" + f + "\"");
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
  }
  return out;
}

const std::set<std::string> kPeaFamilies{"none",    "linear",   "polynomial", "cubic-blend",   "quintic-blend",
                                         "freeplay", "bistable", "one-way",    "one-way-upper", "one-way-lower"};
const std::set<std::string> kSeaFamilies{"linear", "dwell-time", "dwell-time-upper", "dwell-time-lower"};

void check_design(const json& d, Actuation act) {
  if (!d.is_object()) throw ConfigError("design: expected an object");
  if (d.contains("profile")) {
    check_keys(d, "design", {"profile"});
    text(d, "design", "profile");
    return;
  }
  const std::string fam = text(d, "design", "family");
  const std::string block = "design(" + fam + ")";
  if (act == Actuation::pea) {
    if (!kPeaFamilies.count(fam)) throw ConfigError("design: unknown PEA family \"" + fam + "\"");
    if (fam == "none" || fam == "one-way-upper" || fam == "one-way-lower") check_keys(d, block, {"family"});
    else if (fam == "linear") check_keys(d, block, {"family", "k"});
    else if (fam == "polynomial") {
      check_keys(d, block, {"family", "coefficients"});
      if (!d.contains("coefficients") || !d.at("coefficients").is_array() || d.at("coefficients").empty())
        throw ConfigError(block + ": coefficients must be a non-empty array");
      for (const auto& c : d.at("coefficients"))
        if (!c.is_number()) throw ConfigError(block + ": coefficients must be numbers");
    } else if (fam == "cubic-blend" || fam == "quintic-blend") {
      const char* key = fam == "cubic-blend" ? "alpha" : "beta";
      check_keys(d, block, {"family", key});
      const double a = number(d, block, key);
      if (a < 0.0 || a > 1.0) throw ConfigError(block + "." + key + ": must lie in [0, 1]");
    } else if (fam == "freeplay") {
      check_keys(d, block, {"family", "delta", "k"});
      if (number(d, block, "delta") < 0.0) throw ConfigError(block + ".delta: must be non-negative");
      if (d.contains("k") && !(number(d, block, "k") > 0.0)) throw ConfigError(block + ".k: must be positive");
    } else if (fam == "bistable") {
      check_keys(d, block, {"family", "delta", "w"});
      if (!(number(d, block, "delta") > 0.0)) throw ConfigError(block + ".delta: must be positive");
      if (d.contains("w") && number(d, block, "w") < 0.0) throw ConfigError(block + ".w: must be non-negative");
    } else if (fam == "one-way") {
      check_keys(d, block, {"family", "side"});
      const auto side = text(d, block, "side");
      if (side != "upper" && side != "lower") throw ConfigError(block + ".side: must be \"upper\" or \"lower\"");
    }
  } else {
    if (!kSeaFamilies.count(fam)) throw ConfigError("design: unknown SEA family \"" + fam + "\"");
    if (fam == "linear") {
      check_keys(d, block, {"family", "k1"});
      if (d.contains("k1") && !(number(d, block, "k1") > 0.0)) throw ConfigError(block + ".k1: must be positive");
    } else if (fam == "dwell-time") {
      check_keys(d, block, {"family", "side"});
      const auto side = text(d, block, "side");
      if (side != "upper" && side != "lower") throw ConfigError(block + ".side: must be \"upper\" or \"lower\"");
    } else {
      check_keys(d, block, {"family"});
    }
  }
}

fs::path resolve(const JobConfig& cfg, const fs::path& p) { return p.is_absolute() ? p : cfg.base_dir / p; }

json read_json_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Artifacts

class Artifacts {
 public:
  Artifacts(const JobConfig& cfg, const Overrides& ov)
      : dir_(ov.out ? *ov.out : resolve(cfg, cfg.out_dir)),
        formats_(ov.formats ? parse_formats(*ov.formats) : cfg.formats) {
    fs::create_directories(dir_);
  }
  bool wants(const std::string& f) const { return std::find(formats_.begin(), formats_.end(), f) != formats_.end(); }

  void csv(const std::string& name, const std::function<void(std::ostream&)>& body) {
    if (wants("csv")) write(name + ".csv", body);
  }
  void json_file(const std::string& name, const json& j) {
    if (wants("json")) write(name + ".json", [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }
  /// The SVG always travels with the CSV of its plotted samples.
  void svg(const std::string& name, const Plot& plot) {
    if (!wants("svg")) return;
    write(name + ".svg", [&](std::ostream& os) { write_svg(os, plot); });
    write(name + "_plot.csv", [&](std::ostream& os) { write_plot_csv(os, plot); });
  }
  const std::vector<std::string>& written() const { return written_; }

 private:
  void write(const std::string& file, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(dir_ / file);
    if (!os) throw ConfigError("cannot write " + (dir_ / file).string());
    body(os);
    written_.push_back(file);
  }
  fs::path dir_;
  std::vector<std::string> formats_;
  std::vector<std::string> written_;
};

// ---------------------------------------------------------------------------
// Shared pipeline pieces

PeriodicWaveform make_kinematics(const JobConfig& cfg) {
  if (cfg.waveform_csv) return read_waveform_csv(resolve(cfg, *cfg.waveform_csv).string());
  return make_waveform(cfg.kind, cfg.amplitude, cfg.omega, cfg.smoothing, cfg.samples);
}

Penalty penalty(const JobConfig& cfg, std::size_t n) {
  if (cfg.q.size() == 1) return Penalty::constant(cfg.q.front());
  if (cfg.q.size() != n) throw ConfigError("metrics.Q: a sampled penalty needs one value per time sample");
  return Penalty::sampled(cfg.q);
}

json base_report(const std::string& command, const JobConfig& cfg, const PeriodicWaveform& w, const Overrides& ov) {
  json j{{"command", command},
         {"actuation", cfg.actuation == Actuation::pea ? "PEA" : "SEA"},
         {"model", to_json(cfg.model)},
         {"kinematics",
          {{"kind", to_string(w.kind())},
           {"amplitude", 0.5 * (w.x_max() - w.x_min())},
           {"omega", w.omega()},
           {"smoothing", w.smoothing()},
           {"N", w.samples()},
           {"symmetric", is_symmetric(w)}}}};
  if (ov.seed) j["seed"] = *ov.seed;
  return j;
}

PowerReport time_metrics(const JobConfig& cfg, const LoadWaveform& F, const VelocityWaveform& v) {
  PowerReport r = metrics_time(F, v, penalty(cfg, F.size()));
  r.duty_cycle = duty_cycle(F, cfg.eps_rel);
  return r;
}

Side side_of(const std::string& family, const json& d) {
  if (family.ends_with("-upper")) return Side::upper;
  if (family.ends_with("-lower")) return Side::lower;
  return side_from_string(d.at("side").get<std::string>());
}

ElasticProfile build_pea_profile(const JobConfig& cfg, const PeaLoop& loop, const PeriodicWaveform& w) {
  const json& d = cfg.design;
  if (d.contains("profile")) {
    const fs::path p = resolve(cfg, d.at("profile").get<std::string>());
    if (!fs::exists(p)) throw ConfigError("design.profile: " + p.string() + " does not exist");
    ElasticProfile prof = p.extension() == ".csv" ? read_profile_csv(p.string()) : profile_from_json(read_json_file(p));
    if (prof.equilibria.empty()) prof.equilibria = equilibria(prof);
    return prof;
  }
  const std::string fam = d.value("family", "none");
  const std::string block = "design(" + fam + ")";
  if (fam == "none") return polynomial_profile({0.0}, loop.x1(), loop.x2(), "none");
  if (fam == "linear") return linear_profile(loop, number(d, block, "k", cfg.model.m * w.omega() * w.omega()));
  if (fam == "polynomial")
    return polynomial_profile(d.at("coefficients").get<std::vector<double>>(), loop.x1(), loop.x2(), "polynomial");
  if (fam == "cubic-blend") return polynomial_family(loop, 3, number(d, block, "alpha"));
  if (fam == "quintic-blend") return polynomial_family(loop, 5, number(d, block, "beta"));
  if (fam == "freeplay") {
    const double delta = number(d, block, "delta");
    return freeplay(loop, number(d, block, "k", freeplay_stiffness(loop, delta)), delta);
  }
  if (fam == "bistable") return bistable_family(loop, number(d, block, "delta"), number(d, block, "w", -1.0));
  return one_way_drive(loop, side_of(fam, d));
}

ComplianceProfile build_compliance(const JobConfig& cfg, const SeaLoop& loop, const PeriodicWaveform& w) {
  const json& d = cfg.design;
  if (d.contains("profile")) {
    const fs::path p = resolve(cfg, d.at("profile").get<std::string>());
    if (!fs::exists(p)) throw ConfigError("design.profile: " + p.string() + " does not exist");
    return compliance_from_json(read_json_file(p));
  }
  const std::string fam = d.value("family", "linear");
  if (fam == "linear") {
    double k1;
    if (d.contains("k1")) k1 = d.at("k1").get<double>();
    else if (cfg.model.m > 0.0) k1 = optimal_linear_compliance(cfg.model.m, cfg.model.c, w.omega()).stiffness;
    else throw ConfigError("design(linear).k1: required when m = 0");
    return linear_compliance(k1, loop.f1(), loop.f2());
  }
  return dwell_time_compliance(loop, side_of(fam, d));
}

std::vector<double> sample_profile(const ElasticProfile& p, const std::vector<double>& x) {
  std::vector<double> y;
  for (double xi : x) y.push_back(-p(xi));
  return y;
}

struct Check {
  std::string name;
  bool pass;
  double value;
  double limit;
  std::string detail;
};

json checks_json(const std::vector<Check>& checks) {
  json a = json::array();
  for (const auto& c : checks)
    a.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"limit", c.limit}, {"detail", c.detail}});
  return a;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// ---------------------------------------------------------------------------
// PEA and SEA design runs shared by design and verify

struct PeaRun {
  PeriodicWaveform w;
  LoadWaveform G;
  PeaLoop loop;
  ElasticProfile profile;
  LoadWaveform F;
  PowerReport time, loop_metrics;
  json report;
};

PeaRun pea_design_run(const std::string& command, const JobConfig& cfg, const Overrides& ov, Artifacts& art) {
  PeaRun r;
  r.w = make_kinematics(cfg);
  r.G = inelastic_load(cfg.model, r.w);
  r.loop = build_pea_loop(cfg.model, r.w);
  r.profile = build_pea_profile(cfg, r.loop, r.w);
  r.profile.bound = check_elastic_bound(r.profile, r.loop, ov.tol.value_or(-1.0));
  r.F = pea_actuator_load(r.G, r.w, r.profile);
  r.time = time_metrics(cfg, r.F, r.w.velocity());
  r.time.transfer_ratio = transfer_ratio_pea(cfg.model, r.w, r.F);
  const Penalty q = penalty(cfg, r.F.size());
  r.loop_metrics = metrics_pea_loop(r.loop, r.profile, q);

  r.report = base_report(command, cfg, r.w, ov);
  r.report["profile"] = r.profile.to_json(0);
  r.report["bound"] = r.profile.bound->to_json();
  r.report["power"] = r.time.to_json();
  r.report["power_loop"] = r.loop_metrics.to_json();
  const auto cd = critical_displacements(r.loop);
  r.report["critical_displacements"] = {{"delta_max", cd.delta_max}, {"detail", cd.detail}};
  if (cd.l_plus) r.report["critical_displacements"]["l_plus"] = *cd.l_plus;
  if (cd.l_minus) r.report["critical_displacements"]["l_minus"] = *cd.l_minus;
  if (cfg.model.zero_inertia()) r.report["dissipation"] = dissipation_dominated_report(r.loop, &r.profile).to_json();

  art.csv("profile", [&](std::ostream& os) { write_profile_csv(os, r.profile); });
  art.json_file("profile", r.profile.to_json());
  art.csv("loop", [&](std::ostream& os) { write_loop_csv(os, r.loop); });
  Plot plot = loop_plot(r.loop);
  plot.title = "Elastic design " + r.profile.family() + " against the PEA loop";
  plot.series.push_back({"-F_s", r.loop.x(), sample_profile(r.profile, r.loop.x()), "#2ca02c", true});
  art.svg("design", plot);
  return r;
}

struct SeaRun {
  PeriodicWaveform w;
  LoadWaveform G;
  SeaLoop loop;
  AccessibilityReport access;
  ComplianceProfile cp;
  BoundReport bound;
  DisplacementWaveform u;
  VelocityWaveform udot;
  PowerReport time;
  json report;
};

SeaRun sea_design_run(const std::string& command, const JobConfig& cfg, const Overrides& ov, Artifacts& art) {
  SeaRun r;
  r.w = make_kinematics(cfg);
  r.G = inelastic_load(cfg.model, r.w);
  r.loop = build_sea_loop(r.G, r.w);
  r.access = sea_accessibility(r.loop);
  r.cp = build_compliance(cfg, r.loop, r.w);
  r.bound = check_sea_bound(r.cp, r.loop, ov.tol.value_or(-1.0));
  r.u = actuator_displacement(r.cp, r.G, r.w);
  r.udot = actuator_velocity(r.u);
  r.time = time_metrics(cfg, r.G, r.udot);
  r.time.transfer_ratio = transfer_ratio_sea(cfg.model, r.w, r.G, r.udot);

  r.report = base_report(command, cfg, r.w, ov);
  json cj = r.cp.to_json(0);
  cj.erase("samples");
  r.report["compliance"] = cj;
  if (r.cp.stiffness) r.report["k1"] = *r.cp.stiffness;
  r.report["accessibility"] = r.access.to_json();
  r.report["bound"] = r.bound.to_json();
  r.report["power"] = r.time.to_json();
  r.report["actuator_velocity_duty_cycle"] = duty_cycle(r.udot, cfg.eps_rel);

  art.csv("compliance", [&](std::ostream& os) { write_compliance_csv(os, r.cp); });
  art.json_file("compliance", r.cp.to_json());
  art.csv("loop", [&](std::ostream& os) { write_loop_csv(os, r.loop); });
  Plot plot{"Compliance gradient " + r.cp.family() + " against the SEA loop", "F", "dx/dF", {}};
  std::vector<double> g;
  for (double F : r.loop.f()) g.push_back(-r.cp.gradient(F));
  plot.series.push_back({"X'+", r.loop.f(), r.loop.xprime_plus(), "#d62728", false});
  plot.series.push_back({"X'-", r.loop.f(), r.loop.xprime_minus(), "#1f77b4", false});
  plot.series.push_back({"-(F_s^-1)'", r.loop.f(), g, "#2ca02c", true});
  art.svg("design", plot);
  return r;
}

void finish(json& report, const Artifacts& art, std::ostream& log) {
  report["artifacts"] = art.written();
  log << report.dump(2) << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------

JobConfig parse_config(const json& j, const fs::path& base_dir) {
  JobConfig cfg;
  cfg.base_dir = base_dir;
  check_keys(j, "config", {"schema", "system", "kinematics", "design", "metrics", "verify", "sweep", "output"});
  if (!j.contains("schema") || !j.at("schema").is_number_integer())
    throw ConfigError("config: a top-level integer \"schema\" is required");
  if (j.at("schema").get<int>() != kSchemaVersion)
    throw ConfigError("config: unsupported schema " + j.at("schema").dump() + " (expected " +
                      std::to_string(kSchemaVersion) + ")");

  if (!j.contains("system")) throw ConfigError("config: missing block \"system\"");
  const json& s = j.at("system");
  check_keys(s, "system", {"actuation", "m", "c", "c_q"});
  const std::string act = text(s, "system", "actuation");
  if (act == "PEA") cfg.actuation = Actuation::pea;
  else if (act == "SEA") cfg.actuation = Actuation::sea;
  else throw ConfigError("system.actuation: must be \"PEA\" or \"SEA\"");
  cfg.model = {number(s, "system", "m", 1.0), number(s, "system", "c", 0.0), number(s, "system", "c_q", 0.0)};
  try {
    cfg.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }

  if (j.contains("kinematics")) {
    const json& k = j.at("kinematics");
    check_keys(k, "kinematics", {"kind", "amplitude", "omega", "smoothing", "N", "csv"});
    if (k.contains("csv")) {
      check_keys(k, "kinematics", {"csv"});
      cfg.waveform_csv = text(k, "kinematics", "csv");
      if (!fs::exists(resolve(cfg, *cfg.waveform_csv)))
        throw ConfigError("kinematics.csv: " + resolve(cfg, *cfg.waveform_csv).string() + " does not exist");
    } else {
      try {
        cfg.kind = waveform_kind_from_string(text(k, "kinematics", "kind", "harmonic"));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("kinematics.kind: ") + e.what());
      }
      if (cfg.kind == WaveformKind::tabulated) throw ConfigError("kinematics: tabulated kinematics need \"csv\"");
      cfg.amplitude = number(k, "kinematics", "amplitude", 1.0);
      cfg.omega = number(k, "kinematics", "omega", 1.0);
      cfg.smoothing = number(k, "kinematics", "smoothing", cfg.kind == WaveformKind::harmonic ? 0.0 : 0.1);
      cfg.samples = count(k, "kinematics", "N", 2048);
      if (!(cfg.amplitude > 0.0)) throw ConfigError("kinematics.amplitude: must be positive");
      if (!(cfg.omega > 0.0)) throw ConfigError("kinematics.omega: must be positive");
      if (cfg.smoothing < 0.0) throw ConfigError("kinematics.smoothing: must be non-negative");
      if (cfg.samples < 16 || cfg.samples % 2) throw ConfigError("kinematics.N: must be even and at least 16");
    }
  }

  if (j.contains("design")) {
    check_design(j.at("design"), cfg.actuation);
    cfg.design = j.at("design");
    if (cfg.design.contains("profile") && !fs::exists(resolve(cfg, cfg.design.at("profile").get<std::string>())))
      throw ConfigError("design.profile: " + resolve(cfg, cfg.design.at("profile").get<std::string>()).string() +
                        " does not exist");
  } else {
    cfg.design = cfg.actuation == Actuation::pea ? json{{"family", "none"}} : json{{"family", "linear"}};
  }

  if (j.contains("metrics")) {
    const json& m = j.at("metrics");
    check_keys(m, "metrics", {"Q", "eps_rel"});
    if (m.contains("Q")) {
      const json& q = m.at("Q");
      if (q.is_number()) cfg.q = {q.get<double>()};
      else if (q.is_array() && !q.empty() && std::all_of(q.begin(), q.end(), [](const json& v) { return v.is_number(); }))
        cfg.q = q.get<std::vector<double>>();
      else throw ConfigError("metrics.Q: expected a number or an array of numbers");
      if (cfg.q.size() == 1 && !(cfg.q[0] >= 0.0)) throw ConfigError("metrics.Q: must be non-negative");
      if (cfg.q.size() > 1 && std::any_of(cfg.q.begin(), cfg.q.end(), [](double v) { return !(v > 0.0); }))
        throw ConfigError("metrics.Q: sampled values must be positive");
    }
    cfg.eps_rel = number(m, "metrics", "eps_rel", 1e-3);
    if (!(cfg.eps_rel > 0.0 && cfg.eps_rel <= 0.1)) throw ConfigError("metrics.eps_rel: must lie in (0, 0.1]");
  }

  if (j.contains("verify")) {
    const json& v = j.at("verify");
    check_keys(v, "verify", {"n_cycles", "steps_per_period"});
    cfg.integration.n_cycles = count(v, "verify", "n_cycles", 10);
    cfg.integration.steps_per_period = count(v, "verify", "steps_per_period", 512);
    if (cfg.integration.n_cycles < 10) throw ConfigError("verify.n_cycles: at least 10");
    if (cfg.integration.steps_per_period < 512) throw ConfigError("verify.steps_per_period: at least 512");
  }

  if (j.contains("sweep")) {
    const json& w = j.at("sweep");
    check_keys(w, "sweep", {"omega_lo", "omega_hi", "rows", "k1", "threads"});
    cfg.sweep_lo = number(w, "sweep", "omega_lo", cfg.sweep_lo);
    cfg.sweep_hi = number(w, "sweep", "omega_hi", cfg.sweep_hi);
    cfg.sweep_rows = count(w, "sweep", "rows", cfg.sweep_rows);
    cfg.sweep_k1 = number(w, "sweep", "k1", cfg.sweep_k1);
    cfg.sweep_threads = static_cast<unsigned>(count(w, "sweep", "threads", 0));
    if (!(cfg.sweep_lo > 0.0 && cfg.sweep_hi > cfg.sweep_lo)) throw ConfigError("sweep: need 0 < omega_lo < omega_hi");
    if (cfg.sweep_rows < 3) throw ConfigError("sweep.rows: at least 3");
    if (!(cfg.sweep_k1 > 0.0)) throw ConfigError("sweep.k1: must be positive");
  }

  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"dir", "formats"});
    cfg.out_dir = text(o, "output", "dir", "out");
    if (o.contains("formats")) {
      if (!o.at("formats").is_array()) throw ConfigError("output.formats: expected an array of strings");
      std::vector<std::string> f;
      for (const auto& v : o.at("formats")) {
        if (!v.is_string()) throw ConfigError("output.formats: expected an array of strings");
        f.push_back(v.get<std::string>());
      }
      cfg.formats = parse_formats(f);
    }
  }
  return cfg;
}

JobConfig load_config(const fs::path& path) {
  return parse_config(read_json_file(path), path.has_parent_path() ? path.parent_path() : fs::path("."));
}

int cmd_analyze(const JobConfig& cfg, const Overrides& ov, std::ostream& log) {
  Artifacts art(cfg, ov);
  const PeriodicWaveform w = make_kinematics(cfg);
  const LoadWaveform G = inelastic_load(cfg.model, w);
  json report = base_report("analyze", cfg, w, ov);
  PowerReport power = time_metrics(cfg, G, w.velocity());
  power.transfer_ratio = transfer_ratio_pea(cfg.model, w, G);
  int code = pass;

  if (cfg.actuation == Actuation::pea) {
    const PeaLoop loop = build_pea_loop(cfg.model, w);
    const auto adm = check_admissible_pea(loop);
    report["admissibility"] = adm.to_json();
    report["loop"] = {{"x1", loop.x1()}, {"x2", loop.x2()}, {"area", loop.area()}, {"max_arc", loop.max_arc()}};
    if (adm.admissible) {
      report["power_loop"] =
          metrics_pea_loop(loop, polynomial_profile({0.0}, loop.x1(), loop.x2(), "none"), penalty(cfg, G.size()))
              .to_json();
    } else {
      code = inadmissible_input;
    }
    art.csv("loop", [&](std::ostream& os) { write_loop_csv(os, loop); });
    art.svg("loop", loop_plot(loop));
  } else {
    const SeaLoop loop = build_sea_loop(G, w);
    report["loop"] = {{"F1", loop.f1()}, {"F2", loop.f2()}, {"F_hat", std::max(std::abs(loop.f1()), std::abs(loop.f2()))}};
    report["accessibility"] = sea_accessibility(loop).to_json();
    if (cfg.model.m > 0.0) {
      const auto lc = optimal_linear_compliance(cfg.model.m, cfg.model.c, w.omega());
      report["optimal_linear"] = {{"compliance", lc.compliance}, {"k1", lc.stiffness}};
    }
    art.csv("loop", [&](std::ostream& os) { write_loop_csv(os, loop); });
    art.svg("loop", loop_plot(loop));
  }
  report["power"] = power.to_json();
  art.json_file("report", report);
  finish(report, art, log);
  return code;
}

int cmd_design(const JobConfig& cfg, const Overrides& ov, std::ostream& log) {
  Artifacts art(cfg, ov);
  json report = cfg.actuation == Actuation::pea ? pea_design_run("design", cfg, ov, art).report
                                                 : sea_design_run("design", cfg, ov, art).report;
  art.json_file("report", report);
  finish(report, art, log);
  return pass;
}

int cmd_verify(const JobConfig& cfg, const Overrides& ov, std::ostream& log) {
  Artifacts art(cfg, ov);
  std::vector<Check> checks;
  json report;
  std::optional<Trajectory> traj;
  IntegrationOptions opt = cfg.integration;

  auto equal_metrics = [&](const PowerReport& p) {
    const double e = std::max({rel_diff(p.p_b, p.p_a), rel_diff(p.p_c, p.p_a), rel_diff(p.p_d, p.p_a)});
    checks.push_back({"metrics coincide at the optimum", e <= 1e-6, e, 1e-6, "max relative gap of P_b, P_c, P_d to P_a"});
  };

  if (cfg.actuation == Actuation::pea) {
    PeaRun r = pea_design_run("verify", cfg, ov, art);
    report = r.report;
    const bool optimal = r.profile.bound->optimal;
    checks.push_back({"elastic bound", optimal, r.profile.bound->max_violation, r.profile.bound->tol,
                      r.profile.bound->detail});
    const double peak_f = std::max(r.time.peak_load, 1e-300);
    const double res = residual_pea(r.profile, cfg.model, r.w, r.F);
    checks.push_back({"equation of motion residual", res <= 1e-9 * peak_f, res, 1e-9 * peak_f, "max |D + F_s - F|"});
    const bool resonant = r.time.globally_resonant(1e-9);
    checks.push_back({"time-domain verdict matches bound", resonant == optimal, r.time.min_power,
                      -1e-9 * r.time.peak_power, resonant ? "no negative power" : "negative power present"});
    if (optimal) {
      equal_metrics(r.time);
      const double h = r.time.transfer_ratio.value_or(0.0);
      checks.push_back({"transfer ratio at the optimum", std::abs(h - 1.0) <= 1e-6, h, 1.0, "|H - 1| <= 1e-6"});
    }
    const double loop_gap = std::max({rel_diff(r.time.p_a, r.loop_metrics.p_a), rel_diff(r.time.p_b, r.loop_metrics.p_b),
                                      rel_diff(r.time.p_c, r.loop_metrics.p_c), rel_diff(r.time.p_d, r.loop_metrics.p_d)});
    checks.push_back({"loop-domain metrics match time domain", loop_gap <= 1e-6, loop_gap, 1e-6, "max relative gap"});
    if (cfg.q.size() == 1) {
      const auto dec = decompose_pea(r.loop, r.profile, cfg.q[0], cfg.q[0]);
      report["decomposition"] = dec.to_json();
      const double gap = std::max({rel_diff(dec.p_b, r.loop_metrics.p_b), rel_diff(dec.p_c, r.loop_metrics.p_c),
                                   rel_diff(dec.p_d, r.loop_metrics.p_d)});
      checks.push_back({"loop decomposition matches loop metrics", gap <= 1e-9, gap, 1e-9, "max relative gap"});
    }
    if (cfg.model.m > 0.0) {
      opt.xhat = 0.5 * (r.w.x_max() - r.w.x_min());
      const ElasticProfile& p = r.profile;
      try {
        traj = forward_integrate_pea(cfg.model, [&p](double x) { return p(x); }, r.F, r.w.x()[0], r.w.xdot()[0], opt, &r.w);
      } catch (const std::exception& e) {
        report["forward_integration"] = {{"detail", e.what()}};
      }
    }
  } else {
    SeaRun r = sea_design_run("verify", cfg, ov, art);
    report = r.report;
    checks.push_back({"loop accessible", r.access.accessible, r.access.margin_negative, 0.0, r.access.detail});
    const bool optimal = r.bound.optimal;
    checks.push_back({"elastic bound", optimal, r.bound.max_violation, r.bound.tol, r.bound.detail});
    const bool resonant = r.time.globally_resonant(1e-9);
    checks.push_back({"time-domain verdict matches bound", resonant == optimal, r.time.min_power,
                      -1e-9 * r.time.peak_power, resonant ? "no negative power" : "negative power present"});
    if (optimal) {
      equal_metrics(r.time);
      const double h = r.time.transfer_ratio.value_or(0.0);
      checks.push_back({"transfer ratio at the optimum", std::abs(h - 1.0) <= 1e-6, h, 1.0, "|H - 1| <= 1e-6"});
    }
    if (cfg.model.m > 0.0 && r.cp.sign_class() == ComplianceProfile::SignClass::always_stable) {
      opt.xhat = 0.5 * (r.w.x_max() - r.w.x_min());
      traj = forward_integrate_sea(cfg.model, spring_force(r.cp), r.u, r.w.x()[0], r.w.xdot()[0], opt, &r.w);
    }
  }
  report["command"] = "verify";
  report["checks"] = checks_json(checks);
  const bool all = std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  report["pass"] = all;
  if (traj) {
    json tj = traj->to_json();
    tj["note"] = "stability probe, reported without a pass/fail judgement";
    report["forward_integration"] = tj;
    art.csv("trajectory", [&](std::ostream& os) {
      os << "t,x,v\n";
      for (std::size_t i = 0; i < traj->t.size(); ++i)
        os << format_number(traj->t[i]) << ',' << format_number(traj->x[i]) << ',' << format_number(traj->v[i]) << '\n';
    });
  }
  art.json_file("report", report);
  finish(report, art, log);
  return all ? pass : assertion_failure;
}

int cmd_sweep(const JobConfig& cfg, const Overrides& ov, std::ostream& log) {
  if (!(cfg.model.m > 0.0)) throw ConfigError("sweep: needs m > 0");
  if (cfg.model.c_q != 0.0) throw ConfigError("sweep: linear damping only (c_q = 0)");
  Artifacts art(cfg, ov);
  const double omega0 = std::sqrt(cfg.sweep_k1 / cfg.model.m);
  const double zeta = cfg.model.c / (2.0 * std::sqrt(cfg.sweep_k1 * cfg.model.m));
  const SweepResult s = sweep_frequency_sea(cfg.model.m, cfg.model.c, cfg.sweep_k1, cfg.sweep_lo, cfg.sweep_hi,
                                            cfg.sweep_rows, cfg.amplitude, cfg.samples, cfg.sweep_threads);
  json report{{"command", "sweep"}, {"model", to_json(cfg.model)}, {"k1", cfg.sweep_k1}, {"omega0", omega0},
              {"zeta", zeta}, {"sweep", s.to_json()}};
  if (ov.seed) report["seed"] = *ov.seed;
  if (zeta < 0.5) {
    const double target = global_resonant_frequency(omega0, zeta);
    report["target"] = target;
    report["argmin_P_b_rel_error"] = std::abs(s.argmin_pb - target) / target;
    report["argmin_excess_rel_error"] = std::abs(s.argmin_excess - target) / target;
  }
  report["sweep"].erase("rows");
  art.csv("sweep", [&](std::ostream& os) {
    os << "omega,omega_ratio,P_a,P_b,excess\n";
    for (const auto& row : s.rows)
      os << format_number(row.omega) << ',' << format_number(row.omega / omega0) << ',' << format_number(row.p_a) << ','
         << format_number(row.p_b) << ',' << format_number(row.excess()) << '\n';
  });
  Plot plot{"SEA frequency sweep", "omega", "power", {}};
  std::vector<double> om, pa, pb;
  for (const auto& row : s.rows) om.push_back(row.omega), pa.push_back(row.p_a), pb.push_back(row.p_b);
  plot.series.push_back({"P_a", om, pa, "#1f77b4", false});
  plot.series.push_back({"P_b", om, pb, "#d62728", false});
  art.svg("sweep", plot);
  art.json_file("report", report);
  finish(report, art, log);
  return pass;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Work-loop analysis, power metrics and optimal elastic design for driven periodic oscillators",
               "resonant"};
  app.require_subcommand(1);
  std::string config_path, out_dir, formats;
  double tol = 0.0;
  long long seed = 0;

  std::vector<std::pair<std::string, std::function<int(const JobConfig&, const Overrides&, std::ostream&)>>> commands{
      {"analyze", cmd_analyze}, {"design", cmd_design}, {"verify", cmd_verify}, {"sweep", cmd_sweep}};
  const std::vector<std::string> help{"Build the inelastic loop and its power metrics",
                                      "Construct an elasticity or compliance and check its bound",
                                      "Run the verification suite on a design",
                                      "Scan frequency for the SEA global-resonant state"};
  std::vector<CLI::App*> subs;
  CLI::Option *out_opt = nullptr, *fmt_opt = nullptr, *tol_opt = nullptr, *seed_opt = nullptr;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto* sub = app.add_subcommand(commands[i].first, help[i]);
    sub->add_option("--config", config_path, "JSON job configuration")->required();
    subs.push_back(sub);
  }
  out_opt = app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  fmt_opt = app.add_option("--format", formats, "Comma-separated subset of csv,json,svg");
  tol_opt = app.add_option("--tol", tol, "Absolute tolerance of the elastic-bound check");
  seed_opt = app.add_option("--seed", seed, "Reserved; echoed in reports");
  for (auto* sub : subs) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return config_error;
  }

  try {
    Overrides ov;
    if (out_opt->count()) ov.out = out_dir;
    if (fmt_opt->count()) {
      std::vector<std::string> f;
      std::stringstream ss(formats);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) f.push_back(item);
      ov.formats = parse_formats(f);
    }
    if (tol_opt->count()) {
      if (!(tol > 0.0)) throw ConfigError("--tol: must be positive");
      ov.tol = tol;
    }
    if (seed_opt->count()) ov.seed = seed;
    const JobConfig cfg = load_config(config_path);
    for (std::size_t i = 0; i < commands.size(); ++i)
      if (subs[i]->parsed()) return commands[i].second(cfg, ov, out);
  } catch (const InadmissibleError& e) {
    err << "inadmissible input (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return inadmissible_input;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const std::domain_error& e) {
    err << "configuration error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return assertion_failure;
  }
  return config_error;
}

}  // namespace resonant::cli
