#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "resonant/cli.hpp"
#include "resonant/errors.hpp"
#include "resonant/io.hpp"

using namespace resonant;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {
fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("resonant_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json reference(const std::string& actuation) {
  return json{{"schema", 1},
              {"system", {{"actuation", actuation}, {"m", 1}, {"c", 1}}},
              {"kinematics", {{"kind", "harmonic"}, {"amplitude", 1}, {"omega", 1}, {"N", 512}}},
              {"metrics", {{"Q", 2}}}};
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "resonant");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int rc = cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  return rc;
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "job.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 12345678.9}) CHECK(std::stod(format_number(v)) == v);
    CHECK(format_number(std::nan("")) == "nan");
  }

  TEST_CASE("svg and plot csv") {
    Plot p{"t", "x", "y", {{"a", {0, 1, 2}, {1, std::nan(""), 3}, "#000", false}}};
    std::ostringstream svg, csv;
    write_svg(svg, p);
    write_plot_csv(csv, p);
    CHECK(svg.str().rfind("<svg", 0) == 0);
    CHECK(svg.str().find("</svg>") != std::string::npos);
    CHECK(csv.str() == "series,x,y\na,0,1\na,1,nan\na,2,3\n");
  }

  TEST_CASE("strict config parsing") {
    CHECK_NOTHROW(cli::parse_config(reference("PEA")));
    json bad = reference("PEA");
    bad["system"]["mass"] = 1;
    CHECK_THROWS_AS(cli::parse_config(bad), ConfigError);
    bad = reference("PEA");
    bad["schema"] = 2;
    CHECK_THROWS_AS(cli::parse_config(bad), ConfigError);
    bad = reference("PEA");
    bad["design"] = {{"family", "warp-drive"}};
    CHECK_THROWS_AS(cli::parse_config(bad), ConfigError);
    bad = reference("PEA");
    bad.erase("schema");
    CHECK_THROWS_AS(cli::parse_config(bad), ConfigError);
    // Omitted blocks take their defaults.
    bad = reference("PEA");
    bad.erase("kinematics");
    CHECK(cli::parse_config(bad).samples == 2048);
  }

  TEST_CASE("exit codes") {
    const fs::path dir = scratch("codes");
    CHECK(run_cli({}) == cli::config_error);
    CHECK(run_cli({"analyze", "--config", (dir / "missing.json").string()}) == cli::config_error);

    json lin = reference("PEA");
    lin["design"] = {{"family", "linear"}, {"k", 1}};
    auto p = write_config(dir, lin);
    CHECK(run_cli({"verify", "--config", p.string(), "--out", (dir / "ok").string()}) == cli::pass);

    lin["design"] = {{"family", "linear"}, {"k", 3}};
    p = write_config(dir, lin);
    CHECK(run_cli({"verify", "--config", p.string(), "--out", (dir / "stiff").string()}) == cli::assertion_failure);
    CHECK(run_cli({"design", "--config", p.string(), "--out", (dir / "design").string()}) == cli::pass);

    json saw = reference("PEA");
    saw["kinematics"]["kind"] = "smoothed-sawtooth";
    saw["kinematics"]["smoothing"] = 0;
    p = write_config(dir, saw);
    CHECK(run_cli({"analyze", "--config", p.string(), "--out", (dir / "saw").string()}) == cli::inadmissible_input);
    fs::remove_all(dir);
  }

  TEST_CASE("analyze writes deterministic artifacts") {
    const fs::path dir = scratch("det");
    const auto p = write_config(dir, reference("SEA"));
    std::string log;
    REQUIRE(run_cli({"analyze", "--config", p.string(), "--out", (dir / "a").string()}, &log) == cli::pass);
    REQUIRE(run_cli({"analyze", "--config", p.string(), "--out", (dir / "b").string(), "--format", "json"}) == cli::pass);
    CHECK(fs::exists(dir / "a" / "report.json"));
    CHECK(fs::exists(dir / "a" / "loop.csv"));
    CHECK(fs::exists(dir / "a" / "loop.svg"));
    CHECK_FALSE(fs::exists(dir / "b" / "loop.csv"));
    CHECK(slurp(dir / "a" / "report.json").size() > 0);
    const json ja = json::parse(slurp(dir / "a" / "report.json"));
    CHECK(ja["optimal_linear"]["k1"].get<double>() == doctest::Approx(2.0));
    REQUIRE(run_cli({"analyze", "--config", p.string(), "--out", (dir / "c").string()}) == cli::pass);
    CHECK(slurp(dir / "a" / "loop.csv") == slurp(dir / "c" / "loop.csv"));
    fs::remove_all(dir);
  }
}
