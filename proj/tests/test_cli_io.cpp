#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "bpsv/commands.hpp"
#include "bpsv/error.hpp"
#include "bpsv/field_io.hpp"

using namespace bpsv;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no Error thrown");
  return ErrorKind::Unsupported;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bpsv_cli_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const char* kSmallTorus = R"({
  "mode": "torus", "lambda": 1.0,
  "domain": {"Lx": 5, "Ly": 4}, "grid": {"nx": 32, "ny": 32},
  "phi_zeros": [[1.0, 1.0]]
})";

}  // namespace

TEST_SUITE("cli_io") {

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config(R"({"mode": "torus", "lambda": 1.0})");
  CHECK(c.model == Model::Base);
  CHECK(c.Lx == 5.0);
  CHECK(c.nx == 128);
  CHECK(c.solver.method == "newton");
  CHECK(c.solver.tol == 1e-9);
  CHECK(c.output.report_path == "report.json");
  CHECK_FALSE(c.tau.has_value());
  CHECK(c.effective_tau() == doctest::Approx(9.0 * (5.0 / 128) * (5.0 / 128)));
}

TEST_CASE("validation names what is wrong") {
  try {
    parse_config(R"({"mode": "torus", "lambda": -1.0})");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(std::string(e.what()).find("lambda") != std::string::npos);
  }
  try {
    parse_config(R"({"mode": "torus", "phi_zeros": [[1, 1], [9, 1]], "solver": {"tol": 0}})");
    FAIL("expected ValidationError");
  } catch (const Error& e) {
    const std::string w = e.what();
    CHECK(w.find("phi_zeros[1]") != std::string::npos);
    CHECK(w.find("solver.tol") != std::string::npos);
  }
  CHECK(kind_of([] { parse_config(R"({"mode": "torus", "lamda": 1})"); }) ==
        ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_config(R"({"mode": "plane", "solver": {"method": "fixedpoint"}})"); }) ==
        ErrorKind::ValidationError);
  CHECK(kind_of([] { parse_config(R"({"mode": "torus", "kappa_zeros": [[1, 1]]})"); }) ==
        ErrorKind::ValidationError);
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_config("{\n  \"mode\": \"torus\",\n  \"lambda\": ,\n}");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("overrides") {
  json doc = json::parse(kSmallTorus);
  apply_override(doc, "lambda=2.5");
  apply_override(doc, "solver.method=both");
  apply_override(doc, "grid.nx=64");
  apply_override(doc, "output.plots_path=plots");
  const RunConfig c = config_from_json(doc);
  CHECK(c.lambda == 2.5);
  CHECK(c.solver.method == "both");
  CHECK(c.nx == 64);
  CHECK(c.output.plots_path == "plots");
  CHECK(kind_of([&] { apply_override(doc, "novalue"); }) == ErrorKind::ValidationError);
  CHECK(kind_of([&] { apply_override(doc, "lambda.x=1"); }) == ErrorKind::ValidationError);
}

TEST_CASE("config survives a JSON round trip with the same hash") {
  const RunConfig c = parse_config(kSmallTorus);
  const RunConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  RunConfig other = c;
  other.lambda = 1.5;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("report round trip") {
  const RunReport rep = run_command("solve", parse_config(kSmallTorus));
  CHECK(rep.exit_code == kExitOk);
  const json j = report_to_json(rep);
  CHECK(j.at("schema_version") == kSchemaVersion);
  const RunReport back = report_from_json(j);
  CHECK(report_to_json(back) == j);
  CHECK(numeric_view(back) == numeric_view(rep));
  CHECK_FALSE(numeric_view(rep).contains("timings"));
}

TEST_CASE("check command exit codes") {
  RunConfig c = parse_config(kSmallTorus);
  const RunReport ok = run_command("check", c);
  CHECK(ok.exit_code == kExitOk);
  REQUIRE(ok.threshold.has_value());
  CHECK(ok.threshold->solvable);
  c.lambda = 0.1;  // lambda |Omega| = 2 < 2 pi
  const RunReport bad = run_command("check", c);
  CHECK(bad.exit_code == kExitThreshold);
  CHECK(bad.status == "threshold_violated");
  CHECK_FALSE(bad.threshold->first_ok);
}

TEST_CASE("solve writes the report, fields and binary dump") {
  const fs::path dir = scratch_dir("solve");
  json doc = json::parse(kSmallTorus);
  apply_override(doc, "output.fields_path=fields/run");
  apply_override(doc, "output.binary=true");
  const RunConfig c = config_from_json(doc);
  const RunReport rep = run_command("solve", c, dir.string());
  REQUIRE(rep.exit_code == kExitOk);
  CHECK(fs::exists(dir / "report.json"));
  const std::string csv = read_text_file((dir / "fields/run.csv").string());
  CHECK(csv.rfind("x,y,u,v,kappa,phi_abs,a12,b12\n", 0) == 0);

  const BinaryDump bin = read_fields_binary((dir / "fields/run.bin").string());
  CHECK(bin.nx == 32);
  CHECK(bin.ny == 32);
  CHECK(bin.config_hash == config_hash(c));
  REQUIRE(bin.fields.size() == 6);
  CHECK(bin.fields[0].name == "u");

  // the dump holds exactly what a fresh solve reconstructs
  const Problem pb = c.problem();
  const Solution s = solve(pb, c.settings());
  const Assembled a = assemble(pb);
  const PhysicalFields ph = reconstruct_physical(pb, a, s.state);
  bool same = true;
  for (std::size_t k = 0; k < ph.u.size(); ++k)
    same = same && bin.fields[0].field[k] == ph.u[k] && bin.fields[5].field[k] == ph.b12[k];
  CHECK(same);
}

TEST_CASE("no vortices dumps the trivial fields") {
  const fs::path dir = scratch_dir("trivial");
  json doc = json::parse(kSmallTorus);
  doc["phi_zeros"] = json::array();
  apply_override(doc, "output.fields_path=f");
  apply_override(doc, "output.binary=true");
  REQUIRE(run_command("solve", config_from_json(doc), dir.string()).exit_code == kExitOk);
  const BinaryDump bin = read_fields_binary((dir / "f.bin").string());
  for (const NamedField& nf : bin.fields) {
    double worst = 0.0;
    const double target = (nf.name == "kappa" || nf.name == "phi_abs") ? 1.0 : 0.0;
    for (std::size_t k = 0; k < nf.field.size(); ++k)
      worst = std::max(worst, std::abs(nf.field[k] - target));
    CHECK_MESSAGE(worst < 1e-12, nf.name);
  }
}

TEST_CASE("sweep and plane plot data") {
  const fs::path dir = scratch_dir("sweep");
  json doc = json::parse(kSmallTorus);
  apply_override(doc, "sweep.parameter=lambda");
  apply_override(doc, "sweep.values=[0.1,0.5,1.0]");
  apply_override(doc, "output.plots_path=plots");
  const RunReport rep = run_command("sweep", config_from_json(doc), dir.string());
  REQUIRE(rep.sweep.size() == 3);
  CHECK_FALSE(rep.sweep[0].solvable);  // 20 * 0.1 < 2 pi
  CHECK(rep.sweep[1].solvable);
  const std::string csv = read_text_file((dir / "plots/sweep_boundary.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  const fs::path pdir = scratch_dir("plane");
  const RunConfig plane = parse_config(R"({"mode": "plane", "lambda": 4, "domain": {"R": 6},
    "grid": {"n": 97}, "phi_zeros": [[0, 0]], "output": {"plots_path": "p"}})");
  REQUIRE(run_command("solve", plane, pdir.string()).exit_code == kExitOk);
  const std::string prof = read_text_file((pdir / "p/radial_profile.csv").string());
  CHECK(prof.rfind("r,mean_u2v2,mean_grad2\n", 0) == 0);
}

TEST_CASE("missing files are I/O errors") {
  CHECK(kind_of([] { read_text_file("/nonexistent/dir/cfg.json"); }) == ErrorKind::IoError);
  CHECK(kind_of([] { read_fields_binary("/nonexistent/f.bin"); }) == ErrorKind::IoError);
}

TEST_CASE("vortexctl exit codes") {
  const fs::path dir = scratch_dir("ctl");
  write_text_file((dir / "ok.json").string(), kSmallTorus);
  write_text_file((dir / "broken.json").string(), "{\"mode\": ");
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(VORTEXCTL_PATH) + " " + args + " --out " +
                            (dir / "out").string() + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  const std::string ok = "--config " + (dir / "ok.json").string();
  CHECK(run(ok + " --command check") == 0);
  CHECK(run(ok + " --command solve") == 0);
  CHECK(fs::exists(dir / "out/report.json"));
  CHECK(run(ok + " --command check --override lambda=0.1") == 2);
  CHECK(run(ok + " --command solve --override solver.max_iters=1") == 3);
  CHECK(run(ok + " --override lambda=-1") == 1);
  CHECK(run("--config " + (dir / "broken.json").string()) == 1);
  CHECK(run("--config " + (dir / "missing.json").string()) == 1);
  CHECK(run(ok + " --command frobnicate") == 1);
  CHECK(run("") == 1);
  CHECK(run("--help") == 0);
}

}
