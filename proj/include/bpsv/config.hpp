#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bpsv/newton.hpp"

namespace bpsv {

struct RunConfig {
  Geometry mode = Geometry::Torus;
  Model model = Model::Base;
  double lambda = 1.0;
  std::optional<double> tau;  // defaults to (3h)^2 when absent

  // torus cell / plane half-width
  double Lx = 5.0;
  double Ly = 4.0;
  double R = 10.0;
  // torus counts / plane nodes per axis
  std::size_t nx = 128;
  std::size_t ny = 128;
  std::size_t n = 129;

  std::vector<Point> phi_zeros;
  std::vector<Point> kappa_zeros;

  struct Solver {
    std::string method = "newton";  // newton | fixedpoint | both
    double tol = 1e-9;
    int max_iters = 100;
    int continuation_steps = 10;
    unsigned long long seed = 0;
    int uniqueness_seeds = 0;  // 0 disables the probe
  } solver;

  struct Output {
    std::string report_path = "report.json";
    std::string fields_path;  // empty: no dump
    std::string plots_path;   // empty: no plot data
    bool binary = false;      // raw float64 dump next to the CSV
  } output;

  struct Sweep {
    std::string parameter;  // lambda | n | m | tau | resolution
    std::vector<double> values;
    std::string parameter2;
    std::vector<double> values2;
    bool solve = false;     // also run the solver at solvable points
  } sweep;

  AnyGrid grid() const;
  double effective_tau() const;
  Problem problem() const;
  SolverSettings settings() const;
};

// Parses a JSON document, fills defaults and validates. Throws ParseError
// (with line and column) or ValidationError listing every violation.
RunConfig parse_config(std::string_view text);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

// Every violation found, empty when the config is valid.
std::vector<std::string> validate_config(const RunConfig& c);

// key=value with a dotted key path; the value is read as JSON when it parses,
// otherwise as a plain string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

// FNV-1a 64 over the canonical (sorted-key) dump of the full config.
std::string config_hash(const RunConfig& c);

std::string to_string(Geometry g);
std::string to_string(Model m);

}  // namespace bpsv
