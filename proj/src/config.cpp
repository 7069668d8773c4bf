#include "bpsv/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <sstream>

#include "bpsv/error.hpp"

namespace bpsv {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& allowed,
                    std::vector<std::string>& errors) {
  if (!j.is_object()) {
    errors.push_back(where + " must be an object");
    return;
  }
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) errors.push_back("unknown key " + where + key);
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where,
          std::vector<std::string>& errors) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    errors.push_back(where + key + " has the wrong type");
  }
}

std::vector<Point> read_points(const json& j, const char* key, std::vector<std::string>& errors) {
  std::vector<Point> pts;
  if (!j.contains(key)) return pts;
  const json& arr = j.at(key);
  if (!arr.is_array()) {
    errors.push_back(std::string(key) + " must be a list of [x, y]");
    return pts;
  }
  for (std::size_t s = 0; s < arr.size(); ++s) {
    const json& p = arr[s];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      errors.push_back(std::string(key) + "[" + std::to_string(s) + "] must be [x, y]");
      continue;
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return pts;
}

json points_json(const std::vector<Point>& pts) {
  json arr = json::array();
  for (const Point& p : pts) arr.push_back({p.x, p.y});
  return arr;
}

bool sweep_parameter_ok(const std::string& p) {
  return p == "lambda" || p == "n" || p == "m" || p == "tau" || p == "resolution";
}

}  // namespace

std::string to_string(Geometry g) { return g == Geometry::Torus ? "torus" : "plane"; }
std::string to_string(Model m) { return m == Model::Base ? "base" : "extended"; }

AnyGrid RunConfig::grid() const {
  if (mode == Geometry::Torus) return TorusGrid{Lx, Ly, nx, ny};
  return PlaneGrid{R, n};
}

double RunConfig::effective_tau() const {
  if (tau) return *tau;
  return std::visit([](const auto& g) { return default_tau(g); }, grid());
}

Problem RunConfig::problem() const {
  Problem pb{{mode, model}, grid(), {phi_zeros, {}}, {lambda, effective_tau()}};
  if (model == Model::Extended) pb.cfg.kappa_zeros = kappa_zeros;
  return pb;
}

SolverSettings RunConfig::settings() const {
  SolverSettings s;
  s.tol_grad_sup = solver.tol;
  s.max_iters = solver.max_iters;
  return s;
}

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> errors;
  if (!(c.lambda > 0.0) || !std::isfinite(c.lambda)) errors.push_back("lambda must be positive");
  if (c.tau && (!(*c.tau > 0.0) || !std::isfinite(*c.tau))) errors.push_back("tau must be positive");
  auto check_points = [&](const std::vector<Point>& pts, const char* key, auto&& inside) {
    for (std::size_t s = 0; s < pts.size(); ++s)
      if (!inside(pts[s]))
        errors.push_back(std::string(key) + "[" + std::to_string(s) + "] lies outside the domain");
  };
  if (c.mode == Geometry::Torus) {
    if (!(c.Lx > 0.0) || !(c.Ly > 0.0) || !std::isfinite(c.Lx) || !std::isfinite(c.Ly))
      errors.push_back("domain.Lx and domain.Ly must be positive");
    if (c.nx < 8 || c.ny < 8 || c.nx % 2 || c.ny % 2)
      errors.push_back("grid.nx and grid.ny must be even and >= 8");
    const TorusGrid g{c.Lx, c.Ly, c.nx, c.ny};
    auto inside = [&](const Point& p) { return g.contains(p); };
    check_points(c.phi_zeros, "phi_zeros", inside);
    check_points(c.kappa_zeros, "kappa_zeros", inside);
  } else {
    if (!(c.R > 0.0) || !std::isfinite(c.R)) errors.push_back("domain.R must be positive");
    if (c.n < 16) errors.push_back("grid.n must be >= 16");
    const PlaneGrid g{c.R, c.n};
    auto inside = [&](const Point& p) { return g.contains(p); };
    check_points(c.phi_zeros, "phi_zeros", inside);
    check_points(c.kappa_zeros, "kappa_zeros", inside);
  }
  if (c.model == Model::Base && !c.kappa_zeros.empty())
    errors.push_back("kappa_zeros need model = extended");
  const std::string& m = c.solver.method;
  if (m != "newton" && m != "fixedpoint" && m != "both")
    errors.push_back("solver.method must be newton, fixedpoint or both");
  if (m != "newton" && (c.mode != Geometry::Torus || c.model != Model::Base))
    errors.push_back("solver.method " + m + " needs mode = torus and model = base");
  if (!(c.solver.tol > 0.0)) errors.push_back("solver.tol must be positive");
  if (c.solver.max_iters < 1) errors.push_back("solver.max_iters must be >= 1");
  if (c.solver.continuation_steps < 1) errors.push_back("solver.continuation_steps must be >= 1");
  if (c.solver.uniqueness_seeds < 0) errors.push_back("solver.uniqueness_seeds must be >= 0");
  if (c.output.report_path.empty()) errors.push_back("output.report_path must not be empty");
  if (!c.sweep.parameter.empty() && !sweep_parameter_ok(c.sweep.parameter))
    errors.push_back("sweep.parameter must be one of lambda, n, m, tau, resolution");
  if (!c.sweep.parameter2.empty() && !sweep_parameter_ok(c.sweep.parameter2))
    errors.push_back("sweep.parameter2 must be one of lambda, n, m, tau, resolution");
  if (!c.sweep.parameter2.empty() && c.sweep.values2.empty())
    errors.push_back("sweep.values2 must not be empty");
  for (const auto* vals : {&c.sweep.values, &c.sweep.values2})
    for (double v : *vals)
      if (!std::isfinite(v)) errors.push_back("sweep values must be finite");
  return errors;
}

RunConfig config_from_json(const json& j) {
  std::vector<std::string> errors;
  RunConfig c;
  reject_unknown(j, "",
                 {"mode", "model", "lambda", "tau", "domain", "grid", "phi_zeros", "kappa_zeros",
                  "solver", "output", "sweep"},
                 errors);
  if (!errors.empty() && !j.is_object()) throw Error(ErrorKind::ValidationError, errors.front());

  std::string mode = "torus", model = "base";
  read(j, "mode", mode, "", errors);
  read(j, "model", model, "", errors);
  if (mode == "torus") c.mode = Geometry::Torus;
  else if (mode == "plane") c.mode = Geometry::Plane;
  else errors.push_back("mode must be torus or plane");
  if (model == "base") c.model = Model::Base;
  else if (model == "extended") c.model = Model::Extended;
  else errors.push_back("model must be base or extended");

  read(j, "lambda", c.lambda, "", errors);
  if (j.contains("tau") && !j.at("tau").is_null()) {
    double t = 0.0;
    read(j, "tau", t, "", errors);
    c.tau = t;
  }
  if (j.contains("domain")) {
    const json& d = j.at("domain");
    if (c.mode == Geometry::Torus) {
      reject_unknown(d, "domain.", {"Lx", "Ly"}, errors);
      read(d, "Lx", c.Lx, "domain.", errors);
      read(d, "Ly", c.Ly, "domain.", errors);
    } else {
      reject_unknown(d, "domain.", {"R"}, errors);
      read(d, "R", c.R, "domain.", errors);
    }
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (c.mode == Geometry::Torus) {
      reject_unknown(g, "grid.", {"nx", "ny"}, errors);
      read(g, "nx", c.nx, "grid.", errors);
      read(g, "ny", c.ny, "grid.", errors);
    } else {
      reject_unknown(g, "grid.", {"n"}, errors);
      read(g, "n", c.n, "grid.", errors);
    }
  }
  c.phi_zeros = read_points(j, "phi_zeros", errors);
  c.kappa_zeros = read_points(j, "kappa_zeros", errors);
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown(s, "solver.",
                   {"method", "tol", "max_iters", "continuation_steps", "seed", "uniqueness_seeds"},
                   errors);
    read(s, "method", c.solver.method, "solver.", errors);
    read(s, "tol", c.solver.tol, "solver.", errors);
    read(s, "max_iters", c.solver.max_iters, "solver.", errors);
    read(s, "continuation_steps", c.solver.continuation_steps, "solver.", errors);
    read(s, "seed", c.solver.seed, "solver.", errors);
    read(s, "uniqueness_seeds", c.solver.uniqueness_seeds, "solver.", errors);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    reject_unknown(o, "output.", {"report_path", "fields_path", "plots_path", "binary"}, errors);
    read(o, "report_path", c.output.report_path, "output.", errors);
    read(o, "fields_path", c.output.fields_path, "output.", errors);
    read(o, "plots_path", c.output.plots_path, "output.", errors);
    read(o, "binary", c.output.binary, "output.", errors);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown(s, "sweep.", {"parameter", "values", "parameter2", "values2", "solve"}, errors);
    read(s, "parameter", c.sweep.parameter, "sweep.", errors);
    read(s, "values", c.sweep.values, "sweep.", errors);
    read(s, "parameter2", c.sweep.parameter2, "sweep.", errors);
    read(s, "values2", c.sweep.values2, "sweep.", errors);
    read(s, "solve", c.sweep.solve, "sweep.", errors);
  }
  if (errors.empty()) errors = validate_config(c);
  if (!errors.empty()) {
    std::string msg;
    for (std::size_t k = 0; k < errors.size(); ++k) msg += (k ? "; " : "") + errors[k];
    throw Error(ErrorKind::ValidationError, msg);
  }
  return c;
}

RunConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') ++line, col = 1;
      else ++col;
    }
    std::ostringstream msg;
    msg << "line " << line << ", column " << col << ": " << e.what();
    throw Error(ErrorKind::ParseError, msg.str());
  }
  return config_from_json(j);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["model"] = to_string(c.model);
  j["lambda"] = c.lambda;
  j["tau"] = c.tau ? json(*c.tau) : json(nullptr);
  if (c.mode == Geometry::Torus) {
    j["domain"] = {{"Lx", c.Lx}, {"Ly", c.Ly}};
    j["grid"] = {{"nx", c.nx}, {"ny", c.ny}};
  } else {
    j["domain"] = {{"R", c.R}};
    j["grid"] = {{"n", c.n}};
  }
  j["phi_zeros"] = points_json(c.phi_zeros);
  j["kappa_zeros"] = points_json(c.kappa_zeros);
  j["solver"] = {{"method", c.solver.method},
                 {"tol", c.solver.tol},
                 {"max_iters", c.solver.max_iters},
                 {"continuation_steps", c.solver.continuation_steps},
                 {"seed", c.solver.seed},
                 {"uniqueness_seeds", c.solver.uniqueness_seeds}};
  j["output"] = {{"report_path", c.output.report_path},
                 {"fields_path", c.output.fields_path},
                 {"plots_path", c.output.plots_path},
                 {"binary", c.output.binary}};
  j["sweep"] = {{"parameter", c.sweep.parameter},
                {"values", c.sweep.values},
                {"parameter2", c.sweep.parameter2},
                {"values2", c.sweep.values2},
                {"solve", c.sweep.solve}};
  return j;
}

void apply_override(json& doc, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw Error(ErrorKind::ValidationError,
                "override must look like key=value, got '" + std::string(assignment) + "'");
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw Error(ErrorKind::ValidationError, "empty segment in override key " + key);
    if (!node->is_object()) {
      if (!node->is_null()) throw Error(ErrorKind::ValidationError, "override path " + key + " crosses a non-object");
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

std::string config_hash(const RunConfig& c) {
  const std::string text = config_to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bpsv
