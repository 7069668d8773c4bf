#include "bpsv/report.hpp"

#include "bpsv/error.hpp"

namespace bpsv {

using nlohmann::json;

namespace {

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const ThresholdReport& t) {
  j = {{"model", to_string(t.model)}, {"C1", t.C1},           {"C2", t.C2},
       {"alpha1", t.alpha1},          {"alpha2", t.alpha2},   {"first_ok", t.first_ok},
       {"second_ok", t.second_ok},    {"solvable", t.solvable}, {"margin", t.margin}};
}
void from_json(const json& j, ThresholdReport& t) {
  t.model = j.at("model").get<std::string>() == "base" ? Model::Base : Model::Extended;
  j.at("C1").get_to(t.C1);
  j.at("C2").get_to(t.C2);
  j.at("alpha1").get_to(t.alpha1);
  j.at("alpha2").get_to(t.alpha2);
  j.at("first_ok").get_to(t.first_ok);
  j.at("second_ok").get_to(t.second_ok);
  j.at("solvable").get_to(t.solvable);
  j.at("margin").get_to(t.margin);
}

void to_json(json& j, const EquationResidual& e) { j = {{"l2", e.l2}, {"sup", e.sup}}; }
void from_json(const json& j, EquationResidual& e) {
  j.at("l2").get_to(e.l2);
  j.at("sup").get_to(e.sup);
}
void to_json(json& j, const ResidualReport& r) { j = {{"first", r.first}, {"second", r.second}}; }
void from_json(const json& j, ResidualReport& r) {
  j.at("first").get_to(r.first);
  j.at("second").get_to(r.second);
}

void to_json(json& j, const StageRecord& s) {
  j = {{"t", s.t},         {"iterations", s.iterations}, {"residual", s.residual},
       {"max_h", s.max_h}, {"max_g", s.max_g},           {"converged", s.converged}};
}
void from_json(const json& j, StageRecord& s) {
  j.at("t").get_to(s.t);
  j.at("iterations").get_to(s.iterations);
  j.at("residual").get_to(s.residual);
  j.at("max_h").get_to(s.max_h);
  j.at("max_g").get_to(s.max_g);
  j.at("converged").get_to(s.converged);
}

void to_json(json& j, const MethodSummary& m) {
  j = {{"method", m.method},
       {"converged", m.converged},
       {"iterations", m.iterations},
       {"message", m.message},
       {"final_gradient", m.final_gradient},
       {"energy", m.energy},
       {"grad_history", m.grad_history},
       {"energy_history", m.energy_history},
       {"residual", m.residual},
       {"stages", m.stages},
       {"x_norm_ceiling", m.x_norm_ceiling},
       {"refinements", m.refinements},
       {"monotone", m.monotone}};
}
void from_json(const json& j, MethodSummary& m) {
  j.at("method").get_to(m.method);
  j.at("converged").get_to(m.converged);
  j.at("iterations").get_to(m.iterations);
  j.at("message").get_to(m.message);
  j.at("final_gradient").get_to(m.final_gradient);
  j.at("energy").get_to(m.energy);
  j.at("grad_history").get_to(m.grad_history);
  j.at("energy_history").get_to(m.energy_history);
  j.at("residual").get_to(m.residual);
  j.at("stages").get_to(m.stages);
  j.at("x_norm_ceiling").get_to(m.x_norm_ceiling);
  j.at("refinements").get_to(m.refinements);
  j.at("monotone").get_to(m.monotone);
}

void to_json(json& j, const DiagnosticsReport& d) {
  j["residual"] = d.residual;
  j["flux"] = {{"flux_a", d.flux.flux_a}, {"flux_b", d.flux.flux_b}};
  j["constraints"] = d.constraints ? json{{"first", d.constraints->first}, {"second", d.constraints->second}}
                                   : json(nullptr);
  j["bounds"] = d.bounds ? json{{"eu_excess", d.bounds->eu_excess},
                                {"ev_excess", d.bounds->ev_excess},
                                {"intermediate_excess", d.bounds->intermediate_excess},
                                {"eps", d.bounds->eps},
                                {"violated", d.bounds->violated}}
                         : json(nullptr);
  j["lagrange"] = d.lagrange ? json{{"lambda1", d.lagrange->lambda1}, {"lambda2", d.lagrange->lambda2}}
                             : json(nullptr);
  j["decay"] = d.decay ? json{{"rate_fields", d.decay->rate_fields},
                              {"rate_gradients", d.decay->rate_gradients},
                              {"r_min", d.decay->r_min},
                              {"r_max", d.decay->r_max},
                              {"bins", d.decay->bins}}
                       : json(nullptr);
  j["uniqueness_spread"] = opt(d.uniqueness_spread);
}
void from_json(const json& j, DiagnosticsReport& d) {
  j.at("residual").get_to(d.residual);
  j.at("flux").at("flux_a").get_to(d.flux.flux_a);
  j.at("flux").at("flux_b").get_to(d.flux.flux_b);
  if (!j.at("constraints").is_null())
    d.constraints = ConstraintErrors{j["constraints"].at("first"), j["constraints"].at("second")};
  if (!j.at("bounds").is_null()) {
    const json& b = j["bounds"];
    d.bounds = BoundReport{b.at("eu_excess"), b.at("ev_excess"), b.at("intermediate_excess"),
                           b.at("eps"), b.at("violated")};
  }
  if (!j.at("lagrange").is_null())
    d.lagrange = LagrangeFit{j["lagrange"].at("lambda1"), j["lagrange"].at("lambda2")};
  if (!j.at("decay").is_null()) {
    const json& x = j["decay"];
    d.decay = DecayFit{x.at("rate_fields"), x.at("rate_gradients"), x.at("r_min"), x.at("r_max"),
                       x.at("bins")};
  }
  d.uniqueness_spread = get_opt<double>(j, "uniqueness_spread");
}

void to_json(json& j, const SweepRow& r) {
  j = {{"index", r.index},
       {"p1", r.p1},
       {"p2", opt(r.p2)},
       {"threshold", opt(r.threshold)},
       {"solvable", r.solvable},
       {"converged", opt(r.converged)},
       {"iterations", opt(r.iterations)},
       {"residual_sup", opt(r.residual_sup)}};
}
void from_json(const json& j, SweepRow& r) {
  j.at("index").get_to(r.index);
  j.at("p1").get_to(r.p1);
  r.p2 = get_opt<double>(j, "p2");
  r.threshold = get_opt<ThresholdReport>(j, "threshold");
  j.at("solvable").get_to(r.solvable);
  r.converged = get_opt<bool>(j, "converged");
  r.iterations = get_opt<int>(j, "iterations");
  r.residual_sup = get_opt<double>(j, "residual_sup");
}

json report_to_json(const RunReport& r) {
  json j = numeric_view(r);
  j["timings"] = r.timings;
  return j;
}

json numeric_view(const RunReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["artifact_version"] = r.artifact_version;
  j["config_hash"] = r.config_hash;
  j["command"] = r.command;
  j["config"] = config_to_json(r.config);
  j["threshold"] = opt(r.threshold);
  j["methods"] = r.methods;
  j["diagnostics"] = opt(r.diagnostics);
  j["cross_method_sup_diff"] = opt(r.cross_method_sup_diff);
  j["sweep"] = r.sweep;
  j["status"] = r.status;
  j["message"] = r.message;
  j["exit_code"] = r.exit_code;
  return j;
}

RunReport report_from_json(const json& j) {
  try {
    RunReport r;
    j.at("schema_version").get_to(r.schema_version);
    if (r.schema_version != kSchemaVersion)
      throw Error(ErrorKind::ValidationError,
                  "unsupported report schema_version " + std::to_string(r.schema_version));
    j.at("artifact_version").get_to(r.artifact_version);
    j.at("config_hash").get_to(r.config_hash);
    j.at("command").get_to(r.command);
    r.config = config_from_json(j.at("config"));
    r.threshold = get_opt<ThresholdReport>(j, "threshold");
    j.at("methods").get_to(r.methods);
    r.diagnostics = get_opt<DiagnosticsReport>(j, "diagnostics");
    r.cross_method_sup_diff = get_opt<double>(j, "cross_method_sup_diff");
    j.at("sweep").get_to(r.sweep);
    j.at("status").get_to(r.status);
    j.at("message").get_to(r.message);
    j.at("exit_code").get_to(r.exit_code);
    if (j.contains("timings")) j.at("timings").get_to(r.timings);
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
  }
}

}  // namespace bpsv
