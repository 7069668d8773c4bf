#include "bpsv/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "bpsv/error.hpp"
#include "bpsv/field_io.hpp"
#include "bpsv/field_ops.hpp"

namespace bpsv {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string under(const std::optional<std::string>& dir, const std::string& path) {
  if (!dir || dir->empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(*dir) / path).string();
}

std::optional<ThresholdReport> threshold_of(const RunConfig& cfg) {
  if (cfg.mode != Geometry::Torus) return std::nullopt;
  const Problem pb = cfg.problem();
  return check_existence(pb.cfg, std::get<TorusGrid>(pb.grid), pb.params, cfg.model);
}

void set_status(RunReport& r, int code, const std::string& message) {
  if (code <= r.exit_code) return;
  r.exit_code = code;
  r.status = code == kExitThreshold ? "threshold_violated" : "not_converged";
  r.message = message;
}

MethodSummary summarize_newton(const Solution& s, const Problem& pb, const Assembled& a) {
  MethodSummary m;
  m.method = "newton";
  m.converged = s.converged;
  m.iterations = s.iterations;
  m.message = s.message;
  m.final_gradient = s.grad_history.empty() ? 0.0 : s.grad_history.back();
  m.energy = s.energy_history.empty() ? 0.0 : s.energy_history.back();
  m.grad_history = s.grad_history;
  m.energy_history = s.energy_history;
  m.residual = pde_residual(pb, a, s.state);
  return m;
}

MethodSummary summarize_fixed_point(const FixedPointResult& f, const Problem& pb,
                                    const Assembled& a) {
  MethodSummary m;
  m.method = "fixedpoint";
  m.converged = f.solution.converged;
  m.iterations = f.solution.iterations;
  m.message = f.solution.message;
  m.final_gradient = f.residual_history.empty() ? 0.0 : f.residual_history.back();
  m.energy = a.functional->energy(f.solution.state).total;
  m.grad_history = f.residual_history;
  m.residual = pde_residual(pb, a, f.solution.state);
  m.stages = f.stages;
  m.x_norm_ceiling = f.x_norm_ceiling;
  m.refinements = f.refinements;
  m.monotone = f.monotone;
  return m;
}

void write_report(const RunReport& r, const std::optional<std::string>& out_dir) {
  if (!out_dir) return;
  write_text_file(under(out_dir, r.config.output.report_path), report_to_json(r).dump(2) + "\n");
}

// Applies one sweep coordinate to a copy of the base config.
void apply_sweep_value(RunConfig& c, const RunConfig& base, const std::string& p, double v) {
  auto count = [&](const char* what, std::size_t avail) {
    if (!(v >= 0.0) || v != std::floor(v) || v > static_cast<double>(avail))
      throw Error(ErrorKind::ValidationError, std::string("sweep over ") + what + " needs whole values <= " +
                                                  std::to_string(avail));
    return static_cast<std::size_t>(v);
  };
  if (p == "lambda") {
    c.lambda = v;
  } else if (p == "tau") {
    c.tau = v;
  } else if (p == "n") {
    c.phi_zeros.assign(base.phi_zeros.begin(), base.phi_zeros.begin() + count("n", base.phi_zeros.size()));
  } else if (p == "m") {
    c.kappa_zeros.assign(base.kappa_zeros.begin(),
                         base.kappa_zeros.begin() + count("m", base.kappa_zeros.size()));
  } else if (p == "resolution") {
    const std::size_t r = count("resolution", 1u << 16);
    c.nx = c.ny = c.n = r;
  }
}

RunReport run_sweep(RunReport rep, const RunConfig& cfg, const std::optional<std::string>& out_dir) {
  if (cfg.sweep.parameter.empty() || cfg.sweep.values.empty())
    throw Error(ErrorKind::ValidationError, "sweep needs sweep.parameter and sweep.values");
  std::vector<double> second = cfg.sweep.values2;
  const bool two = !cfg.sweep.parameter2.empty();
  if (!two) second = {0.0};
  std::vector<BoundaryRow> boundary;
  std::size_t index = 0;
  for (double v1 : cfg.sweep.values) {
    for (double v2 : second) {
      RunConfig c = cfg;
      apply_sweep_value(c, cfg, cfg.sweep.parameter, v1);
      if (two) apply_sweep_value(c, cfg, cfg.sweep.parameter2, v2);
      const auto errors = validate_config(c);
      if (!errors.empty())
        throw Error(ErrorKind::ValidationError, "sweep point " + std::to_string(index) + ": " + errors.front());
      SweepRow row;
      row.index = index;
      row.p1 = v1;
      if (two) row.p2 = v2;
      row.threshold = threshold_of(c);
      row.solvable = !row.threshold || row.threshold->solvable;
      if (row.threshold) {
        const double m = c.model == Model::Extended ? static_cast<double>(c.kappa_zeros.size()) : 0.0;
        const double n = static_cast<double>(c.phi_zeros.size());
        boundary.push_back({index, v1, two ? v2 : 0.0, c.lambda * c.Lx * c.Ly,
                            2.0 * std::numbers::pi * (m + n), std::numbers::pi * (3.0 * m + n),
                            row.threshold->margin, row.threshold->solvable});
      }
      if (cfg.sweep.solve && row.solvable) {
        const Problem pb = c.problem();
        Solution s = solve(pb, c.settings());
        const Assembled a = assemble(pb);
        const ResidualReport res = pde_residual(pb, a, s.state);
        row.converged = s.converged;
        row.iterations = s.iterations;
        row.residual_sup = std::max(res.first.sup, res.second.sup);
        if (!s.converged)
          set_status(rep, kExitNotConverged, "sweep point " + std::to_string(index) + ": " + s.message);
      }
      rep.sweep.push_back(std::move(row));
      ++index;
    }
  }
  if (out_dir && !cfg.output.plots_path.empty() && !boundary.empty())
    write_sweep_boundary_csv(under(out_dir, cfg.output.plots_path + "/sweep_boundary.csv"), boundary);
  return rep;
}

}  // namespace

RunReport run_command(const std::string& command, const RunConfig& cfg,
                      const std::optional<std::string>& out_dir) {
  const auto t_total = Clock::now();
  if (command != "check" && command != "solve" && command != "sweep" && command != "compare")
    throw Error(ErrorKind::ValidationError, "unknown command '" + command + "'");
  if (const auto errors = validate_config(cfg); !errors.empty())
    throw Error(ErrorKind::ValidationError, errors.front());

  RunReport rep;
  rep.command = command;
  rep.config = cfg;
  rep.config_hash = config_hash(cfg);

  if (command == "sweep") {
    rep = run_sweep(std::move(rep), cfg, out_dir);
    rep.timings["total"] = ms_since(t_total);
    write_report(rep, out_dir);
    return rep;
  }

  rep.threshold = threshold_of(cfg);
  if (rep.threshold && !rep.threshold->solvable) {
    set_status(rep, kExitThreshold, "no solution exists for this configuration");
    rep.timings["total"] = ms_since(t_total);
    write_report(rep, out_dir);
    return rep;
  }
  if (command == "check") {
    rep.timings["total"] = ms_since(t_total);
    write_report(rep, out_dir);
    return rep;
  }

  std::string method = cfg.solver.method;
  if (command == "compare") {
    if (cfg.mode != Geometry::Torus || cfg.model != Model::Base)
      throw Error(ErrorKind::ValidationError, "compare needs mode = torus and model = base");
    method = "both";
  }

  const Problem pb = cfg.problem();
  auto t0 = Clock::now();
  const Assembled a = assemble(pb);
  rep.timings["background"] = ms_since(t0);

  std::optional<Solution> newton;
  std::optional<FixedPointResult> fixed;
  if (method == "newton" || method == "both") {
    t0 = Clock::now();
    newton = minimize(*a.functional, StatePair::zeros(a.disc->nx(), a.disc->ny()), cfg.settings());
    rep.timings["newton"] = ms_since(t0);
    rep.methods.push_back(summarize_newton(*newton, pb, a));
    if (!newton->converged) set_status(rep, kExitNotConverged, "newton: " + newton->message);
  }
  if (method == "fixedpoint" || method == "both") {
    t0 = Clock::now();
    fixed = continuation_solve(ContinuationSchedule::uniform(cfg.solver.continuation_steps), pb);
    rep.timings["fixedpoint"] = ms_since(t0);
    rep.methods.push_back(summarize_fixed_point(*fixed, pb, a));
    if (!fixed->solution.converged) set_status(rep, kExitNotConverged, "fixedpoint: " + fixed->solution.message);
  }
  if (newton && fixed)
    rep.cross_method_sup_diff = std::max(sup_diff(newton->state.u, fixed->solution.state.u),
                                         sup_diff(newton->state.f, fixed->solution.state.f));

  const StatePair& st = newton ? newton->state : fixed->solution.state;
  t0 = Clock::now();
  DiagnosticsReport diag = run_diagnostics(pb, a, st);
  if (cfg.solver.uniqueness_seeds > 0)
    diag.uniqueness_spread =
        uniqueness_probe(pb, cfg.solver.uniqueness_seeds, cfg.settings(), cfg.solver.seed).spread;
  rep.diagnostics = diag;
  rep.timings["diagnostics"] = ms_since(t0);

  if (out_dir) {
    t0 = Clock::now();
    if (!cfg.output.fields_path.empty()) {
      const PhysicalFields ph = reconstruct_physical(pb, a, st);
      dump_fields_csv(under(out_dir, cfg.output.fields_path + ".csv"), *a.disc, ph);
      if (cfg.output.binary)
        dump_fields_binary(under(out_dir, cfg.output.fields_path + ".bin"), *a.disc, ph, rep.config_hash);
    }
    if (!cfg.output.plots_path.empty()) {
      if (const auto* g = std::get_if<PlaneGrid>(&pb.grid))
        write_radial_profile_csv(under(out_dir, cfg.output.plots_path + "/radial_profile.csv"),
                                 radial_profile(*g, a, st));
    }
    rep.timings["dumps"] = ms_since(t0);
  }
  rep.timings["total"] = ms_since(t_total);
  write_report(rep, out_dir);
  return rep;
}

}  // namespace bpsv
