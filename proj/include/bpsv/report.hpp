#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpsv/config.hpp"
#include "bpsv/diagnostics.hpp"
#include "bpsv/fixed_point.hpp"

namespace bpsv {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.3.0";

struct MethodSummary {
  std::string method;  // newton | fixedpoint
  bool converged = false;
  int iterations = 0;
  std::string message;
  double final_gradient = 0.0;  // sup-norm gradient (newton) or fixed-point residual
  double energy = 0.0;
  std::vector<double> grad_history;
  std::vector<double> energy_history;
  ResidualReport residual;
  // fixed-point route only
  std::vector<StageRecord> stages;
  double x_norm_ceiling = 0.0;
  int refinements = 0;
  bool monotone = true;
};

struct SweepRow {
  std::size_t index = 0;
  double p1 = 0.0;
  std::optional<double> p2;
  std::optional<ThresholdReport> threshold;  // torus only
  bool solvable = true;
  std::optional<bool> converged;
  std::optional<int> iterations;
  std::optional<double> residual_sup;
};

struct RunReport {
  int schema_version = kSchemaVersion;
  std::string artifact_version = kArtifactVersion;
  std::string config_hash;
  std::string command;
  RunConfig config;
  std::optional<ThresholdReport> threshold;
  std::vector<MethodSummary> methods;
  std::optional<DiagnosticsReport> diagnostics;
  std::optional<double> cross_method_sup_diff;
  std::vector<SweepRow> sweep;
  std::string status = "ok";  // ok | threshold_violated | not_converged
  std::string message;
  int exit_code = 0;
  std::map<std::string, double> timings;  // milliseconds; excluded from determinism checks
};

nlohmann::json report_to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

// The report without its timings block, for bitwise comparisons.
nlohmann::json numeric_view(const RunReport& r);

}  // namespace bpsv
