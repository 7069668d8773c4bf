// Batch front end: vortexctl --config run.json --command solve --out results/

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bpsv/commands.hpp"
#include "bpsv/error.hpp"
#include "bpsv/field_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"BPS vortex solver: existence checks, solves, sweeps and cross-method comparison"};
  std::string config_path;
  std::string command = "solve";
  std::vector<std::string> overrides;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--command", command, "check | solve | sweep | compare")
      ->check(CLI::IsMember({"check", "solve", "sweep", "compare"}));
  app.add_option("--override", overrides, "key=value with a dotted key path (repeatable)");
  app.add_option("--out", out_dir, "output directory for the report, dumps and plot data");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : bpsv::kExitError;  // --help is not an error
  }

  try {
    nlohmann::json doc;
    const std::string text = bpsv::read_text_file(config_path);
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      bpsv::parse_config(text);  // rethrows with line and column
    }
    for (const std::string& kv : overrides) bpsv::apply_override(doc, kv);
    const bpsv::RunConfig cfg = bpsv::config_from_json(doc);
    const bpsv::RunReport rep = bpsv::run_command(command, cfg, out_dir);
    std::printf("%s: %s", command.c_str(), rep.status.c_str());
    if (!rep.message.empty()) std::printf(" (%s)", rep.message.c_str());
    std::printf("\nreport: %s\n", (std::filesystem::path(out_dir) / cfg.output.report_path).c_str());
    return rep.exit_code;
  } catch (const bpsv::Error& e) {
    std::fprintf(stderr, "vortexctl: %s\n", e.what());
    return bpsv::kExitError;
  }
}
