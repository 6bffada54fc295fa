#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tmgs/cli/commands.hpp"

using namespace tmgs::cli;

int main(int argc, char** argv) {
  CLI::App app{"Entanglement of formation of two-mode Gaussian states"};
  app.require_subcommand(1);

  std::string path;
  AnalyzeFlags analyze_flags;
  BatchFlags batch_flags;
  RandomOptions random_options;
  OracleCheckFlags oracle_flags;

  auto* analyze = app.add_subcommand("analyze", "Analyse one state (JSON object)");
  analyze->add_option("path", path, "Input file")->required();
  auto* as_json = analyze->add_flag("--json", analyze_flags.json, "Emit the JSON report");
  analyze->add_flag("--text", "Emit the text report (default)")->excludes(as_json);
  analyze->add_flag("--oracle", analyze_flags.analysis.oracle, "Add the brute-force cross-check");
  analyze->add_option("--tol", analyze_flags.analysis.tol, "Validation tolerance")->check(CLI::PositiveNumber);
  analyze->add_flag("--force-general", analyze_flags.analysis.force_general, "Bypass closed-form special cases");

  auto* batch = app.add_subcommand("batch", "Analyse a JSON-lines file, one report per line");
  batch->add_option("path", path, "Input file")->required();
  batch->add_flag("--parallel", batch_flags.parallel, "Process lines concurrently (output order is kept)");
  batch->add_flag("--oracle", batch_flags.analysis.oracle, "Add the brute-force cross-check");
  batch->add_option("--tol", batch_flags.analysis.tol, "Validation tolerance")->check(CLI::PositiveNumber);
  batch->add_flag("--force-general", batch_flags.analysis.force_general, "Bypass closed-form special cases");

  auto* random = app.add_subcommand("random", "Emit reproducible random states as JSON lines");
  random->add_option("--count", random_options.count, "Number of states")->default_val(1);
  random->add_option("--seed", random_options.seed, "Generator seed")->default_val(42);
  random->add_flag("--entangled-only", random_options.entangled_only, "Keep entangled states only");

  auto* check = app.add_subcommand("oracle-check", "Compare solver and brute-force oracle on a JSON-lines file");
  check->add_option("path", path, "Input file")->required();
  check->add_option("--max-delta", oracle_flags.max_delta, "Largest acceptable |dEF| in nats")->default_val(1e-4);
  check->add_option("--tol", oracle_flags.tol, "Validation tolerance")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (*analyze) return cmd_analyze(path, analyze_flags, std::cout, std::cerr);
  if (*batch) return cmd_batch(path, batch_flags, std::cout, std::cerr);
  if (*random) return cmd_random(random_options, std::cout, std::cerr);
  return cmd_oracle_check(path, oracle_flags, std::cout, std::cerr);
}
