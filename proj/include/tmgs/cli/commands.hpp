#pragma once

#include <iosfwd>
#include <string>

#include "tmgs/cli/report.hpp"
#include "tmgs/cli/state_io.hpp"

namespace tmgs::cli {

struct AnalyzeFlags {
  bool json = false;
  AnalysisOptions analysis;
};

struct BatchFlags {
  bool parallel = false;
  AnalysisOptions analysis;
};

struct OracleCheckFlags {
  double max_delta = 1e-4;
  double tol = kDefaultTol;
  OracleConfig oracle_config;
};

// Each command writes its report to `out`, diagnostics to `err`, and returns
// the process exit code.
int cmd_analyze(const std::string& path, const AnalyzeFlags& flags, std::ostream& out, std::ostream& err);
int cmd_batch(const std::string& path, const BatchFlags& flags, std::ostream& out, std::ostream& err);
int cmd_random(const RandomOptions& options, std::ostream& out, std::ostream& err);
int cmd_oracle_check(const std::string& path, const OracleCheckFlags& flags, std::ostream& out, std::ostream& err);

/// One line of batch output for one line of input; never throws.
std::string batch_line(const std::string& line, const AnalysisOptions& options);

}  // namespace tmgs::cli
