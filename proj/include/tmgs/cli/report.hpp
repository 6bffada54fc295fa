#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "tmgs/cli/state_io.hpp"
#include "tmgs/decomposition.hpp"
#include "tmgs/eof_solver.hpp"
#include "tmgs/error.hpp"
#include "tmgs/oracle.hpp"

namespace tmgs::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr double kCertificateTol = 1e-8;

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitUnphysical = 3,
  kExitNoFeasibleRoot = 4,
  kExitCertification = 5,
  kExitOracleMismatch = 6,
};

int exit_code_for(ErrorCode code);

struct AnalysisOptions {
  double tol = kDefaultTol;
  bool force_general = false;
  bool oracle = false;
  OracleConfig oracle_config;
};

struct OracleSummary {
  double ef_nats = 0.0;
  double u1 = 1.0;
  double u2 = 1.0;
  double resolution = 0.0;
};

/// Everything the tool reports about one state. Mirrors the JSON schema.
struct EntanglementReport {
  std::string label;
  // physicality
  double nu_minus = 0.0;
  double nu_plus = 0.0;
  double robertson = 0.0;
  StandardFormParams standard_form;
  // separability
  std::string verdict;  // "entangled" | "boundary" | "separable"
  double simon = 0.0;
  double kappa_tilde_minus = 0.0;
  // eof
  double ef_nats = 0.0;
  double ef_ebits = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
  double p_m = 0.0;
  double w1 = 1.0;
  double w2 = 1.0;
  std::string branch;
  Residuals residuals;
  int feasible_candidates = 0;
  bool scaling_below_one = false;
  std::string note;
  // certificate
  std::string certificate_kind;
  bool certificate_passed = false;
  double classicality_boundary_gap = 0.0;
  double det_gap = 0.0;
  double simon_of_partner = 0.0;
  double min_rank3_minor = 0.0;
  double cf_law_max_residual = 0.0;
  std::uint64_t law_seed = kDefaultLawSeed;
  std::string violation;
  std::optional<OracleSummary> oracle;
};

/// validate -> reduce -> classify -> solve -> certify (-> oracle). Throws Error;
/// a failed certificate is reported, not thrown.
EntanglementReport analyze(const StateInput& input, const AnalysisOptions& options);

nlohmann::json to_json(const EntanglementReport& r);
EntanglementReport report_from_json(const nlohmann::json& j);

/// Report-shaped object for a state that could not be analysed.
nlohmann::json error_json(const std::string& label, const Error& e);

std::string to_text(const EntanglementReport& r);

/// Compact JSON with every floating-point number at 17 significant digits.
std::string dump(const nlohmann::json& j);

}  // namespace tmgs::cli
