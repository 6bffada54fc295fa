#include "tmgs/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace tmgs::cli {

using nlohmann::json;

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // Keep integral values recognisably floating point.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump_into(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_into(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const json& v : j) {
        if (!first) out += ',';
        first = false;
        dump_into(v, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

std::string verdict_name(Separability s) {
  switch (s) {
    case Separability::Entangled:
      return "entangled";
    case Separability::Boundary:
      return "boundary";
    case Separability::Separable:
      break;
  }
  return "separable";
}

double get_double(const json& j, const char* key) {
  const json& v = j.at(key);
  return v.is_null() ? std::nan("") : v.get<double>();
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ConventionMismatch:
    case ErrorCode::NonSymmetric:
    case ErrorCode::NonPositiveScaling:
    case ErrorCode::GenerationStalled:
      return kExitParse;
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::Unphysical:
    case ErrorCode::ComplexSpectrum:
    case ErrorCode::DegenerateBlocks:
    case ErrorCode::InconsistentInvariants:
      return kExitUnphysical;
    case ErrorCode::CertificationFailed:
      return kExitCertification;
    default:
      // Every remaining failure comes from the solver not producing a
      // consistent optimum.
      return kExitNoFeasibleRoot;
  }
}

EntanglementReport analyze(const StateInput& input, const AnalysisOptions& options) {
  const double tol = options.tol;
  const CovarianceMatrix v = input.matrix();
  const PhysicalityVerdict phys = validate_physical(v, tol);
  const StandardFormParams sf = reduce_to_standard_form(v, tol);
  const SeparabilityVerdict sep = classify_separability(v, tol);

  SolverOptions so;
  so.tol = tol;
  so.force_general = options.force_general;
  const OptimalDecomposition sol = solve_eof(sf, so);

  CertificateKind kind = CertificateKind::Interior;
  if (sep.verdict == Separability::Boundary) kind = CertificateKind::Boundary;
  if (sep.verdict == Separability::Separable) kind = CertificateKind::Separable;
  const DecompositionCertificate cert = assess_certificate(
      build_scaled_cm(sf, sol.w), build_tmsvs_cm(sol.tmsvs), std::max(kCertificateTol, tol), kind);

  EntanglementReport r;
  r.label = input.label;
  r.nu_minus = phys.nu_minus;
  r.nu_plus = phys.nu_plus;
  r.robertson = phys.robertson;
  r.standard_form = sf;
  r.verdict = verdict_name(sep.verdict);
  r.simon = sep.simon;
  r.kappa_tilde_minus = sep.kappa_tilde_minus;
  r.ef_nats = sol.ef_nats;
  r.ef_ebits = sol.ef_ebits;
  r.x_m = sol.tmsvs.x();
  r.y_m = sol.tmsvs.y();
  r.p_m = sol.p_m;
  r.w1 = sol.w.u1;
  r.w2 = sol.w.u2;
  r.branch = std::string(to_string(sol.branch));
  r.residuals = sol.residuals;
  r.feasible_candidates = sol.feasible_count;
  r.scaling_below_one = sol.scaling_below_one;
  r.note = sol.note;
  r.certificate_kind = std::string(to_string(cert.kind));
  r.certificate_passed = cert.passed;
  r.classicality_boundary_gap = cert.classicality_boundary_gap;
  r.det_gap = cert.det_gap;
  r.simon_of_partner = cert.simon_of_partner;
  r.min_rank3_minor = cert.min_rank3_minor;
  r.cf_law_max_residual = cert.cf_law_max_residual;
  r.law_seed = cert.law_seed;
  r.violation = cert.violation;

  if (options.oracle) {
    const OracleResult o = brute_force_eof(sf, options.oracle_config);
    r.oracle = OracleSummary{o.ef_nats, o.u_star.u1, o.u_star.u2, o.resolution};
  }
  return r;
}

json to_json(const EntanglementReport& r) {
  json j;
  j["label"] = r.label;
  j["physicality"] = {{"nu_minus", r.nu_minus}, {"nu_plus", r.nu_plus}, {"D", r.robertson}};
  j["standard_form"] = {{"b1", r.standard_form.b1},
                        {"b2", r.standard_form.b2},
                        {"c", r.standard_form.c},
                        {"d", r.standard_form.d}};
  j["separability"] = {{"verdict", r.verdict}, {"DTilde", r.simon}, {"kappaTilde_minus", r.kappa_tilde_minus}};
  j["eof"] = {{"ef_nats", r.ef_nats},
              {"ef_ebits", r.ef_ebits},
              {"x_m", r.x_m},
              {"y_m", r.y_m},
              {"p_m", r.p_m},
              {"w1", r.w1},
              {"w2", r.w2},
              {"branch", r.branch},
              {"residuals",
               {{"purity", r.residuals.purity}, {"c1", r.residuals.c1}, {"c2", r.residuals.c2}, {"c3", r.residuals.c3}}},
              {"feasible_candidates", r.feasible_candidates},
              {"scaling_below_one", r.scaling_below_one},
              {"note", r.note}};
  j["certificate"] = {{"kind", r.certificate_kind},
                      {"passed", r.certificate_passed},
                      {"classicality_boundary_gap", r.classicality_boundary_gap},
                      {"det_gap", r.det_gap},
                      {"simon_of_partner", r.simon_of_partner},
                      {"min_rank3_minor", r.min_rank3_minor},
                      {"cf_law_max_residual", r.cf_law_max_residual},
                      {"law_seed", r.law_seed},
                      {"violation", r.violation}};
  if (r.oracle) {
    j["oracle"] = {{"ef_nats", r.oracle->ef_nats},
                   {"u_star", {r.oracle->u1, r.oracle->u2}},
                   {"resolution", r.oracle->resolution}};
  }
  j["versions"] = {{"schema", kSchemaVersion}};
  return j;
}

EntanglementReport report_from_json(const json& j) {
  try {
    if (j.at("versions").at("schema").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::ParseError, "unsupported report schema");
    }
    EntanglementReport r;
    r.label = j.at("label").get<std::string>();
    const json& ph = j.at("physicality");
    r.nu_minus = get_double(ph, "nu_minus");
    r.nu_plus = get_double(ph, "nu_plus");
    r.robertson = get_double(ph, "D");
    const json& sf = j.at("standard_form");
    r.standard_form = {get_double(sf, "b1"), get_double(sf, "b2"), get_double(sf, "c"), get_double(sf, "d")};
    const json& sp = j.at("separability");
    r.verdict = sp.at("verdict").get<std::string>();
    r.simon = get_double(sp, "DTilde");
    r.kappa_tilde_minus = get_double(sp, "kappaTilde_minus");
    const json& e = j.at("eof");
    r.ef_nats = get_double(e, "ef_nats");
    r.ef_ebits = get_double(e, "ef_ebits");
    r.x_m = get_double(e, "x_m");
    r.y_m = get_double(e, "y_m");
    r.p_m = get_double(e, "p_m");
    r.w1 = get_double(e, "w1");
    r.w2 = get_double(e, "w2");
    r.branch = e.at("branch").get<std::string>();
    const json& res = e.at("residuals");
    r.residuals = {get_double(res, "purity"), get_double(res, "c1"), get_double(res, "c2"), get_double(res, "c3")};
    r.feasible_candidates = e.at("feasible_candidates").get<int>();
    r.scaling_below_one = e.at("scaling_below_one").get<bool>();
    r.note = e.at("note").get<std::string>();
    const json& c = j.at("certificate");
    r.certificate_kind = c.at("kind").get<std::string>();
    r.certificate_passed = c.at("passed").get<bool>();
    r.classicality_boundary_gap = get_double(c, "classicality_boundary_gap");
    r.det_gap = get_double(c, "det_gap");
    r.simon_of_partner = get_double(c, "simon_of_partner");
    r.min_rank3_minor = get_double(c, "min_rank3_minor");
    r.cf_law_max_residual = get_double(c, "cf_law_max_residual");
    r.law_seed = c.at("law_seed").get<std::uint64_t>();
    r.violation = c.at("violation").get<std::string>();
    if (j.contains("oracle")) {
      const json& o = j.at("oracle");
      r.oracle = OracleSummary{get_double(o, "ef_nats"), o.at("u_star").at(0).get<double>(),
                               o.at("u_star").at(1).get<double>(), get_double(o, "resolution")};
    }
    return r;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("malformed report: ") + ex.what());
  }
}

json error_json(const std::string& label, const Error& e) {
  json j;
  j["label"] = label;
  j["error"] = {{"code", std::string(to_string(e.code()))},
                {"exit_code", exit_code_for(e.code())},
                {"message", e.what()},
                {"margin", e.margin()}};
  j["versions"] = {{"schema", kSchemaVersion}};
  return j;
}

std::string to_text(const EntanglementReport& r) {
  std::ostringstream os;
  os.precision(10);
  if (!r.label.empty()) os << "state: " << r.label << "\n";
  os << "symplectic spectrum: nu- = " << r.nu_minus << ", nu+ = " << r.nu_plus << " (D = " << r.robertson
     << ")\n";
  os << "standard form: b1 = " << r.standard_form.b1 << ", b2 = " << r.standard_form.b2
     << ", c = " << r.standard_form.c << ", d = " << r.standard_form.d << "\n";
  os << "separability: " << r.verdict << " (D~ = " << r.simon << ", kappa~- = " << r.kappa_tilde_minus << ")\n";
  os << "entanglement of formation: " << r.ef_nats << " nats = " << r.ef_ebits << " ebits\n";
  os << "  branch " << r.branch << ", x_m = " << r.x_m << ", y_m = " << r.y_m << ", p_m = " << r.p_m
     << ", w = (" << r.w1 << ", " << r.w2 << ")\n";
  os << "  residuals: purity " << r.residuals.purity << ", c1 " << r.residuals.c1 << ", c2 " << r.residuals.c2
     << ", c3 " << r.residuals.c3 << "\n";
  if (r.scaling_below_one) os << "  warning: a local scaling factor is below 1\n";
  if (r.feasible_candidates > 1) os << "  note: " << r.feasible_candidates << " feasible quartic roots\n";
  if (!r.note.empty()) os << "  note: " << r.note << "\n";
  os << "certificate (" << r.certificate_kind << "): " << (r.certificate_passed ? "passed" : "FAILED")
     << (r.violation.empty() ? "" : " on " + r.violation) << "\n";
  os << "  classicality gap " << r.classicality_boundary_gap << ", det gap " << r.det_gap
     << ", partner D~ " << r.simon_of_partner << ", min rank-3 minor " << r.min_rank3_minor
     << ", CF law residual " << r.cf_law_max_residual << " (seed " << r.law_seed << ")\n";
  if (r.oracle) {
    os << "oracle: " << r.oracle->ef_nats << " nats at u = (" << r.oracle->u1 << ", " << r.oracle->u2
       << "), resolution " << r.oracle->resolution << ", |dEF| = " << std::abs(r.oracle->ef_nats - r.ef_nats)
       << "\n";
  }
  return os.str();
}

std::string dump(const json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

}  // namespace tmgs::cli
