#include "tmgs/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

namespace tmgs::cli {

using nlohmann::json;

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

int unreadable(const std::string& path, std::ostream& err) {
  err << "error: cannot read " << path << "\n";
  return kExitParse;
}

void report_error(const Error& e, std::ostream& err) {
  err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
}

}  // namespace

int cmd_analyze(const std::string& path, const AnalyzeFlags& flags, std::ostream& out, std::ostream& err) {
  const auto text = read_file(path);
  if (!text) return unreadable(path, err);

  std::string label;
  try {
    const StateInput input = parse_state_text(*text);
    label = input.label;
    const EntanglementReport r = analyze(input, flags.analysis);
    if (flags.json) {
      out << dump(to_json(r)) << "\n";
    } else {
      out << to_text(r);
    }
    if (!r.certificate_passed) {
      err << "error: CertificationFailed: certificate violated on " << r.violation << "\n";
      return kExitCertification;
    }
    return kExitOk;
  } catch (const Error& e) {
    if (flags.json) out << dump(error_json(label, e)) << "\n";
    report_error(e, err);
    return exit_code_for(e.code());
  }
}

std::string batch_line(const std::string& line, const AnalysisOptions& options) {
  std::string label;
  try {
    const StateInput input = parse_state_text(line);
    label = input.label;
    const EntanglementReport r = analyze(input, options);
    json j = to_json(r);
    if (!r.certificate_passed) {
      const Error e(ErrorCode::CertificationFailed, "certificate violated on " + r.violation);
      j["error"] = error_json(label, e).at("error");
    }
    return dump(j);
  } catch (const Error& e) {
    return dump(error_json(label, e));
  } catch (const std::exception& e) {
    return dump(error_json(label, Error(ErrorCode::ParseError, e.what())));
  }
}

int cmd_batch(const std::string& path, const BatchFlags& flags, std::ostream& out, std::ostream& err) {
  const auto text = read_file(path);
  if (!text) return unreadable(path, err);
  const std::vector<std::string> lines = split_lines(*text);
  std::vector<std::string> results(lines.size());

  if (flags.parallel && lines.size() > 1) {
    const std::size_t workers =
        std::min<std::size_t>(lines.size(), std::max(2u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < lines.size(); i = next++) results[i] = batch_line(lines[i], flags.analysis);
      });
    }
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < lines.size(); ++i) results[i] = batch_line(lines[i], flags.analysis);
  }

  for (const auto& r : results) out << r << "\n";
  return kExitOk;
}

int cmd_random(const RandomOptions& options, std::ostream& out, std::ostream& err) {
  if (options.count < 1) {
    err << "error: --count must be at least 1\n";
    return kExitParse;
  }
  try {
    for (const StateInput& s : random_states(options)) out << dump(to_json(s)) << "\n";
    return kExitOk;
  } catch (const Error& e) {
    report_error(e, err);
    return exit_code_for(e.code());
  }
}

int cmd_oracle_check(const std::string& path, const OracleCheckFlags& flags, std::ostream& out, std::ostream& err) {
  const auto text = read_file(path);
  if (!text) return unreadable(path, err);
  const std::vector<std::string> lines = split_lines(*text);

  out << std::left << std::setw(24) << "state" << std::setw(22) << "solver [nats]" << std::setw(22)
      << "oracle [nats]" << "|dEF|\n";
  double worst = 0.0;
  bool unresolved = false;
  int checked = 0;
  int failed = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string label = "line-" + std::to_string(i + 1);
    try {
      const StateInput input = parse_state_text(lines[i]);
      if (!input.label.empty()) label = input.label;
      const CovarianceMatrix v = input.matrix();
      validate_physical(v, flags.tol);
      const StandardFormParams sf = reduce_to_standard_form(v, flags.tol);
      SolverOptions so;
      so.tol = flags.tol;
      const OptimalDecomposition sol = solve_eof(sf, so);
      const OracleResult o = brute_force_eof(sf, flags.oracle_config);
      const double delta = std::abs(sol.ef_nats - o.ef_nats);
      if (!std::isfinite(delta)) {
        unresolved = true;
      } else {
        worst = std::max(worst, delta);
      }
      ++checked;
      char row[128];
      std::snprintf(row, sizeof row, "%-22.17g%-22.17g%.3e", sol.ef_nats, o.ef_nats, delta);
      out << std::setw(24) << label << row << "\n";
    } catch (const Error& e) {
      ++failed;
      out << std::setw(24) << label << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    }
  }
  char summary[160];
  std::snprintf(summary, sizeof summary, "max |dEF| = %.3e nats over %d states (threshold %.3e)", worst, checked,
                flags.max_delta);
  out << summary << "\n";
  if (failed > 0) err << "warning: " << failed << " state(s) could not be analysed\n";
  if (unresolved || worst > flags.max_delta) {
    err << "error: oracle mismatch exceeds threshold\n";
    return kExitOracleMismatch;
  }
  return kExitOk;
}

}  // namespace tmgs::cli
