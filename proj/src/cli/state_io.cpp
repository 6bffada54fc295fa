#include "tmgs/cli/state_io.hpp"

#include <cmath>
#include <random>

#include "tmgs/error.hpp"

namespace tmgs::cli {

using nlohmann::json;

namespace {

double number_at(const json& obj, const char* key) {
  if (!obj.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw Error(ErrorCode::ParseError, std::string("field '") + key + "' is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::ParseError, std::string("field '") + key + "' is not finite");
  return x;
}

}  // namespace

CovarianceMatrix StateInput::matrix() const {
  if (covariance) return *covariance;
  return build_scaled_cm(*standard_form, scaling.value_or(ScalingFactors{}));
}

StateInput parse_state(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "state must be a JSON object");
  if (!j.contains("convention")) throw Error(ErrorCode::ConventionMismatch, "missing 'convention' field");
  if (!j.at("convention").is_string() || j.at("convention").get<std::string>() != kConvention) {
    throw Error(ErrorCode::ConventionMismatch,
                "unsupported convention " + j.at("convention").dump() + " (expected \"vacuum-half\")");
  }

  StateInput s;
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw Error(ErrorCode::ParseError, "'label' must be a string");
    s.label = j.at("label").get<std::string>();
  }

  const bool has_cm = j.contains("covariance");
  const bool has_sf = j.contains("standard_form");
  if (has_cm == has_sf) {
    throw Error(ErrorCode::ParseError, "exactly one of 'covariance' and 'standard_form' is required");
  }

  if (has_cm) {
    const json& arr = j.at("covariance");
    if (!arr.is_array() || arr.size() != 16) {
      throw Error(ErrorCode::ParseError, "'covariance' must be an array of 16 numbers (row-major)");
    }
    std::vector<double> entries;
    for (const json& v : arr) {
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw Error(ErrorCode::ParseError, "'covariance' entries must be finite numbers");
      }
      entries.push_back(v.get<double>());
    }
    s.covariance = CovarianceMatrix::from_row_major(entries);
    if (j.contains("scaling")) throw Error(ErrorCode::ParseError, "'scaling' applies to 'standard_form' only");
  } else {
    const json& sf = j.at("standard_form");
    if (!sf.is_object()) throw Error(ErrorCode::ParseError, "'standard_form' must be an object");
    s.standard_form = StandardFormParams{number_at(sf, "b1"), number_at(sf, "b2"), number_at(sf, "c"),
                                         number_at(sf, "d")};
    if (j.contains("scaling")) {
      const json& sc = j.at("scaling");
      if (!sc.is_object()) throw Error(ErrorCode::ParseError, "'scaling' must be an object");
      s.scaling = ScalingFactors{number_at(sc, "u1"), number_at(sc, "u2")};
      if (!(s.scaling->u1 > 0.0) || !(s.scaling->u2 > 0.0)) {
        throw Error(ErrorCode::ParseError, "scaling factors must be positive");
      }
    }
  }
  return s;
}

StateInput parse_state_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed JSON: ") + e.what());
  }
  return parse_state(j);
}

json to_json(const StateInput& s) {
  json j;
  j["convention"] = kConvention;
  if (!s.label.empty()) j["label"] = s.label;
  if (s.covariance) {
    const auto rm = s.covariance->row_major();
    j["covariance"] = json(std::vector<double>(rm.begin(), rm.end()));
  } else if (s.standard_form) {
    const auto& sf = *s.standard_form;
    j["standard_form"] = {{"b1", sf.b1}, {"b2", sf.b2}, {"c", sf.c}, {"d", sf.d}};
    if (s.scaling) j["scaling"] = {{"u1", s.scaling->u1}, {"u2", s.scaling->u2}};
  }
  return j;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") != std::string_view::npos) out.emplace_back(line);
    start = end + 1;
  }
  return out;
}

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<StateInput> random_states(const RandomOptions& options) {
  std::mt19937_64 rng(options.seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit_from_bits(rng()); };

  std::vector<StateInput> out;
  long draws = 0;
  while (static_cast<int>(out.size()) < options.count) {
    ++draws;
    if (draws >= 1'000'000 && static_cast<double>(out.size()) < 1e-3 * static_cast<double>(draws)) {
      throw Error(ErrorCode::GenerationStalled, "random state generator accepts fewer than 0.1% of draws");
    }
    StandardFormParams sf;
    sf.b1 = uniform(0.6, 3.0);
    sf.b2 = uniform(0.6, 3.0);
    sf.c = uniform(0.0, std::sqrt(sf.b1 * sf.b2));
    // |d| in (0, c]
    sf.d = -(sf.c * (1.0 - unit_from_bits(rng())));

    const PhysicalityVerdict v = assess_physicality(build_scaled_cm(sf));
    if (!v.physical() || v.nu_minus < kVacuumVariance + 1e-6) continue;
    if (options.entangled_only && !(sf.simon() < -1e-6)) continue;

    StateInput s;
    s.label = "random-" + std::to_string(options.seed) + "-" + std::to_string(out.size());
    s.standard_form = sf;
    out.push_back(s);
  }
  return out;
}

}  // namespace tmgs::cli
