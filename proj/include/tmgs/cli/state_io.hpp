#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tmgs/gaussian.hpp"

namespace tmgs::cli {

inline constexpr std::string_view kConvention = "vacuum-half";

/// One input state: a full covariance matrix, or a standard form with optional
/// local scalings.
struct StateInput {
  std::string label;
  std::optional<CovarianceMatrix> covariance;
  std::optional<StandardFormParams> standard_form;
  std::optional<ScalingFactors> scaling;

  /// The covariance matrix the state describes.
  CovarianceMatrix matrix() const;
};

/// Throws ParseError for malformed input and ConventionMismatch for any
/// convention other than "vacuum-half".
StateInput parse_state(const nlohmann::json& j);
StateInput parse_state_text(std::string_view text);

nlohmann::json to_json(const StateInput& s);

/// Non-empty lines of a JSON-lines document, in order.
std::vector<std::string> split_lines(std::string_view text);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit word; unlike the
/// standard distributions its output is identical on every platform.
double unit_from_bits(std::uint64_t bits);

struct RandomOptions {
  int count = 1;
  std::uint64_t seed = 42;
  bool entangled_only = false;
};

/// Reproducible random standard forms. Throws GenerationStalled when fewer than
/// 0.1% of 10^6 draws are accepted.
std::vector<StateInput> random_states(const RandomOptions& options);

}  // namespace tmgs::cli
