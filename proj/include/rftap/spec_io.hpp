#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rftap/market.hpp"
#include "rftap/pricing.hpp"
#include "rftap/toy.hpp"

namespace rftap::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSpecVersion = "rftap-spec/1";
inline constexpr const char* kReportVersion = "rftap-report/1";

// A parsed market-spec document. Either `space` + `models` or `toy` is given.
struct MarketSpec {
  std::string version;
  ModelFamily family;
  std::optional<ToyParams> toy;
  std::vector<StaticOption> options;
  std::vector<std::pair<std::string, Claim>> claims;

  // Throws ParseError naming /claims/<name>.
  const Claim& claim(std::string_view name) const;
};

// Errors carry the JSON pointer of the offending node as a message prefix
// ("/space/partitions/1: ..."), keeping the kind of the underlying error.
MarketSpec parse_market_spec(const Json& document);
MarketSpec parse_market_spec_text(std::string_view text);
MarketSpec load_market_spec(const std::string& path);

// Reads a whole file as JSON. Throws ParseError.
Json load_json(const std::string& path);

// The explicit form (space + models + options + claims), never a toy stanza.
Json write_market_spec(const MarketSpec& spec);

Json to_json(const Rational& value);
Rational rational_from_json(const Json& node, const std::string& path);

// {theta: {omega: "p/q"}}.
Json to_json(const ModelFamily& family, const RobustPricingSystem& system);
// Accepts the form above. Missing entries are zero. Throws ParseError.
RobustPricingSystem system_from_json(const ModelFamily& family, const Json& node,
                                     const std::string& path);

// [{"t": 1, "atom": [...outcome names], "H": ["p/q", ...]}, ...]
Json to_json(const ModelFamily& family, const PredictableStrategy& strategy);
PredictableStrategy strategy_from_json(const ModelFamily& family, const Json& node,
                                       const std::string& path);

// {theta: {omega: "p/q"}}.
Json to_json(const ModelFamily& family, const Claim& claim);

}  // namespace rftap::io
