#include "rftap/spec_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rftap/errors.hpp"

namespace rftap::io {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ParseError((path.empty() ? "/" : path) + ": " + message);
}

// Runs f, prefixing any library error with the document path.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string what = e.what();
    if (!what.empty() && what.front() == '/') throw;
    rethrow_with_prefix(e, path.empty() ? "/" : path);
  }
}

const Json& member(const Json& node, const std::string& key, const std::string& path) {
  if (!node.is_object()) fail(path, "expected an object");
  auto it = node.find(key);
  if (it == node.end()) fail(path, "missing \"" + key + "\"");
  return *it;
}

const Json& array_at(const Json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array");
  return node;
}

std::string string_at(const Json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

std::size_t index_at(const Json& node, const std::string& path) {
  if (!node.is_number_unsigned() && !(node.is_number_integer() && node.get<long long>() >= 0))
    fail(path, "expected a nonnegative integer");
  return node.get<std::size_t>();
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

RationalVector rational_array(const Json& node, const std::string& path, std::size_t expected) {
  array_at(node, path);
  if (node.size() != expected)
    fail(path, "expected " + std::to_string(expected) + " entries, got " + std::to_string(node.size()));
  RationalVector out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(rational_from_json(node[i], child(path, i)));
  return out;
}

// Payoff per outcome: an array in outcome order or an object keyed by name.
RationalVector outcome_values(const FilteredSpace& space, const Json& node, const std::string& path) {
  if (node.is_array()) return rational_array(node, path, space.num_outcomes());
  if (!node.is_object()) fail(path, "expected an array or an object keyed by outcome");
  RationalVector out(space.num_outcomes(), Rational(0));
  std::vector<char> seen(space.num_outcomes(), 0);
  for (const auto& [name, value] : node.items()) {
    const std::size_t omega = at_path(path, [&] { return space.outcome_index(name); });
    out[omega] = rational_from_json(value, child(path, name));
    seen[omega] = 1;
  }
  for (std::size_t omega = 0; omega < seen.size(); ++omega)
    if (!seen[omega]) fail(path, "no value for outcome \"" + space.outcomes()[omega] + "\"");
  return out;
}

// A claim: one payoff shared by all models, or an object {theta: payoff}.
Claim claim_from_json(const ModelFamily& family, const Json& node, const std::string& path) {
  const auto& space = family.space();
  Claim claim(family.num_models(), family.num_outcomes());
  const bool per_model = node.is_object() && !node.empty() &&
                         family.thetas().end() != std::find(family.thetas().begin(), family.thetas().end(),
                                                            node.begin().key());
  if (!per_model) {
    const RationalVector common = outcome_values(space, node, path);
    for (std::size_t k = 0; k < family.num_models(); ++k)
      for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega) claim(k, omega) = common[omega];
    return claim;
  }
  std::vector<char> seen(family.num_models(), 0);
  for (const auto& [name, value] : node.items()) {
    const std::size_t k = at_path(path, [&] { return family.theta_index(name); });
    const RationalVector payoff = outcome_values(space, value, child(path, name));
    for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega) claim(k, omega) = payoff[omega];
    seen[k] = 1;
  }
  for (std::size_t k = 0; k < seen.size(); ++k)
    if (!seen[k]) fail(path, "no payoff for model \"" + family.thetas()[k] + "\"");
  return claim;
}

FilteredSpace space_from_json(const Json& node, const std::string& path) {
  const Json& outcomes_node = array_at(member(node, "outcomes", path), child(path, "outcomes"));
  std::vector<std::string> outcomes;
  for (std::size_t i = 0; i < outcomes_node.size(); ++i)
    outcomes.push_back(string_at(outcomes_node[i], child(child(path, "outcomes"), i)));
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (!index.emplace(outcomes[i], i).second)
      fail(child(child(path, "outcomes"), i), "duplicate outcome \"" + outcomes[i] + "\"");

  const std::string ppath = child(path, "partitions");
  const Json& parts = array_at(member(node, "partitions", path), ppath);
  if (parts.empty()) fail(ppath, "need at least F_0");
  if (node.contains("horizon") && index_at(node["horizon"], child(path, "horizon")) + 1 != parts.size())
    fail(child(path, "horizon"), "horizon disagrees with the number of partitions");

  std::vector<std::vector<Atom>> partitions;
  for (std::size_t t = 0; t < parts.size(); ++t) {
    const std::string tpath = child(ppath, t);
    std::vector<Atom> atoms;
    for (std::size_t a = 0; a < array_at(parts[t], tpath).size(); ++a) {
      const std::string apath = child(tpath, a);
      Atom atom;
      for (std::size_t i = 0; i < array_at(parts[t][a], apath).size(); ++i) {
        const std::string name = string_at(parts[t][a][i], child(apath, i));
        auto it = index.find(name);
        if (it == index.end()) fail(child(apath, i), "unknown outcome \"" + name + "\"");
        atom.push_back(it->second);
      }
      atoms.push_back(std::move(atom));
    }
    partitions.push_back(std::move(atoms));
  }

  const std::string prob_path = child(path, "prob");
  const Json& prob_node = member(node, "prob", path);
  RationalVector prob;
  if (prob_node.is_array()) {
    prob = rational_array(prob_node, prob_path, outcomes.size());
  } else if (prob_node.is_object()) {
    prob.assign(outcomes.size(), Rational(0));
    std::vector<char> seen(outcomes.size(), 0);
    for (const auto& [name, value] : prob_node.items()) {
      auto it = index.find(name);
      if (it == index.end()) fail(child(prob_path, name), "unknown outcome \"" + name + "\"");
      prob[it->second] = rational_from_json(value, child(prob_path, name));
      seen[it->second] = 1;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) fail(prob_path, "no probability for outcome \"" + outcomes[i] + "\"");
  } else {
    fail(prob_path, "expected an array or an object keyed by outcome");
  }

  try {
    return FilteredSpace(std::move(outcomes), std::move(partitions), std::move(prob));
  } catch (const Error& e) {
    rethrow_with_prefix(e, e.kind() == "MeasureError" ? prob_path : ppath);
  }
}

// prices[t][omega]: a rational (d = 1) or an array of d rationals.
AdaptedProcess process_from_json(const FilteredSpace& space, const Json& node, const std::string& path) {
  const std::size_t T = space.horizon();
  const std::size_t n = space.num_outcomes();
  array_at(node, path);
  if (node.size() != T + 1) fail(path, "expected " + std::to_string(T + 1) + " time slices");
  std::optional<std::size_t> dims;
  for (std::size_t t = 0; t <= T; ++t) {
    array_at(node[t], child(path, t));
    if (node[t].size() != n) fail(child(path, t), "expected " + std::to_string(n) + " outcomes");
    for (std::size_t omega = 0; omega < n; ++omega) {
      const Json& v = node[t][omega];
      const std::size_t d = v.is_array() ? v.size() : 1;
      if (d == 0) fail(child(child(path, t), omega), "empty price vector");
      if (dims && *dims != d) fail(child(child(path, t), omega), "price vectors differ in dimension");
      dims = d;
    }
  }
  AdaptedProcess process(T, n, *dims);
  for (std::size_t t = 0; t <= T; ++t)
    for (std::size_t omega = 0; omega < n; ++omega) {
      const std::string vpath = child(child(path, t), omega);
      const Json& v = node[t][omega];
      if (v.is_array()) {
        for (std::size_t j = 0; j < *dims; ++j) process(t, omega, j) = rational_from_json(v[j], child(vpath, j));
      } else {
        process(t, omega, 0) = rational_from_json(v, vpath);
      }
    }
  return process;
}

ToyParams toy_from_json(const Json& node, const std::string& path) {
  ToyParams params;
  params.horizon = index_at(member(node, "horizon", path), child(path, "horizon"));
  if (node.contains("s0")) params.s0 = rational_from_json(node["s0"], child(path, "s0"));
  const std::string mpath = child(path, "models");
  const Json& models = array_at(member(node, "models", path), mpath);
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::string ipath = child(mpath, i);
    ToyModel m;
    m.name = string_at(member(models[i], "name", ipath), child(ipath, "name"));
    m.mu = rational_array(member(models[i], "mu", ipath), child(ipath, "mu"), params.horizon);
    m.sigma = rational_array(member(models[i], "sigma", ipath), child(ipath, "sigma"), params.horizon);
    params.models.push_back(std::move(m));
  }
  if (node.contains("prob")) {
    if (params.horizon == 0 || params.horizon > 16) fail(child(path, "horizon"), "unsupported toy horizon");
    params.prob = rational_array(node["prob"], child(path, "prob"), std::size_t{1} << params.horizon);
  }
  return params;
}

}  // namespace

Json to_json(const Rational& value) { return to_string(value); }

Rational rational_from_json(const Json& node, const std::string& path) {
  if (node.is_string()) {
    const std::string text = node.get<std::string>();
    try {
      return parse_rational(text);
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  }
  if (node.is_number_integer()) return Rational(node.get<long long>());
  if (node.is_number_unsigned()) return Rational(node.get<unsigned long long>());
  if (node.is_number_float()) fail(path, "floating-point numbers are not accepted; use a \"p/q\" string");
  fail(path, "expected a rational");
}

const Claim& MarketSpec::claim(std::string_view name) const {
  for (const auto& [n, c] : claims)
    if (n == name) return c;
  throw ParseError("/claims/" + std::string(name) + ": no such claim");
}

MarketSpec parse_market_spec(const Json& document) {
  if (!document.is_object()) fail("", "expected an object");
  std::string version = kSpecVersion;
  if (document.contains("version")) {
    version = string_at(document["version"], "/version");
    if (version != kSpecVersion) fail("/version", "unsupported version \"" + version + "\"");
  }

  std::optional<ToyParams> toy;
  std::optional<ModelFamily> family;
  if (document.contains("toy")) {
    if (document.contains("space") || document.contains("models"))
      fail("/toy", "a toy stanza excludes \"space\" and \"models\"");
    toy = toy_from_json(document["toy"], "/toy");
    family = at_path("/toy", [&] { return build_toy(*toy); });
  } else {
    FilteredSpace space = space_from_json(member(document, "space", ""), "/space");
    const Json& models = array_at(member(document, "models", ""), "/models");
    std::vector<std::string> names;
    std::vector<AdaptedProcess> processes;
    for (std::size_t i = 0; i < models.size(); ++i) {
      const std::string ipath = child("/models", i);
      names.push_back(string_at(member(models[i], "name", ipath), child(ipath, "name")));
      processes.push_back(process_from_json(space, member(models[i], "prices", ipath), child(ipath, "prices")));
    }
    family = at_path("/models", [&] {
      return ModelFamily(std::move(space), std::move(names), std::move(processes));
    });
  }

  std::vector<StaticOption> options;
  if (document.contains("options")) {
    const Json& opts = array_at(document["options"], "/options");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < opts.size(); ++i) {
      const std::string ipath = child("/options", i);
      StaticOption option;
      option.name = string_at(member(opts[i], "name", ipath), child(ipath, "name"));
      if (!seen.insert(option.name).second) fail(child(ipath, "name"), "duplicate option name");
      option.quote = rational_from_json(member(opts[i], "quote", ipath), child(ipath, "quote"));
      option.payoff = claim_from_json(*family, member(opts[i], "payoff", ipath), child(ipath, "payoff"));
      options.push_back(std::move(option));
    }
  }

  std::vector<std::pair<std::string, Claim>> claims;
  if (document.contains("claims")) {
    const Json& node = document["claims"];
    if (!node.is_object()) fail("/claims", "expected an object keyed by claim name");
    for (const auto& [name, payload] : node.items())
      claims.emplace_back(name, claim_from_json(*family, payload, child("/claims", name)));
  }

  return MarketSpec{std::move(version), std::move(*family), std::move(toy), std::move(options), std::move(claims)};
}

MarketSpec parse_market_spec_text(std::string_view text) {
  Json document;
  try {
    document = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  return parse_market_spec(document);
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
}

MarketSpec load_market_spec(const std::string& path) { return parse_market_spec(load_json(path)); }

Json write_market_spec(const MarketSpec& spec) {
  const auto& family = spec.family;
  const auto& space = family.space();
  Json doc;
  doc["version"] = kSpecVersion;
  Json s;
  s["horizon"] = space.horizon();
  s["outcomes"] = space.outcomes();
  Json parts = Json::array();
  for (std::size_t t = 0; t <= space.horizon(); ++t) {
    Json atoms = Json::array();
    for (const auto& atom : space.atoms(t)) {
      Json names = Json::array();
      for (std::size_t omega : atom) names.push_back(space.outcomes()[omega]);
      atoms.push_back(std::move(names));
    }
    parts.push_back(std::move(atoms));
  }
  s["partitions"] = std::move(parts);
  Json prob = Json::object();
  for (std::size_t omega = 0; omega < space.num_outcomes(); ++omega)
    prob[space.outcomes()[omega]] = to_json(space.prob(omega));
  s["prob"] = std::move(prob);
  doc["space"] = std::move(s);

  Json models = Json::array();
  for (std::size_t k = 0; k < family.num_models(); ++k) {
    Json prices = Json::array();
    for (std::size_t t = 0; t <= family.horizon(); ++t) {
      Json slice = Json::array();
      for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega) {
        if (family.dims() == 1) {
          slice.push_back(to_json(family.price(k, t, omega, 0)));
        } else {
          Json v = Json::array();
          for (std::size_t j = 0; j < family.dims(); ++j) v.push_back(to_json(family.price(k, t, omega, j)));
          slice.push_back(std::move(v));
        }
      }
      prices.push_back(std::move(slice));
    }
    models.push_back(Json{{"name", family.thetas()[k]}, {"prices", std::move(prices)}});
  }
  doc["models"] = std::move(models);

  if (!spec.options.empty()) {
    Json opts = Json::array();
    for (const auto& o : spec.options)
      opts.push_back(Json{{"name", o.name}, {"quote", to_json(o.quote)}, {"payoff", to_json(family, o.payoff)}});
    doc["options"] = std::move(opts);
  }
  if (!spec.claims.empty()) {
    Json claims = Json::object();
    for (const auto& [name, c] : spec.claims) claims[name] = to_json(family, c);
    doc["claims"] = std::move(claims);
  }
  return doc;
}

Json to_json(const ModelFamily& family, const Claim& claim) {
  Json out = Json::object();
  for (std::size_t k = 0; k < claim.num_models(); ++k) {
    Json row = Json::object();
    for (std::size_t omega = 0; omega < claim.num_outcomes(); ++omega)
      row[family.space().outcomes()[omega]] = to_json(claim(k, omega));
    out[family.thetas()[k]] = std::move(row);
  }
  return out;
}

Json to_json(const ModelFamily& family, const RobustPricingSystem& system) {
  return to_json(family, Claim(system.weights()));
}

RobustPricingSystem system_from_json(const ModelFamily& family, const Json& node, const std::string& path) {
  if (!node.is_object()) fail(path, "expected an object keyed by model name");
  RationalMatrix weights(family.num_models(), RationalVector(family.num_outcomes(), Rational(0)));
  for (const auto& [theta, row] : node.items()) {
    const std::size_t k = at_path(path, [&] { return family.theta_index(theta); });
    const std::string rpath = child(path, theta);
    if (!row.is_object()) fail(rpath, "expected an object keyed by outcome");
    for (const auto& [name, value] : row.items()) {
      const std::size_t omega = at_path(rpath, [&] { return family.space().outcome_index(name); });
      weights[k][omega] = rational_from_json(value, child(rpath, name));
    }
  }
  return RobustPricingSystem(std::move(weights));
}

Json to_json(const ModelFamily& family, const PredictableStrategy& strategy) {
  const auto& space = family.space();
  Json out = Json::array();
  for (std::size_t t = 1; t <= strategy.horizon(); ++t)
    for (std::size_t a = 0; a < space.num_atoms(t - 1); ++a) {
      Json atom = Json::array();
      for (std::size_t omega : space.atoms(t - 1)[a]) atom.push_back(space.outcomes()[omega]);
      Json h = Json::array();
      for (std::size_t j = 0; j < strategy.dims(); ++j) h.push_back(to_json(strategy.at_atom(t, a, j)));
      out.push_back(Json{{"t", t}, {"atom", std::move(atom)}, {"H", std::move(h)}});
    }
  return out;
}

PredictableStrategy strategy_from_json(const ModelFamily& family, const Json& node, const std::string& path) {
  const auto& space = family.space();
  PredictableStrategy strategy = PredictableStrategy::zero(space, family.dims());
  array_at(node, path);
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string ipath = child(path, i);
    const std::size_t t = index_at(member(node[i], "t", ipath), child(ipath, "t"));
    if (t < 1 || t > family.horizon()) fail(child(ipath, "t"), "time outside 1..T");
    const Json& atom = array_at(member(node[i], "atom", ipath), child(ipath, "atom"));
    if (atom.empty()) fail(child(ipath, "atom"), "empty atom");
    const std::size_t first = at_path(child(ipath, "atom"), [&] {
      return space.outcome_index(string_at(atom[0], child(child(ipath, "atom"), 0)));
    });
    const std::size_t a = space.atom_of(t - 1, first);
    const RationalVector h = rational_array(member(node[i], "H", ipath), child(ipath, "H"), family.dims());
    for (std::size_t j = 0; j < family.dims(); ++j) strategy.at_atom(t, a, j) = h[j];
  }
  return strategy;
}

}  // namespace rftap::io
