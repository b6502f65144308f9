#include "rftap/cli.hpp"

#include <chrono>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "rftap/arbitrage.hpp"
#include "rftap/errors.hpp"
#include "rftap/hedging.hpp"
#include "rftap/martingale.hpp"
#include "rftap/parallel.hpp"
#include "rftap/pricing.hpp"
#include "rftap/spec_io.hpp"

namespace rftap::cli {
namespace {

using io::Json;
using io::to_json;

struct Flags {
  std::string spec;
  std::string format = "text";
  bool no_timing = false;
  int threads = 0;
  std::string theta;
  std::string claim;
  std::string file;
  std::string system_file;
  std::size_t time = 0;
  bool with_options = false;
};

struct Outcome {
  int exit = 0;
  std::string verdict;
  Json result = Json::object();
};

std::span<const StaticOption> options_if(const io::MarketSpec& spec, bool with_options) {
  if (!with_options) return {};
  return spec.options;
}

Json static_positions(const std::vector<StaticOption>& options, const RationalVector& a) {
  Json out = Json::object();
  for (std::size_t i = 0; i < a.size(); ++i) out[options[i].name] = to_json(a[i]);
  return out;
}

std::string atom_label(const FilteredSpace& space, std::size_t t, std::size_t a) {
  std::string label = "{";
  for (std::size_t omega : space.atoms(t)[a]) label += (label.size() > 1 ? "," : "") + space.outcomes()[omega];
  return label + "}";
}

Outcome check_nra_command(const io::MarketSpec& spec, const Flags& f) {
  const auto& family = spec.family;
  const auto verdict = check_nra(family, options_if(spec, f.with_options));
  Outcome out;
  out.result["with_options"] = f.with_options;
  out.result["nra"] = verdict.holds;
  if (verdict.holds) {
    out.verdict = "NRA holds";
    Json certs = Json::array();
    for (std::size_t k = 0; k < verdict.certificates.size(); ++k)
      certs.push_back(Json{{"theta", family.thetas()[k]}, {"system", to_json(family, verdict.certificates[k])}});
    out.result["certificates"] = std::move(certs);
  } else {
    out.exit = 2;
    out.verdict = "NRA fails";
    out.result["witness"] = to_json(family, *verdict.witness);
    if (f.with_options) out.result["witness_static"] = static_positions(spec.options, verdict.witness_static);
    out.result["witness_gains"] =
        to_json(family, semi_static_gains(family, *verdict.witness, options_if(spec, f.with_options),
                                          verdict.witness_static));
  }
  return out;
}

Outcome na_command(const io::MarketSpec& spec, const Flags& f) {
  const auto& family = spec.family;
  const std::size_t k = family.theta_index(f.theta);
  const auto verdict = check_classical_na(family, k);
  Outcome out;
  out.result["theta"] = f.theta;
  out.result["na"] = verdict.holds;
  if (verdict.holds) {
    out.verdict = "NA holds for " + f.theta;
    Json q = Json::object();
    for (std::size_t omega = 0; omega < family.num_outcomes(); ++omega)
      q[family.space().outcomes()[omega]] = to_json((*verdict.martingale_measure)[omega]);
    out.result["martingale_measure"] = std::move(q);
  } else {
    out.exit = 2;
    out.verdict = "NA fails for " + f.theta;
    out.result["witness"] = to_json(family.restrict_to(k), *verdict.witness);
  }
  return out;
}

Outcome pricing_system_command(const io::MarketSpec& spec, const Flags& f) {
  const auto& family = spec.family;
  const std::size_t k = family.theta_index(f.theta);
  const auto system = find_pricing_system(family, k, options_if(spec, f.with_options));
  Outcome out;
  out.result["theta"] = f.theta;
  out.result["with_options"] = f.with_options;
  if (!system) {
    out.exit = 2;
    out.verdict = "no robust pricing system charges " + f.theta;
    return out;
  }
  out.verdict = "pricing system found for " + f.theta;
  out.result["mass"] = to_json(system->mass(k));
  out.result["system"] = to_json(family, *system);
  return out;
}

Outcome bounds_command(const io::MarketSpec& spec, const Flags& f) {
  const auto& family = spec.family;
  const auto b = pricing_bounds(family, spec.claim(f.claim), options_if(spec, f.with_options));
  Outcome out;
  out.verdict = "price bounds [" + to_string(b.lo) + ", " + to_string(b.hi) + "]";
  out.result["claim"] = f.claim;
  out.result["with_options"] = f.with_options;
  out.result["lo"] = to_json(b.lo);
  out.result["hi"] = to_json(b.hi);
  out.result["lo_system"] = to_json(family, b.lo_system);
  out.result["hi_system"] = to_json(family, b.hi_system);
  return out;
}

Json hedge_json(const io::MarketSpec& spec, const HedgeResult& h, bool with_options) {
  Json out = Json::object();
  out["price"] = to_json(h.price);
  out["strategy"] = to_json(spec.family, h.strategy);
  if (with_options) out["static_positions"] = static_positions(spec.options, h.static_positions);
  out["residuals"] = to_json(spec.family, h.residuals);
  return out;
}

Outcome superhedge_command(const io::MarketSpec& spec, const Flags& f) {
  const auto h = superhedge(spec.family, spec.claim(f.claim), options_if(spec, f.with_options));
  Outcome out;
  out.verdict = "superhedging price " + to_string(h.price);
  out.result = hedge_json(spec, h, f.with_options);
  out.result["claim"] = f.claim;
  out.result["with_options"] = f.with_options;
  return out;
}

Outcome subhedge_command(const io::MarketSpec& spec, const Flags& f) {
  const auto h = subhedge(spec.family, spec.claim(f.claim), options_if(spec, f.with_options));
  Outcome out;
  out.verdict = "subhedging price " + to_string(h.price);
  out.result = hedge_json(spec, h, f.with_options);
  out.result["claim"] = f.claim;
  out.result["with_options"] = f.with_options;
  return out;
}

Outcome replicate_command(const io::MarketSpec& spec, const Flags& f) {
  const auto rep = replicable(spec.family, spec.claim(f.claim));
  Outcome out;
  out.result["claim"] = f.claim;
  out.result["replicable"] = rep.has_value();
  if (!rep) {
    out.exit = 2;
    out.verdict = "not replicable";
    return out;
  }
  out.verdict = "replicable at cost " + to_string(rep->cost);
  out.result["cost"] = to_json(rep->cost);
  out.result["strategy"] = to_json(spec.family, rep->strategy);
  return out;
}

Outcome complete_command(const io::MarketSpec& spec, const Flags&) {
  const auto report = market_complete(spec.family);
  Outcome out;
  out.result["complete"] = report.complete;
  if (report.complete) {
    out.verdict = "market is complete";
  } else {
    out.exit = 2;
    out.verdict = "market is incomplete";
    out.result["witness_label"] = report.witness_label;
    out.result["witness"] = to_json(spec.family, *report.witness);
  }
  return out;
}

Outcome calibrate_command(const io::MarketSpec& spec, const Flags& f) {
  const Claim& claim = spec.claim(f.claim);
  const auto plain = superhedge(spec.family, claim);
  const auto calibrated = superhedge(spec.family, claim, spec.options);
  const auto b = pricing_bounds(spec.family, claim, spec.options);
  Outcome out;
  out.verdict = "calibrated price " + to_string(calibrated.price) + " (uncalibrated " +
                to_string(plain.price) + ")";
  out.result["claim"] = f.claim;
  out.result["options"] = spec.options.size();
  out.result["pi0"] = to_json(plain.price);
  out.result["pi1"] = to_json(calibrated.price);
  out.result["calibrated_lo"] = to_json(b.lo);
  out.result["calibrated_hi"] = to_json(b.hi);
  out.result["hi_system"] = to_json(spec.family, b.hi_system);
  out.result["strategy"] = to_json(spec.family, calibrated.strategy);
  out.result["static_positions"] = static_positions(spec.options, calibrated.static_positions);
  return out;
}

Outcome dp_price_command(const io::MarketSpec& spec, const Flags& f) {
  const Claim& claim = spec.claim(f.claim);
  const Rational dp = dp_superhedge(spec.family, claim);
  const auto global = superhedge(spec.family, claim);
  Outcome out;
  out.verdict = "dynamic-programming price " + to_string(dp) + ", global price " + to_string(global.price);
  out.result["claim"] = f.claim;
  out.result["dp_price"] = to_json(dp);
  out.result["global_price"] = to_json(global.price);
  out.result["gap"] = to_json(Rational(dp - global.price));
  out.result["global_strategy"] = to_json(spec.family, global.strategy);
  return out;
}

// A pricing system from a file: a bare {theta: {omega: q}} object, an object
// with a "system" member, or a report whose result carries one.
std::optional<RobustPricingSystem> system_in(const ModelFamily& family, const Json& doc) {
  if (doc.contains("result")) return system_in(family, doc["result"]);
  if (doc.contains("system")) return io::system_from_json(family, doc["system"], "/system");
  if (doc.contains("hi_system")) return io::system_from_json(family, doc["hi_system"], "/hi_system");
  if (doc.contains("certificates") && doc["certificates"].is_array() && !doc["certificates"].empty())
    return io::system_from_json(family, doc["certificates"][0]["system"], "/certificates/0/system");
  if (doc.is_object() && !doc.empty() && !doc.contains("report"))
    return io::system_from_json(family, doc, "");
  return std::nullopt;
}

Outcome condexp_command(const io::MarketSpec& spec, const Flags& f) {
  const auto& family = spec.family;
  const auto& space = family.space();
  const Claim& claim = spec.claim(f.claim);
  std::optional<RobustPricingSystem> system;
  if (!f.system_file.empty()) {
    system = system_in(family, io::load_json(f.system_file));
    if (!system) throw ParseError(f.system_file + ": no pricing system found");
  } else {
    system = find_pricing_system(family, 0);
    if (!system) throw NoPricingSystem("no robust pricing system charges " + family.thetas()[0]);
  }
  if (auto bad = verify_pricing_system(family, *system))
    throw NoPricingSystem("supplied system fails row " + bad->row + ": " + bad->message);

  const auto ce = gen_cond_expectation(family, *system, claim, f.time);
  auto table = [&](const RationalMatrix& values) {
    Json out = Json::object();
    for (std::size_t k = 0; k < values.size(); ++k) {
      Json row = Json::object();
      for (std::size_t a = 0; a < values[k].size(); ++a) row[atom_label(space, f.time, a)] = to_json(values[k][a]);
      out[family.thetas()[k]] = std::move(row);
    }
    return out;
  };
  Outcome out;
  out.verdict = "generalized conditional expectation at time " + std::to_string(f.time) +
                ", kernel dimension " + std::to_string(ce.kernel_basis.size());
  out.result["claim"] = f.claim;
  out.result["time"] = f.time;
  out.result["system"] = to_json(family, *system);
  out.result["particular"] = table(ce.particular);
  out.result["kernel_dimension"] = ce.kernel_basis.size();
  Json basis = Json::array();
  for (const auto& b : ce.kernel_basis) basis.push_back(table(b));
  out.result["kernel_basis"] = std::move(basis);
  return out;
}

Outcome verify_system_command(const io::MarketSpec& spec, const Flags& f) {
  const auto& family = spec.family;
  const Json doc = io::load_json(f.file);
  const Json& body = doc.contains("result") ? doc["result"] : doc;
  const bool with_options = f.with_options || (body.contains("with_options") && body["with_options"].is_boolean() &&
                                               body["with_options"].get<bool>());
  const auto options = options_if(spec, with_options);

  Outcome out;
  out.result["file"] = f.file;
  out.result["with_options"] = with_options;

  if (body.contains("witness") && body.contains("nra")) {
    const auto h = io::strategy_from_json(family, body["witness"], "/result/witness");
    RationalVector a(options.size(), Rational(0));
    if (with_options && body.contains("witness_static"))
      for (std::size_t i = 0; i < options.size(); ++i)
        a[i] = io::rational_from_json(body["witness_static"].at(options[i].name),
                                      "/result/witness_static/" + options[i].name);
    const bool ok = is_robust_arbitrage(family, h, options, a);
    out.exit = 2;
    out.result["witness_verified"] = ok;
    out.verdict = ok ? "witness verified: NRA fails" : "witness rejected";
    return out;
  }

  std::vector<std::pair<std::string, RobustPricingSystem>> systems;
  if (body.contains("certificates")) {
    for (std::size_t i = 0; i < body["certificates"].size(); ++i) {
      const std::string path = "/result/certificates/" + std::to_string(i) + "/system";
      systems.emplace_back(path, io::system_from_json(family, body["certificates"][i].at("system"), path));
    }
  } else {
    for (const char* key : {"system", "lo_system", "hi_system"})
      if (body.contains(key)) systems.emplace_back(key, io::system_from_json(family, body[key], key));
    if (systems.empty()) systems.emplace_back("/", io::system_from_json(family, body, ""));
  }

  std::vector<char> charged(family.num_models(), 0);
  Json checks = Json::array();
  bool all_ok = true;
  for (const auto& [path, system] : systems) {
    const auto bad = verify_pricing_system(family, system, options);
    Json entry{{"source", path}, {"verified", !bad}};
    if (bad) {
      all_ok = false;
      entry["row"] = bad->row;
      entry["message"] = bad->message;
    } else {
      for (std::size_t k = 0; k < family.num_models(); ++k)
        if (system.mass(k) > 0) charged[k] = 1;
    }
    checks.push_back(std::move(entry));
  }
  out.result["checks"] = std::move(checks);
  if (!all_ok) {
    out.exit = 2;
    out.verdict = "certificate rejected";
    return out;
  }
  const bool covers = std::all_of(charged.begin(), charged.end(), [](char c) { return c != 0; });
  out.result["charges_every_model"] = covers;
  out.verdict = std::to_string(systems.size()) + " pricing system(s) verified" +
                (covers ? "; NRA holds" : "");
  return out;
}

// Plain-text rendering of a JSON value, one scalar per line.
void render_text(std::ostream& os, const Json& node, int indent) {
  const std::string pad(indent, ' ');
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      if (value.is_structured() && !value.empty()) {
        os << pad << key << ":\n";
        render_text(os, value, indent + 2);
      } else {
        os << pad << key << ": " << (value.is_structured() ? value.dump() : scalar(value)) << "\n";
      }
    }
  } else if (node.is_array()) {
    for (const auto& value : node) {
      if (value.is_structured() && !value.empty()) {
        os << pad << "-\n";
        render_text(os, value, indent + 2);
      } else {
        os << pad << "- " << scalar(value) << "\n";
      }
    }
  } else {
    os << pad << scalar(node) << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust no-arbitrage analysis of finite markets under model uncertainty", "rftap"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--spec", f.spec, "market-spec JSON file");
  app.add_option("--format", f.format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--no-timing", f.no_timing, "omit timing metadata");
  app.add_option("--threads", f.threads, "cap on worker threads (overrides ROBUSTFTAP_THREADS)")
      ->check(CLI::PositiveNumber);

  using Handler = std::function<Outcome(const io::MarketSpec&, const Flags&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto command = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, std::move(h));
    return sub;
  };
  auto with_opts = [&](CLI::App* sub) { sub->add_flag("--with-options", f.with_options, "trade the static options"); };
  auto need_claim = [&](CLI::App* sub) { sub->add_option("--claim", f.claim, "claim name")->required(); };
  auto need_theta = [&](CLI::App* sub) { sub->add_option("--theta", f.theta, "model name")->required(); };

  with_opts(command("check-nra", "decide NRA and print certificates", check_nra_command));
  need_theta(command("na", "classical no-arbitrage for one model", na_command));
  {
    auto* sub = command("pricing-system", "a robust pricing system charging one model", pricing_system_command);
    need_theta(sub);
    with_opts(sub);
  }
  for (auto [name, help, handler] : {std::tuple<const char*, const char*, Handler>{"bounds", "range of Q(f) over pricing systems", bounds_command},
                                     {"superhedge", "robust superhedging price and strategy", superhedge_command},
                                     {"subhedge", "robust subhedging price and strategy", subhedge_command}}) {
    auto* sub = command(name, help, handler);
    need_claim(sub);
    with_opts(sub);
  }
  need_claim(command("replicate", "exact replication", replicate_command));
  command("complete", "completeness check", complete_command);
  need_claim(command("calibrate", "superhedging with and without the static options", calibrate_command));
  need_claim(command("dp-price", "dynamic-programming price against the global price", dp_price_command));
  {
    auto* sub = command("condexp", "generalized conditional expectation", condexp_command);
    need_claim(sub);
    sub->add_option("--time", f.time, "conditioning time")->required();
    sub->add_option("--system-file", f.system_file, "pricing system or report JSON");
  }
  command("verify-system", "re-verify certificates from a file", verify_system_command)
      ->add_option("--file", f.file, "pricing system or report JSON")
      ->required();
  CLI::App* toy = app.add_subcommand("toy", "toy-market utilities");
  toy->require_subcommand(1);
  CLI::App* expand = toy->add_subcommand("expand", "print the explicit form of a spec");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  if (f.threads > 0) parallel::set_max_threads(f.threads);
  const bool json = f.format == "json";
  Json report;
  report["report"] = io::kReportVersion;
  report["command"] = args;

  const auto start = std::chrono::steady_clock::now();
  try {
    if (f.spec.empty()) throw ParseError("--spec is required");
    const io::MarketSpec spec = io::load_market_spec(f.spec);

    if (expand->parsed()) {
      out << io::write_market_spec(spec).dump(2) << "\n";
      return 0;
    }

    Outcome outcome;
    for (auto& [sub, handler] : commands)
      if (sub->parsed()) outcome = handler(spec, f);

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report["verdict"] = outcome.verdict;
    report["exit_code"] = outcome.exit;
    report["result"] = std::move(outcome.result);
    if (!f.no_timing) report["timing"] = Json{{"seconds", seconds}, {"threads", parallel::max_threads()}};

    if (json) {
      out << report.dump(2) << "\n";
    } else {
      out << outcome.verdict << "\n";
      render_text(out, report["result"], 2);
      if (!f.no_timing) out << "time: " << seconds << " s\n";
    }
    return outcome.exit;
  } catch (const Error& e) {
    const int code = is_analysis_negative(e) ? 2 : 1;
    err << e.kind() << ": " << e.what() << "\n";
    if (json) {
      report["error"] = Json{{"kind", e.kind()}, {"message", e.what()}};
      report["exit_code"] = code;
      out << report.dump(2) << "\n";
    }
    return code;
  }
}

}  // namespace rftap::cli
