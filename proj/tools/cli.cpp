#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtasep/algebra.hpp"
#include "mtasep/core.hpp"
#include "mtasep/error.hpp"
#include "mtasep/multiline.hpp"
#include "mtasep/oracle.hpp"
#include "mtasep/pushing.hpp"
#include "mtasep/tensor.hpp"

namespace mtasep::cli {

namespace {

using nlohmann::json;

enum class Format { Human, Json, Csv };

struct Options {
  std::string config;
  std::optional<int> species;
  int length = 0;
  std::string populations;
  std::string method = "trace";
  std::optional<int> truncation;
  std::uint64_t seed = 0;
  std::uint64_t samples = 1000000;
  std::optional<std::uint64_t> max_states;
  std::string what;
  int n = 3;
  int d = 8;
  bool json = false;
  bool csv = false;
  bool compare = false;
  bool stages = false;
};

/// Output of one subcommand: a stable JSON payload plus its text renderings.
struct RunReport {
  std::string command;
  json payload;
  bool pass = true;
  std::string human;
  std::string csv;
};

std::uint64_t resolve_bound(const Options& o, std::uint64_t fallback) {
  if (o.max_states) return *o.max_states;
  if (const char* env = std::getenv("MTASEP_MAX_STATES")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError("MTASEP_MAX_STATES must be a non-negative integer");
    }
  }
  return fallback;
}

Configuration read_config(const Options& o) {
  if (o.config.empty()) throw InputError("--config is required");
  return parse_config(o.config, o.species);
}

Sector read_sector(const Options& o) {
  if (o.populations.empty()) throw InputError("--p is required");
  Sector s{o.length, parse_int_list(o.populations)};
  s.validate();
  return s;
}

BigInt weight_by(const std::string& method, const Configuration& c, const Options& o) {
  if (method == "trace") return trace_weight(c, o.truncation);
  if (method == "ancestors") return weight_recursive(c);
  if (method == "multiline") return count_ancestors(c, resolve_bound(o, kDefaultEnumerationBound));
  throw InputError("unknown method '" + method + "' (trace, ancestors, multiline)");
}

/// Normalization matching the weight convention of each method: multiline
/// counts use the declared sector, the others the species-reduced one.
BigInt normalization_for(const std::string& method, const Configuration& c) {
  if (method == "multiline") return normalization(sector_of(c));
  return normalization(sector_of(reduce_species(c).config));
}

RunReport cmd_weight(const Options& o) {
  const Configuration c = read_config(o);
  const BigInt w = weight_by(o.method, c, o);
  RunReport r;
  r.payload = {{"config", render(c)}, {"method", o.method}, {"weight", to_string(w)}};
  if (o.truncation) r.payload["truncation"] = *o.truncation;
  r.human = "W(" + render(c) + ") = " + to_string(w) + "  [method " + o.method + "]\n";
  r.csv = "config,method,weight\n" + render(c) + "," + o.method + "," + to_string(w) + "\n";
  return r;
}

RunReport cmd_prob(const Options& o) {
  const Configuration c = read_config(o);
  const BigInt w = weight_by(o.method, c, o);
  const BigInt z = normalization_for(o.method, c);
  const Rational p = make_rational(w, z);
  const std::string raw = to_string(w) + "/" + to_string(z);
  RunReport r;
  r.payload = {{"config", render(c)},
               {"method", o.method},
               {"weight", to_string(w)},
               {"normalization", to_string(z)},
               {"probability", raw},
               {"reduced", to_string(p)}};
  r.human = "P(" + render(c) + ") = " + raw + " = " + to_string(p) + "\n";
  r.csv = "config,weight,normalization,probability\n" + render(c) + "," + to_string(w) + "," +
          to_string(z) + "," + to_string(p) + "\n";
  return r;
}

RunReport cmd_table(const Options& o) {
  const Sector sector = read_sector(o);
  const auto configs = sector.configurations(resolve_bound(o, kDefaultMaxStates));
  AncestorWeigher weigher;
  json rows = json::array();
  std::ostringstream human, csv;
  csv << "config,weight,probability\n";
  BigInt weight_sum = 0;
  Rational prob_sum = 0;
  BigInt z = 0;
  for (const auto& c : configs) {
    const BigInt w = o.method == "ancestors" ? weigher.weight(c) : weight_by(o.method, c, o);
    const BigInt zc = normalization_for(o.method, c);
    z = zc;
    const Rational p = make_rational(w, zc);
    weight_sum += w;
    prob_sum += p;
    rows.push_back({{"config", render(c)}, {"weight", to_string(w)}, {"probability", to_string(p)}});
    human << std::left << std::setw(std::max(8, sector.length + 2)) << render(c) << std::setw(12)
          << to_string(w) << to_string(p) << "\n";
    csv << render(c) << "," << to_string(w) << "," << to_string(p) << "\n";
  }
  RunReport r;
  r.pass = prob_sum == 1;
  r.payload = {{"L", sector.length},
               {"P", sector.populations},
               {"method", o.method},
               {"rows", rows},
               {"weight_sum", to_string(weight_sum)},
               {"normalization", to_string(z)},
               {"probability_sum", to_string(prob_sum)}};
  human << "sum     " << to_string(weight_sum) << " (Z = " << to_string(z)
        << "), sum P = " << to_string(prob_sum) << "\n";
  csv << "sum," << to_string(weight_sum) << "," << to_string(prob_sum) << "\n";
  r.human = human.str();
  r.csv = csv.str();
  return r;
}

RunReport cmd_verify(const Options& o) {
  RunReport r;
  if (o.what == "quadratic") {
    const auto rep = check_quadratic(o.d);
    r.payload = rep.to_json();
    r.pass = rep.pass();
  } else if (o.what == "hats") {
    const auto rep = check_hat_relations(o.n, o.d);
    r.payload = rep.to_json();
    r.pass = rep.pass();
  } else if (o.what == "stationarity") {
    if (o.length < 1) throw InputError("--l is required for stationarity");
    StationarityChecker checker(o.truncation);
    json failures = json::array();
    std::size_t checked = 0;
    for (const auto& sector : sectors_with_all_classes(o.length, o.n))
      for (const auto& c : sector.configurations(resolve_bound(o, kDefaultMaxStates))) {
        ++checked;
        const BigInt res = checker.residual(c);
        if (res != 0) failures.push_back({{"config", render(c)}, {"residual", to_string(res)}});
      }
    r.pass = failures.empty();
    r.payload = {{"what", "stationarity"}, {"N", o.n},           {"L", o.length},
                 {"configurations", checked},   {"failures", failures}, {"pass", r.pass}};
  } else {
    throw InputError("--what must be quadratic, hats or stationarity");
  }
  r.human = o.what + ": " + (r.pass ? "pass" : "FAIL") + "\n" + r.payload.dump(2) + "\n";
  r.csv = "what,pass\n" + o.what + "," + (r.pass ? "true" : "false") + "\n";
  return r;
}

RunReport cmd_sample(const Options& o) {
  const Sector sector = read_sector(o);
  const auto dist = empirical_distribution(sector, o.samples, o.seed);
  const auto configs = sector.configurations(resolve_bound(o, kDefaultMaxStates));
  const double n = static_cast<double>(o.samples);
  json rows = json::array();
  std::ostringstream human, csv;
  csv << "config,count,frequency,exact,sigma_distance\n";
  bool pass = true;
  for (const auto& c : configs) {
    const Rational exact = probability(c);
    const double p = exact.get_d();
    const auto it = dist.counts.find(c);
    const double k = it == dist.counts.end() ? 0.0 : static_cast<double>(it->second);
    const double sigma = std::sqrt(n * p * (1.0 - p));
    const double z = sigma > 0 ? (k - n * p) / sigma : (k == n * p ? 0.0 : INFINITY);
    const bool ok = std::abs(z) <= 4.0;
    pass = pass && ok;
    rows.push_back({{"config", render(c)},
                    {"count", static_cast<std::uint64_t>(k)},
                    {"exact", to_string(exact)},
                    {"sigma_distance", z},
                    {"within_4_sigma", ok}});
    human << std::left << std::setw(std::max(8, sector.length + 2)) << render(c)
          << std::setw(10) << static_cast<std::uint64_t>(k) << std::setw(12) << k / n
          << std::setw(10) << to_string(exact) << std::showpos << std::setprecision(3) << z
          << std::noshowpos << std::setprecision(6) << (ok ? "" : "  OUTSIDE") << "\n";
    csv << render(c) << "," << static_cast<std::uint64_t>(k) << "," << k / n << ","
        << to_string(exact) << "," << z << "\n";
  }
  RunReport r;
  r.pass = pass;
  r.payload = {{"L", sector.length}, {"P", sector.populations}, {"samples", o.samples},
               {"seed", o.seed},     {"rows", rows},            {"pass", pass}};
  human << (pass ? "all frequencies within 4 sigma\n" : "some frequencies outside 4 sigma\n");
  r.human = human.str();
  r.csv = csv.str();
  return r;
}

RunReport cmd_oracle(const Options& o) {
  const Sector sector = read_sector(o);
  const std::uint64_t bound = resolve_bound(o, kDefaultMaxStates);
  RunReport r;
  std::ostringstream human, csv;
  if (o.compare) {
    const auto rep = compare_all(sector, {bound, resolve_bound(o, kDefaultEnumerationBound)});
    r.payload = rep.to_json();
    r.pass = rep.pass();
    csv << "config,oracle_probability,tensor_weight,pushing_weight,multiline_weight,agree\n";
    for (const auto& row : rep.rows) {
      const std::string ml = row.multiline_weight ? to_string(*row.multiline_weight) : "";
      csv << render(row.config) << "," << to_string(row.oracle_probability) << ","
          << to_string(row.tensor_weight) << "," << to_string(row.pushing_weight) << "," << ml
          << "," << (row.agree ? "true" : "false") << "\n";
      human << std::left << std::setw(std::max(8, sector.length + 2)) << render(row.config)
            << std::setw(14) << to_string(row.oracle_probability) << "W=" << std::setw(8)
            << to_string(row.tensor_weight) << (row.agree ? "agree" : "MISMATCH") << "\n";
    }
    human << (r.pass ? "all methods agree\n" : "mismatch: " + rep.first_mismatch.value_or("balance") + "\n");
  } else {
    const auto gen = build_generator(sector, bound);
    const auto p = stationary(gen);
    r.pass = is_balanced(gen, p);
    json rows = json::array();
    csv << "config,oracle_probability\n";
    for (std::size_t i = 0; i < p.states.size(); ++i) {
      rows.push_back({{"config", render(p.states[i])}, {"oracle", to_string(p.probabilities[i])}});
      csv << render(p.states[i]) << "," << to_string(p.probabilities[i]) << "\n";
      human << std::left << std::setw(std::max(8, sector.length + 2)) << render(p.states[i])
            << to_string(p.probabilities[i]) << "\n";
    }
    r.payload = {{"L", sector.length}, {"P", sector.populations}, {"states", p.states.size()},
                 {"frozen", p.frozen}, {"balanced", r.pass},      {"rows", rows}};
  }
  r.human = human.str();
  r.csv = csv.str();
  return r;
}

RunReport cmd_ancestors(const Options& o) {
  const Configuration c = read_config(o);
  const auto stages = ancestor_stages(c);
  auto names = [](const AncestorSet& set) {
    std::vector<std::string> out;
    for (const auto& a : set) out.push_back(render(a));
    return out;
  };
  RunReport r;
  r.payload = {{"config", render(c)}, {"ancestors", names(stages.back())}};
  std::ostringstream human, csv;
  if (o.stages) {
    json js = json::array();
    for (std::size_t k = 0; k + 1 < stages.size(); ++k) {
      js.push_back(names(stages[k]));
      human << "stage " << k + 1 << ":";
      for (const auto& s : names(stages[k])) human << " " << s;
      human << "\n";
    }
    r.payload["stages"] = js;
  }
  human << "ancestors:";
  csv << "ancestor\n";
  for (const auto& s : names(stages.back())) {
    human << " " << s;
    csv << s << "\n";
  }
  human << "\n";
  r.human = human.str();
  r.csv = csv.str();
  return r;
}

RunReport cmd_ansatz(const Options& o) {
  const auto& x = ansatz(o.n);
  RunReport r;
  json ops = json::array();
  std::ostringstream human, csv;
  csv << "class,monomial\n";
  for (std::size_t k = 0; k < x.size(); ++k) {
    ops.push_back(x[k].to_json());
    human << "X_" << k << " = " << x[k].to_json().dump() << "\n";
    for (const auto& m : x[k].to_json()) csv << k << ",\"" << m.dump() << "\"\n";
  }
  r.payload = {{"N", o.n}, {"rank", x.front().rank()}, {"X", ops}};
  r.human = human.str();
  r.csv = csv.str();
  return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact stationary measure of the multispecies TASEP on a ring", "mtasep"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "JSON output");
    sub->add_flag("--csv", o.csv, "CSV output");
    sub->add_option("--seed", o.seed, "Seed (echoed in reports, used by sampling)");
    sub->add_option("--max-states", o.max_states, "Enumeration bound");
  };
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Configuration, e.g. 2103 or 2,10,0")->required();
    sub->add_option("--species", o.species, "Declared number of species");
  };
  auto add_sector = [&](CLI::App* sub) {
    sub->add_option("--l", o.length, "Ring length")->required();
    sub->add_option("--p", o.populations, "Populations P1,P2,...")->required();
  };

  auto* weight = app.add_subcommand("weight", "Stationary weight of a configuration");
  add_config(weight);
  add_format(weight);
  weight->add_option("--method", o.method, "trace | ancestors | multiline");
  weight->add_option("--truncation", o.truncation, "Counter truncation for the trace");

  auto* prob = app.add_subcommand("prob", "Exact stationary probability");
  add_config(prob);
  add_format(prob);
  prob->add_option("--method", o.method, "trace | ancestors | multiline");
  prob->add_option("--truncation", o.truncation, "Counter truncation for the trace");

  auto* table = app.add_subcommand("table", "Weights and probabilities of a whole sector");
  add_sector(table);
  add_format(table);
  table->add_option("--method", o.method, "trace | ancestors | multiline");
  table->add_option("--truncation", o.truncation, "Counter truncation for the trace");

  auto* verify = app.add_subcommand("verify", "Algebraic identity checks");
  add_format(verify);
  verify->add_option("--what", o.what, "quadratic | hats | stationarity")->required();
  verify->add_option("--n", o.n, "Number of species");
  verify->add_option("--d", o.d, "Truncation dimension");
  verify->add_option("--l", o.length, "Ring length (stationarity)");
  verify->add_option("--truncation", o.truncation, "Trace truncation (stationarity)");

  auto* sample = app.add_subcommand("sample", "Monte-Carlo multiline sampling against exact values");
  add_sector(sample);
  add_format(sample);
  sample->add_option("--n", o.samples, "Number of samples");

  auto* oracle = app.add_subcommand("oracle", "Exact master-equation solution of a sector");
  add_sector(oracle);
  add_format(oracle);
  oracle->add_flag("--compare", o.compare, "Cross-check every method");

  auto* anc = app.add_subcommand("ancestors", "Level-(N-1) ancestors of a configuration");
  add_config(anc);
  add_format(anc);
  anc->add_flag("--stages", o.stages, "Also print each pushing stage");

  auto* ans = app.add_subcommand("ansatz", "Dump the ansatz operators X_0..X_N");
  add_format(ans);
  ans->add_option("--n", o.n, "Number of species");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInputError;
  }

  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "weight") report = cmd_weight(o);
    else if (name == "prob") report = cmd_prob(o);
    else if (name == "table") report = cmd_table(o);
    else if (name == "verify") report = cmd_verify(o);
    else if (name == "sample") report = cmd_sample(o);
    else if (name == "oracle") report = cmd_oracle(o);
    else if (name == "ancestors") report = cmd_ancestors(o);
    else report = cmd_ansatz(o);
    report.command = name;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const BoundExceeded& e) {
    err << "resource bound: " << e.what() << "\n";
    return kResourceBound;
  } catch (const TruncationOverflow& e) {
    err << "resource bound: " << e.what() << "\n";
    return kResourceBound;
  } catch (const InternalConsistencyError& e) {
    err << "consistency failure: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInternalError;
  }

  std::string echo = "mtasep";
  for (const auto& a : args) echo += " " + a;
  if (o.json) {
    json doc{{"command", echo},
             {"seed", o.seed},
             {"result", report.payload},
             {"pass", report.pass}};
    out << doc.dump(2) << "\n";
  } else if (o.csv) {
    out << report.csv;
  } else {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    out << report.human;
    err << "# " << echo << " (seed " << o.seed << ", " << std::fixed << std::setprecision(3)
        << seconds << " s)\n";
  }
  return report.pass ? kSuccess : kVerificationFailed;
}

}  // namespace mtasep::cli
