// bdwb: build index sets, run verification suites, export and summarize.
//
// Exit codes: 0 ok, 1 a hard check failed, 2 usage or config error,
// 3 element budget exceeded.

#include <bdwb/bdwb.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace bdwb;

enum Exit { kOk = 0, kCheckFailure = 1, kUsage = 2, kBudget = 3 };

struct Common {
  std::string config;
  std::string space;
  std::string output;
  std::string format;
  bool strict = false;
  bool toy = false;
  std::optional<std::size_t> budget;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> suites;
  std::string what;
};

void emit(const std::string& text, const std::string& path) {
  if (path.empty())
    std::cout << text;
  else
    write_file(path, text);
}

ReportFormat resolve_format(const Common& c, ReportFormat fallback) {
  if (c.format.empty()) return fallback;
  return c.format == "structured" ? ReportFormat::structured : ReportFormat::text;
}

RunConfig load(const Common& c) {
  RunConfig rc;
  if (!c.config.empty()) rc = load_config(c.config);
  if (c.strict) rc.params.toy = false;
  if (c.toy) rc.params.toy = true;
  if (c.budget) rc.params.element_budget = *c.budget;
  if (c.seed) rc.seed = *c.seed;
  return rc;
}

std::shared_ptr<const Space> read_space(const std::string& path) {
  if (path.empty()) throw CLI::ValidationError("--space", "a space file is required");
  return std::make_shared<const Space>(import_space(read_file(path)));
}

int cmd_build(const Common& c) {
  if (c.config.empty()) throw CLI::ValidationError("--config", "build needs a config file");
  RunConfig rc = load(c);
  Space s = build_space(rc.params);
  std::string out = !c.output.empty() ? c.output : rc.space_path;
  if (out.empty()) throw CLI::ValidationError("--output", "no output path (config key 'space' or --output)");
  write_file(out, export_space(s));

  std::ostringstream text;
  text << "built N = " << s.stages() << ", |Gamma_N| = " << s.size() << " -> " << out << "\n";
  for (unsigned n = 1; n <= s.stages(); ++n) {
    auto [a, b] = s.stage_range(n);
    text << "  Delta_" << n << ": " << (b - a) << " elements";
    if (n >= 2) {
      const AdmissionCounts& ac = s.nets()[n - 2].admitted;
      text << " (type1 even " << ac.type1_even << ", type1 odd " << ac.type1_odd << ", type2 even " << ac.type2_even
           << ", type2 odd " << ac.type2_odd << ")";
    }
    text << "\n";
  }
  for (const auto& ns : s.nets()) {
    text << "  nets for stage " << ns.n + 1 << ": D_" << ns.n << " = " << ns.D_n.get_str() << ", N_" << ns.n << " = "
         << ns.N_n.get_str() << ", certificates";
    for (const auto& cert : ns.certificates) text << " " << (cert.passes ? "pass" : "FAIL");
    text << ", sizes";
    for (auto z : ns.net_sizes) text << " " << z;
    text << "\n";
  }
  if (s.has_gamma_prime()) text << "  beta_0 = " << s.beta0() << "\n";
  for (const auto& w : s.warnings()) text << "  warning: " << w << "\n";
  std::cout << text.str();
  return kOk;
}

int cmd_verify(const Common& c) {
  RunConfig rc = load(c);
  auto space = read_space(!c.space.empty() ? c.space : rc.space_path);
  std::vector<std::string> suites = !c.suites.empty() ? c.suites : rc.suites;
  if (suites.empty()) throw CLI::ValidationError("--suite", "no suite selected");
  SuiteOptions o;
  o.seed = rc.seed;
  o.samples = rc.samples;
  VerificationReport rep;
  try {
    rep = run_suites(suites, space, o);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--suite", e.what());
  }
  ReportFormat fmt = resolve_format(c, rc.format);
  std::string text = fmt == ReportFormat::structured ? dump(to_json(rep)) : render_text(rep);
  emit(text, !c.output.empty() ? c.output : rc.report_path);
  return rep.passed() ? kOk : kCheckFailure;
}

int cmd_export(const Common& c) {
  auto space = read_space(c.space);
  Json j;
  if (c.what == "gamma")
    j = export_gamma(*space);
  else if (c.what == "dvectors")
    j = export_dvectors(Truncation(space));
  else if (c.what == "projections")
    j = export_projections(Truncation(space));
  else
    throw CLI::ValidationError("--what", "unknown export target '" + c.what + "'");
  emit(dump(j), c.output);
  return kOk;
}

Json stats_json(const std::shared_ptr<const Space>& s) {
  Json j;
  j["schema"] = "bdstats/1";
  j["N"] = s->stages();
  j["size"] = s->size();
  Json stages = Json::array();
  for (unsigned n = 1; n <= s->stages(); ++n) {
    std::map<unsigned, std::size_t> weights, ages;
    std::size_t prime = 0;
    auto ids = s->stage_ids(n);
    for (Id g : ids) {
      ++weights[s->element(g).weight_index];
      ++ages[s->element(g).age];
      if (s->in_gamma_prime(g)) ++prime;
    }
    Json sj;
    sj["n"] = n;
    sj["size"] = ids.size();
    Json wj = Json::object(), aj = Json::object();
    for (auto [k, v] : weights) wj[std::to_string(k)] = v;
    for (auto [k, v] : ages) aj[std::to_string(k)] = v;
    sj["weight_index_histogram"] = wj;
    sj["age_histogram"] = aj;
    sj["gamma_prime"] = prime;
    sj["gamma_prime_fraction"] = to_string(make_scalar(static_cast<long>(prime), static_cast<long>(ids.size())));
    stages.push_back(sj);
  }
  j["stages"] = stages;
  BasisReport b = basis_constants(Truncation(s));
  Json bj;
  Json per = Json::array();
  for (const auto& v : b.dual_per_n) per.push_back(to_string(v));
  bj["dual_projection_norms"] = per;
  bj["M_dual"] = to_string(b.M_dual);
  bj["decomposition_constant"] = to_string(b.decomposition_constant);
  bj["within_two"] = b.within_two;
  j["basis_constants"] = bj;
  return j;
}

std::string stats_text(const Json& j) {
  std::ostringstream out;
  out << "N = " << j["N"].get<unsigned>() << ", |Gamma_N| = " << j["size"].get<std::size_t>() << "\n";
  for (const auto& sj : j["stages"]) {
    out << "  Delta_" << sj["n"].get<unsigned>() << ": " << sj["size"].get<std::size_t>() << " elements, Gamma' "
        << sj["gamma_prime"].get<std::size_t>() << " (" << sj["gamma_prime_fraction"].get<std::string>() << ")\n";
    out << "    weight index:";
    for (const auto& [k, v] : sj["weight_index_histogram"].items()) out << " " << k << ":" << v.get<std::size_t>();
    out << "\n    age:";
    for (const auto& [k, v] : sj["age_histogram"].items()) out << " " << k << ":" << v.get<std::size_t>();
    out << "\n";
  }
  const Json& b = j["basis_constants"];
  out << "  ||P*_(0,n]||:";
  for (const auto& v : b["dual_projection_norms"]) out << " " << v.get<std::string>();
  out << "\n  M_dual = " << b["M_dual"].get<std::string>()
      << ", decomposition constant = " << b["decomposition_constant"].get<std::string>() << "\n";
  return out.str();
}

int cmd_stats(const Common& c) {
  auto space = read_space(c.space);
  Json j = stats_json(space);
  ReportFormat fmt = resolve_format(c, ReportFormat::text);
  emit(fmt == ReportFormat::structured ? dump(j) : stats_text(j), c.output);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and verify finite truncations of the staged index set"};
  app.require_subcommand(1);
  Common c;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_option("--output", c.output, "output path (default: stdout or config)");
  };

  CLI::App* build = app.add_subcommand("build", "build a space from a config");
  build->add_option("--config", c.config, "config file")->required();
  auto* strict = build->add_flag("--strict", c.strict, "enforce every growth condition");
  build->add_flag("--toy", c.toy, "admit toy parameters")->excludes(strict);
  build->add_option("--budget", c.budget, "element budget per stage");
  build->add_option("--output", c.output, "space file (default: config key 'space')");

  CLI::App* verify = app.add_subcommand("verify", "run verification suites on a space file");
  verify->add_option("--config", c.config, "config file");
  verify->add_option("--space", c.space, "space file");
  verify->add_option("--suite", c.suites, "gamma | y | fdd | ris | algebra | all")->take_all();
  verify->add_option("--seed", c.seed, "seed for sampled checks");
  add_format(verify);

  CLI::App* exp = app.add_subcommand("export", "export derived data from a space file");
  exp->add_option("--space", c.space, "space file")->required();
  exp->add_option("--what", c.what, "gamma | dvectors | projections")->required();
  exp->add_option("--output", c.output, "output path (default: stdout)");

  CLI::App* stats = app.add_subcommand("stats", "summarize a space file");
  stats->add_option("--space", c.space, "space file")->required();
  add_format(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return cmd_build(c);
    if (*verify) return cmd_verify(c);
    if (*exp) return cmd_export(c);
    if (*stats) return cmd_stats(c);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const ParamError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kUsage;
  } catch (const NetError& e) {
    std::cerr << "net certificate failed: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "bad input: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
