#ifndef BDWB_SERIALIZE_HPP
#define BDWB_SERIALIZE_HPP

#include <bdwb/fdd.hpp>
#include <bdwb/space.hpp>
#include <bdwb/symbolic_op.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace bdwb {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSpaceSchema = "bdspace/1";
inline constexpr const char* kDVectorSchema = "bddvectors/1";
inline constexpr const char* kProjectionSchema = "bdprojections/1";
inline constexpr const char* kGammaSchema = "bdgamma/1";
inline constexpr const char* kOpSchema = "bdop/1";

/// Artifacts are written with two-space indentation and a trailing newline so
/// equal content gives equal bytes.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw FormatError(what + ": " + e.what());
  }
}

// ---- scalars and sparse data ----------------------------------------------

namespace detail {

inline Natural json_natural(const Json& j, const std::string& key) {
  if (j.is_number_unsigned()) return Natural(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (v < 0) throw FormatError(key + ": negative value");
    return Natural(static_cast<unsigned long>(v));
  }
  if (j.is_string()) {
    try {
      return parse_natural(j.get<std::string>());
    } catch (const std::exception& e) {
      throw FormatError(key + ": " + e.what());
    }
  }
  throw FormatError(key + ": expected a natural number");
}

inline Scalar json_scalar(const Json& j, const std::string& key) {
  if (!j.is_string()) throw FormatError(key + ": scalars are \"num/den\" strings");
  try {
    return parse_scalar(j.get<std::string>());
  } catch (const std::exception& e) {
    throw FormatError(key + ": " + e.what());
  }
}

inline std::uint64_t json_uint(const Json& j, const std::string& key) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw FormatError(key + ": expected a non-negative integer");
  return j.get<std::uint64_t>();
}

inline const Json& field(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError("missing field '" + key + "'");
  return j.at(key);
}

}  // namespace detail

template <class Tag>
Json sparse_to_json(const SparseVector<Tag>& v) {
  Json arr = Json::array();
  for (const auto& [id, a] : v) arr.push_back(Json::array({id, to_string(a)}));
  return arr;
}

template <class Tag>
SparseVector<Tag> sparse_from_json(const Json& j, const std::string& key) {
  if (!j.is_array()) throw FormatError(key + ": expected [id, \"num/den\"] pairs");
  SparseVector<Tag> v;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw FormatError(key + ": expected [id, \"num/den\"] pairs");
    auto id = detail::json_uint(e[0], key);
    if (v.find(static_cast<Id>(id))) throw FormatError(key + ": repeated id " + std::to_string(id));
    Scalar a = detail::json_scalar(e[1], key);
    if (is_zero(a)) throw FormatError(key + ": explicit zero entry");
    v.set(static_cast<Id>(id), a);
  }
  return v;
}

inline Json matrix_to_json(const RationalMatrix& m) {
  Json arr = Json::array();
  for (Id c : m.cols())
    for (const auto& [r, a] : m.column(c)) arr.push_back(Json::array({r, c, to_string(a)}));
  return arr;
}

inline RationalMatrix matrix_from_json(const Json& j, std::vector<Id> rows, std::vector<Id> cols,
                                       const std::string& key) {
  if (!j.is_array()) throw FormatError(key + ": expected [row, col, \"num/den\"] triplets");
  RationalMatrix m(std::move(rows), std::move(cols));
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw FormatError(key + ": expected [row, col, \"num/den\"] triplets");
    auto r = static_cast<Id>(detail::json_uint(e[0], key));
    auto c = static_cast<Id>(detail::json_uint(e[1], key));
    try {
      m.add(r, c, detail::json_scalar(e[2], key));
    } catch (const IndexError& err) {
      throw FormatError(key + ": " + err.what());
    }
  }
  return m;
}

// ---- params and run configuration -------------------------------------------

inline const char* to_string(NetPolicy p) {
  switch (p) {
    case NetPolicy::minimal: return "minimal";
    case NetPolicy::factorial: return "factorial";
    case NetPolicy::explicit_: return "explicit";
  }
  return "?";
}

inline const char* to_string(SignPolicy s) { return s == SignPolicy::both ? "both" : "nonnegative"; }

inline Json params_to_json(const Params& p) {
  Json j;
  auto naturals = [](const std::vector<Natural>& v) {
    Json a = Json::array();
    for (const auto& z : v) a.push_back(z.get_str());
    return a;
  };
  j["mode"] = p.toy ? "toy" : "strict";
  j["m"] = naturals(p.m);
  j["n"] = naturals(p.n);
  j["net_policy"] = to_string(p.net_policy);
  j["denominators"] = naturals(p.denominators);
  j["max_stage"] = p.max_stage;
  j["beta0_index"] = p.beta0_index;
  j["sigma_stride"] = p.sigma_stride;
  j["element_budget"] = p.element_budget;
  j["net_signs"] = to_string(p.net_signs);
  j["net_max_support"] = p.net_max_support;
  j["max_weight_index"] = p.max_weight_index;
  return j;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"gamma", "y", "fdd", "ris", "algebra", "all"};
  return names;
}

enum class ReportFormat { text, structured };

struct RunConfig {
  Params params;
  std::vector<std::string> suites;
  std::uint64_t seed = 1;
  std::size_t samples = 200;          // random operators / sequences per randomized check
  std::string space_path;             // build output / verify input
  std::string report_path;            // empty: stdout
  ReportFormat format = ReportFormat::text;
};

/// Parses a params object; unknown keys are rejected so typos cannot pass
/// silently as defaults.
inline Params params_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("params must be an object");
  static const std::set<std::string> known{"mode",          "m",           "n",          "net_policy",
                                           "denominators",  "max_stage",   "beta0_index", "sigma_stride",
                                           "element_budget", "net_signs",  "net_max_support", "max_weight_index"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw FormatError("unknown params key '" + k + "'");
  Params p;
  auto naturals = [&](const char* key) {
    std::vector<Natural> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) throw FormatError(std::string(key) + ": expected an array");
    for (const auto& e : j.at(key)) out.push_back(detail::json_natural(e, key));
    return out;
  };
  if (j.contains("mode")) {
    std::string mode = j.at("mode").get<std::string>();
    if (mode != "strict" && mode != "toy") throw FormatError("mode must be strict or toy");
    p.toy = mode == "toy";
  }
  p.m = naturals("m");
  p.n = naturals("n");
  p.denominators = naturals("denominators");
  if (j.contains("net_policy")) {
    std::string s = j.at("net_policy").get<std::string>();
    if (s == "minimal") p.net_policy = NetPolicy::minimal;
    else if (s == "factorial") p.net_policy = NetPolicy::factorial;
    else if (s == "explicit") p.net_policy = NetPolicy::explicit_;
    else throw FormatError("net_policy must be minimal, factorial or explicit");
  }
  if (j.contains("net_signs")) {
    std::string s = j.at("net_signs").get<std::string>();
    if (s == "both") p.net_signs = SignPolicy::both;
    else if (s == "nonnegative") p.net_signs = SignPolicy::nonnegative;
    else throw FormatError("net_signs must be both or nonnegative");
  }
  auto uint_key = [&](const char* key, auto& target) {
    if (j.contains(key)) target = static_cast<std::remove_reference_t<decltype(target)>>(detail::json_uint(j.at(key), key));
  };
  uint_key("max_stage", p.max_stage);
  uint_key("beta0_index", p.beta0_index);
  uint_key("sigma_stride", p.sigma_stride);
  uint_key("element_budget", p.element_budget);
  uint_key("net_max_support", p.net_max_support);
  uint_key("max_weight_index", p.max_weight_index);
  return p;
}

/// Config file: {"params": {...}, "suite": "all" | [...], "seed": 1,
/// "samples": 200, "space": "out.json", "report": "", "format": "text"}.
inline RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("config must be an object");
  static const std::set<std::string> known{"params", "suite", "seed", "samples", "space", "report", "format", "comment"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw FormatError("unknown config key '" + k + "'");
  RunConfig c;
  try {
    c.params = params_from_json(detail::field(j, "params"));
    if (j.contains("suite")) {
      const Json& s = j.at("suite");
      if (s.is_string()) c.suites.push_back(s.get<std::string>());
      else if (s.is_array()) for (const auto& e : s) c.suites.push_back(e.get<std::string>());
      else throw FormatError("suite must be a name or a list of names");
    }
    if (j.contains("seed")) c.seed = detail::json_uint(j.at("seed"), "seed");
    if (j.contains("samples")) c.samples = detail::json_uint(j.at("samples"), "samples");
    if (j.contains("space")) c.space_path = j.at("space").get<std::string>();
    if (j.contains("report")) c.report_path = j.at("report").get<std::string>();
    if (j.contains("format")) {
      std::string f = j.at("format").get<std::string>();
      if (f == "text") c.format = ReportFormat::text;
      else if (f == "structured") c.format = ReportFormat::structured;
      else throw FormatError("format must be text or structured");
    }
  } catch (const Json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
  for (const auto& s : c.suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw FormatError("unknown suite '" + s + "'");
  return c;
}

inline RunConfig load_config(const std::string& path) {
  return config_from_json(parse_json(read_file(path), path));
}

// ---- space -----------------------------------------------------------------

inline Json element_to_json(const Space& s, Id id) {
  const GammaElement& e = s.element(id);
  Json j;
  j["id"] = e.id;
  j["rank"] = e.rank;
  j["kind"] = to_string(e.kind);
  j["weight_index"] = e.weight_index;
  j["age"] = e.age;
  j["sigma"] = e.sigma;
  if (e.xi) {
    j["xi"] = *e.xi;
    j["p"] = e.p;
  }
  j["b_star"] = sparse_to_json(e.b_star);
  j["c_star"] = sparse_to_json(s.c_star(id));
  if (s.has_gamma_prime()) j["in_gamma_prime"] = s.in_gamma_prime(id);
  return j;
}

inline Json certificate_to_json(const NetCertificate& c) {
  Json j;
  j["n"] = c.n;
  j["coordinates"] = c.coordinates;
  j["denominator"] = c.denominator.get_str();
  j["rounding_bound"] = to_string(c.rounding_bound);
  j["target"] = to_string(c.target);
  j["passes"] = c.passes;
  j["minimal_denominator"] = c.minimal_denominator.get_str();
  return j;
}

inline Json space_to_json(const Space& s) {
  Json j;
  j["schema"] = kSpaceSchema;
  j["N"] = s.stages();
  j["params"] = params_to_json(s.params());
  Json sizes = Json::array();
  for (unsigned n = 1; n <= s.stages(); ++n) sizes.push_back(s.stage_range(n).second - s.stage_range(n).first);
  j["stage_sizes"] = sizes;
  if (s.has_gamma_prime()) j["beta0"] = s.beta0();
  Json nets = Json::array();
  for (const auto& ns : s.nets()) {
    Json nj;
    nj["n"] = ns.n;
    nj["N_n"] = ns.N_n.get_str();
    nj["D_n"] = ns.D_n.get_str();
    Json certs = Json::array();
    for (const auto& c : ns.certificates) certs.push_back(certificate_to_json(c));
    nj["certificates"] = certs;
    nj["net_sizes"] = ns.net_sizes;
    Json a;
    a["type1_even"] = ns.admitted.type1_even;
    a["type1_odd"] = ns.admitted.type1_odd;
    a["type2_even"] = ns.admitted.type2_even;
    a["type2_odd"] = ns.admitted.type2_odd;
    a["zero_functionals"] = ns.admitted.zero_functionals;
    nj["admitted"] = a;
    nets.push_back(nj);
  }
  j["nets"] = nets;
  j["warnings"] = s.warnings();
  Json elems = Json::array();
  for (Id id = 0; id < s.size(); ++id) elems.push_back(element_to_json(s, id));
  j["elements"] = elems;
  return j;
}

inline std::string export_space(const Space& s) { return dump(space_to_json(s)); }

/// Rebuilds a Space from its export. Structural consistency is checked:
/// ids consecutive, ranks matching the stage sizes, c* supported on earlier
/// stages and equal to the value the admission rule gives for (xi, m_j, b*),
/// Gamma' flags consistent with the recursion.
inline Space space_from_json(const Json& j) {
  using detail::field;
  using detail::json_uint;
  try {
    if (!j.is_object() || field(j, "schema") != kSpaceSchema) throw FormatError("not a " + std::string(kSpaceSchema) + " file");
    Space s;
    Space::Builder::reset(s, params_from_json(field(j, "params")));
    WeightSequences seq(s.params());
    const Json& sizes = field(j, "stage_sizes");
    const Json& elems = field(j, "elements");
    const auto N = json_uint(field(j, "N"), "N");
    if (!sizes.is_array() || sizes.size() != N) throw FormatError("stage_sizes does not match N");
    std::vector<Id> stage_end;
    std::size_t total = 0;
    for (const auto& z : sizes) {
      auto k = json_uint(z, "stage_sizes");
      if (k == 0) throw FormatError("empty stage");
      total += k;
      stage_end.push_back(static_cast<Id>(total));
    }
    if (!elems.is_array() || elems.size() != total) throw FormatError("element count does not match stage_sizes");

    std::vector<bool> prime(total, false);
    unsigned stage = 0;
    for (std::size_t i = 0; i < total; ++i) {
      if (i == 0 || i == stage_end[stage - 1]) {
        ++stage;
        Space::Builder::begin_stage(s);
      }
      const Json& ej = elems[i];
      GammaElement e;
      if (json_uint(field(ej, "id"), "id") != i) throw FormatError("element ids are not consecutive");
      e.rank = static_cast<unsigned>(json_uint(field(ej, "rank"), "rank"));
      if (e.rank != stage) throw FormatError("element " + std::to_string(i) + " has rank inconsistent with its stage");
      std::string kind = field(ej, "kind").get<std::string>();
      if (kind == "base") e.kind = ElementKind::base;
      else if (kind == "type1") e.kind = ElementKind::type1;
      else if (kind == "type2") e.kind = ElementKind::type2;
      else throw FormatError("unknown element kind '" + kind + "'");
      e.weight_index = static_cast<unsigned>(json_uint(field(ej, "weight_index"), "weight_index"));
      e.age = static_cast<unsigned>(json_uint(field(ej, "age"), "age"));
      e.sigma = json_uint(field(ej, "sigma"), "sigma");
      if (ej.contains("xi")) {
        e.xi = static_cast<Id>(json_uint(ej.at("xi"), "xi"));
        e.p = static_cast<unsigned>(json_uint(field(ej, "p"), "p"));
        if (*e.xi >= i) throw FormatError("xi must precede its element");
      }
      if ((e.kind == ElementKind::type2) != e.xi.has_value()) throw FormatError("xi present iff type 2");
      e.b_star = sparse_from_json<DualTag>(field(ej, "b_star"), "b_star");
      SparseFunctional c = sparse_from_json<DualTag>(field(ej, "c_star"), "c_star");
      const Id below = stage == 1 ? 0 : stage_end[stage - 2];
      if (!c.empty() && c.max_id() >= below) throw FormatError("c* of element " + std::to_string(i) + " reaches its own stage");
      if (!e.b_star.empty() && e.b_star.max_id() >= below) throw FormatError("b* of element " + std::to_string(i) + " reaches its own stage");
      if (e.kind != ElementKind::base) {
        SparseFunctional expect = make_scalar(Natural(1), seq.m(e.weight_index)) * e.b_star;
        if (e.kind == ElementKind::type2) {
          if (e.p < 1 || e.p >= stage || s.element(*e.xi).rank != e.p)
            throw FormatError("element " + std::to_string(i) + " has an inconsistent p");
          expect = make_scalar(Natural(1), seq.m(e.weight_index)) * (e.b_star - s.dual_projection(e.b_star, e.p));
          expect.add(*e.xi, Scalar(1));
        }
        if (!(c == expect)) throw FormatError("c* of element " + std::to_string(i) + " does not follow from its data");
      }
      if (ej.contains("in_gamma_prime")) prime[i] = ej.at("in_gamma_prime").get<bool>();
      Space::Builder::push(s, std::move(e), std::move(c));
    }

    for (const auto& nj : field(j, "nets")) {
      NetStage ns;
      ns.n = static_cast<unsigned>(json_uint(field(nj, "n"), "n"));
      ns.N_n = detail::json_natural(field(nj, "N_n"), "N_n");
      ns.D_n = detail::json_natural(field(nj, "D_n"), "D_n");
      for (const auto& cj : field(nj, "certificates")) {
        NetCertificate c;
        c.n = static_cast<unsigned>(json_uint(field(cj, "n"), "n"));
        c.coordinates = json_uint(field(cj, "coordinates"), "coordinates");
        c.denominator = detail::json_natural(field(cj, "denominator"), "denominator");
        c.rounding_bound = detail::json_scalar(field(cj, "rounding_bound"), "rounding_bound");
        c.target = detail::json_scalar(field(cj, "target"), "target");
        c.passes = field(cj, "passes").get<bool>();
        c.minimal_denominator = detail::json_natural(field(cj, "minimal_denominator"), "minimal_denominator");
        ns.certificates.push_back(c);
      }
      for (const auto& z : field(nj, "net_sizes")) ns.net_sizes.push_back(json_uint(z, "net_sizes"));
      const Json& a = field(nj, "admitted");
      ns.admitted.type1_even = json_uint(field(a, "type1_even"), "type1_even");
      ns.admitted.type1_odd = json_uint(field(a, "type1_odd"), "type1_odd");
      ns.admitted.type2_even = json_uint(field(a, "type2_even"), "type2_even");
      ns.admitted.type2_odd = json_uint(field(a, "type2_odd"), "type2_odd");
      ns.admitted.zero_functionals = json_uint(field(a, "zero_functionals"), "zero_functionals");
      Space::Builder::add_net(s, std::move(ns));
    }
    if (s.nets().size() + 1 != N) throw FormatError("expected one net record per built stage after the first");
    for (const auto& w : field(j, "warnings")) Space::Builder::warn(s, w.get<std::string>());

    if (j.contains("beta0")) {
      const auto b0 = static_cast<Id>(json_uint(j.at("beta0"), "beta0"));
      Space rebuilt = build_gamma_prime(s);
      if (rebuilt.beta0() != b0) throw FormatError("beta0 does not match the params' beta0_index");
      for (Id i = 0; i < total; ++i)
        if (rebuilt.in_gamma_prime(i) != prime[i]) throw FormatError("Gamma' flag of element " + std::to_string(i) + " is inconsistent");
      return rebuilt;
    }
    return s;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("space file: ") + e.what());
  } catch (const StructuralError& e) {
    throw FormatError(std::string("space file: ") + e.what());
  }
}

inline Space import_space(const std::string& text) { return space_from_json(parse_json(text, "space file")); }

// ---- exports ----------------------------------------------------------------

/// Element records only.
inline Json export_gamma(const Space& s) {
  Json j;
  j["schema"] = kGammaSchema;
  j["N"] = s.stages();
  Json arr = Json::array();
  for (Id id = 0; id < s.size(); ++id) {
    Json e = element_to_json(s, id);
    e.erase("c_star");
    arr.push_back(e);
  }
  j["elements"] = arr;
  return j;
}

/// d_gamma and d*_gamma for every gamma in Gamma_N, relative to N.
inline Json export_dvectors(const Truncation& t) {
  Json j;
  j["schema"] = kDVectorSchema;
  j["N"] = t.N();
  j["size"] = t.size();
  Json arr = Json::array();
  for (Id g : t.ids()) {
    Json e;
    e["id"] = g;
    e["d"] = sparse_to_json(t.d_vector(g));
    e["d_star"] = sparse_to_json(t.space().d_star(g));
    arr.push_back(e);
  }
  j["vectors"] = arr;
  return j;
}

struct DualityCheck {
  std::size_t pairs = 0;
  std::size_t mismatches = 0;
  bool ok() const { return mismatches == 0; }
};

/// <d_gamma, d*_eta> = delta over all pairs, computed from an export alone.
inline DualityCheck duality_from_export(const Json& j) {
  using detail::field;
  if (field(j, "schema") != kDVectorSchema) throw FormatError("not a " + std::string(kDVectorSchema) + " file");
  std::vector<Id> ids;
  std::vector<SparsePoint> d;
  std::vector<SparseFunctional> ds;
  for (const auto& e : field(j, "vectors")) {
    ids.push_back(static_cast<Id>(detail::json_uint(field(e, "id"), "id")));
    d.push_back(sparse_from_json<PrimalTag>(field(e, "d"), "d"));
    ds.push_back(sparse_from_json<DualTag>(field(e, "d_star"), "d_star"));
  }
  DualityCheck r;
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = 0; b < ids.size(); ++b) {
      ++r.pairs;
      Scalar v = duality_pair(ds[b], d[a]);
      if (v != (ids[a] == ids[b] ? Scalar(1) : Scalar(0))) ++r.mismatches;
    }
  return r;
}

/// P*_{(0,p]} e*_eta for p = 0..N and every eta in Gamma_N.
inline Json export_projections(const Truncation& t) {
  Json j;
  j["schema"] = kProjectionSchema;
  j["N"] = t.N();
  Json per_p = Json::array();
  for (unsigned p = 0; p <= t.N(); ++p) {
    Json pj;
    pj["p"] = p;
    const auto table = t.dual_projection_table(p);
    Json rows = Json::array();
    for (Id g : t.ids()) rows.push_back(Json::array({g, sparse_to_json(table.at(g))}));
    pj["images"] = rows;
    per_p.push_back(pj);
  }
  j["projections"] = per_p;
  return j;
}

// ---- symbolic operators -----------------------------------------------------

inline Json op_to_json(const SymbolicOp& S) {
  Json j;
  j["schema"] = kOpSchema;
  j["N"] = S.N;
  j["a11"] = to_string(S.a11);
  j["a12"] = to_string(S.a12);
  j["a22"] = to_string(S.a22);
  j["K11"] = matrix_to_json(S.K11);
  j["K12"] = matrix_to_json(S.K12);
  j["K21"] = matrix_to_json(S.K21);
  j["K22"] = matrix_to_json(S.K22);
  return j;
}

inline SymbolicOp op_from_json(const ZFrame& f, const Json& j) {
  using detail::field;
  if (field(j, "schema") != kOpSchema) throw FormatError("not a " + std::string(kOpSchema) + " record");
  if (detail::json_uint(field(j, "N"), "N") != f.N()) throw FormatError("operator was written for another truncation");
  SymbolicOp S = SymbolicOp::zero(f);
  S.a11 = detail::json_scalar(field(j, "a11"), "a11");
  S.a12 = detail::json_scalar(field(j, "a12"), "a12");
  S.a22 = detail::json_scalar(field(j, "a22"), "a22");
  S.K11 = matrix_from_json(field(j, "K11"), f.x_ids(), f.x_ids(), "K11");
  S.K12 = matrix_from_json(field(j, "K12"), f.x_ids(), f.y_ids(), "K12");
  S.K21 = matrix_from_json(field(j, "K21"), f.y_ids(), f.x_ids(), "K21");
  S.K22 = matrix_from_json(field(j, "K22"), f.y_ids(), f.y_ids(), "K22");
  return S;
}

}  // namespace bdwb

#endif  // BDWB_SERIALIZE_HPP
