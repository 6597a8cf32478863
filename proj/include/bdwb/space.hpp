#ifndef BDWB_SPACE_HPP
#define BDWB_SPACE_HPP

#include <bdwb/net.hpp>
#include <bdwb/params.hpp>
#include <bdwb/rational.hpp>
#include <bdwb/sparse.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bdwb {

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ElementKind { base, type1, type2 };

inline const char* to_string(ElementKind k) {
  switch (k) {
    case ElementKind::base: return "base";
    case ElementKind::type1: return "type1";
    case ElementKind::type2: return "type2";
  }
  return "?";
}

/// One node of the index set. Weight is 1/m_{weight_index}.
struct GammaElement {
  Id id = 0;
  unsigned rank = 1;
  ElementKind kind = ElementKind::base;
  unsigned weight_index = 1;
  unsigned age = 1;
  std::uint64_t sigma = 2;
  SparseFunctional b_star;  // empty for the base element
  std::optional<Id> xi;     // type 2 only
  unsigned p = 0;           // rank of xi, type 2 only
};

/// Admission counts for one stage, split by rule.
struct AdmissionCounts {
  std::size_t type1_even = 0;
  std::size_t type1_odd = 0;
  std::size_t type2_even = 0;
  std::size_t type2_odd = 0;
  std::size_t zero_functionals = 0;  // admitted elements whose b* is 0

  std::size_t total() const { return type1_even + type1_odd + type2_even + type2_odd; }
};

/// The net data chosen while building Delta_{n+1} from Gamma_n.
struct NetStage {
  unsigned n = 0;
  Natural N_n;
  Natural D_n;
  std::vector<NetCertificate> certificates;  // one per p = 0..n-1
  std::vector<std::size_t> net_sizes;        // |B_{p,n}| per p
  AdmissionCounts admitted;                  // counts for Delta_{n+1}
};

/// Immutable staged index set: Delta_1..Delta_N with the c* table, sigma,
/// the chosen nets and the Gamma' stages.
class Space {
 public:
  Space() = default;

  const Params& params() const { return params_; }
  unsigned stages() const { return static_cast<unsigned>(stage_begin_.size()); }
  std::size_t size() const { return elements_.size(); }

  const GammaElement& element(Id id) const {
    if (id >= elements_.size()) throw IndexError("unknown element id " + std::to_string(id));
    return elements_[id];
  }
  const std::vector<GammaElement>& elements() const { return elements_; }

  /// |Gamma_n|; gamma_size(0) = 0.
  std::size_t gamma_size(unsigned n) const {
    if (n == 0) return 0;
    if (n > stages()) throw IndexError("stage " + std::to_string(n) + " not built");
    return n == stages() ? elements_.size() : stage_begin_[n];
  }
  /// Ids of Delta_n as the half-open range [first, second).
  std::pair<Id, Id> stage_range(unsigned n) const {
    if (n == 0 || n > stages()) throw IndexError("stage " + std::to_string(n) + " not built");
    return {stage_begin_[n - 1], static_cast<Id>(gamma_size(n))};
  }
  std::vector<Id> stage_ids(unsigned n) const {
    auto [a, b] = stage_range(n);
    std::vector<Id> ids;
    for (Id i = a; i < b; ++i) ids.push_back(i);
    return ids;
  }
  /// Ids of Gamma_q \ Gamma_p.
  std::vector<Id> window_ids(unsigned p, unsigned q) const {
    std::vector<Id> ids;
    for (Id i = static_cast<Id>(gamma_size(p)); i < gamma_size(q); ++i) ids.push_back(i);
    return ids;
  }

  const SparseFunctional& c_star(Id id) const {
    element(id);
    return c_star_[id];
  }
  SparseFunctional d_star(Id id) const {
    SparseFunctional d = -c_star(id);
    d.add(id, Scalar(1));
    return d;
  }

  const std::vector<NetStage>& nets() const { return nets_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  bool has_gamma_prime() const { return beta0_.has_value(); }
  Id beta0() const {
    if (!beta0_) throw StructuralError("Gamma' not built");
    return *beta0_;
  }
  bool in_gamma_prime(Id id) const {
    element(id);
    return has_gamma_prime() && in_prime_[id];
  }
  std::vector<Id> gamma_prime_ids(unsigned upto_stage) const {
    std::vector<Id> ids;
    if (!has_gamma_prime()) return ids;
    for (Id i = 0; i < gamma_size(upto_stage); ++i)
      if (in_prime_[i]) ids.push_back(i);
    return ids;
  }
  std::vector<Id> delta_prime_ids(unsigned n) const {
    std::vector<Id> ids;
    if (!has_gamma_prime()) return ids;
    auto [a, b] = stage_range(n);
    for (Id i = a; i < b; ++i)
      if (in_prime_[i]) ids.push_back(i);
    return ids;
  }

  std::uint64_t max_sigma() const {
    std::uint64_t best = 0;
    for (const auto& e : elements_) best = std::max(best, e.sigma);
    return best;
  }

  /// P*_{(0,p]} f for f in l1(Gamma_N): rewrite e*_eta = d*_eta + c*_eta from
  /// the top id down and drop the d*-parts outside Gamma_p.
  SparseFunctional dual_projection(const SparseFunctional& f, unsigned p) const {
    const Id limit = static_cast<Id>(gamma_size(p));
    SparseFunctional g = f;
    while (!g.empty() && g.max_id() >= limit) {
      Id top = g.max_id();
      if (top >= elements_.size()) throw IndexError("functional support outside the space");
      Scalar a = g.get(top);
      g.set(top, Scalar(0));
      g.add_scaled(c_star_[top], a);
    }
    return g;
  }

  // Construction, used by the builder and the importer.
  struct Builder;

 private:
  friend struct Builder;

  Params params_;
  std::vector<GammaElement> elements_;
  std::vector<SparseFunctional> c_star_;
  std::vector<Id> stage_begin_;
  std::vector<NetStage> nets_;
  std::vector<std::string> warnings_;
  std::optional<Id> beta0_;
  std::vector<bool> in_prime_;
};

struct Space::Builder {
  static void reset(Space& s, Params params) {
    s = Space();
    s.params_ = std::move(params);
  }
  static void begin_stage(Space& s) { s.stage_begin_.push_back(static_cast<Id>(s.elements_.size())); }
  static void push(Space& s, GammaElement e, SparseFunctional c) {
    e.id = static_cast<Id>(s.elements_.size());
    s.elements_.push_back(std::move(e));
    s.c_star_.push_back(std::move(c));
  }
  static void add_net(Space& s, NetStage net) { s.nets_.push_back(std::move(net)); }
  static void warn(Space& s, std::string w) { s.warnings_.push_back(std::move(w)); }
  static void set_gamma_prime(Space& s, Id beta0, std::vector<bool> flags) {
    s.beta0_ = beta0;
    s.in_prime_ = std::move(flags);
  }
  static void clear_gamma_prime(Space& s) {
    s.beta0_.reset();
    s.in_prime_.clear();
  }
};

/// Delta_1 = {base} with c*_1 = 0, rank = age = 1, sigma = 2, weight 1/m_1.
inline Space initial_space(const Params& params) {
  ParamReport report = validate_params(params);
  if (!report.passed()) {
    for (const auto& c : report.checks)
      if (!c.holds) throw ParamError("parameters violate " + c.condition + " (" + c.lhs + " vs " + c.rhs + ")");
  }
  Space s;
  Space::Builder::reset(s, params);
  for (auto& w : report.warnings) Space::Builder::warn(s, w);
  Space::Builder::begin_stage(s);
  GammaElement base;
  base.rank = 1;
  base.kind = ElementKind::base;
  base.weight_index = 1;
  base.age = 1;
  base.sigma = 2;
  Space::Builder::push(s, std::move(base), SparseFunctional());
  return s;
}

namespace detail {

inline Natural factorial(unsigned long k) {
  Natural f;
  mpz_fac_ui(f.get_mpz_t(), k);
  return f;
}

/// Chooses (N_n, D_n) for stage n under the configured policy.
inline std::pair<Natural, Natural> choose_net_denominator(const Space& s, unsigned n, const Natural& prev_N) {
  const Params& p = s.params();
  const std::size_t coords = s.gamma_size(n);  // p = 0 is the largest window
  NetCertificate probe = certify_net(coords, Natural(1), n);
  const Natural& needed = probe.minimal_denominator;
  Natural D;
  unsigned long N = prev_N.get_ui() + 1;
  switch (p.net_policy) {
    case NetPolicy::minimal:
      D = needed;
      break;
    case NetPolicy::explicit_:
      D = p.denominators.at(n - 1);
      break;
    case NetPolicy::factorial:
      while (factorial(N) < needed) ++N;
      return {Natural(N), factorial(N)};
  }
  // N_n: least N > N_{n-1} with D_n | N!
  while (mpz_divisible_p(factorial(N).get_mpz_t(), D.get_mpz_t()) == 0) ++N;
  return {Natural(N), D};
}

}  // namespace detail

/// Builds Delta_{n+1} from a space with stages 1..n.
inline Space build_next_stage(const Space& prev) {
  const Params& params = prev.params();
  const unsigned n = prev.stages();
  WeightSequences seq(params);
  Space s = prev;
  Space::Builder::clear_gamma_prime(s);

  NetStage net;
  net.n = n;
  Natural prev_N = prev.nets().empty() ? Natural(0) : prev.nets().back().N_n;
  std::tie(net.N_n, net.D_n) = detail::choose_net_denominator(prev, n, prev_N);

  NetOptions options;
  if (params.toy) {
    options.signs = params.net_signs;
    options.max_support = params.net_max_support;
  }
  options.budget = params.element_budget + 1;

  AdmissionCounts& counts = net.admitted;
  auto overflow = [&] {
    return BudgetError("stage " + std::to_string(n + 1) + " exceeds element budget " +
                       std::to_string(params.element_budget) + " (type1 even " + std::to_string(counts.type1_even) +
                       ", type1 odd " + std::to_string(counts.type1_odd) + ", type2 even " +
                       std::to_string(counts.type2_even) + ", type2 odd " + std::to_string(counts.type2_odd) + ")");
  };

  std::vector<std::vector<SparseFunctional>> nets(n);
  for (unsigned p = 0; p < n; ++p) {
    std::vector<Id> coords = prev.window_ids(p, n);
    NetCertificate cert = certify_net(coords.size(), net.D_n, n);
    if (!cert.passes) {
      std::string msg = "net B_{" + std::to_string(p) + "," + std::to_string(n) + "} with D_" + std::to_string(n) +
                        " = " + net.D_n.get_str() + " is not a 2^-" + std::to_string(n) +
                        "-net certificate; minimal adequate D_" + std::to_string(n) + " = " +
                        cert.minimal_denominator.get_str();
      if (!params.toy) throw NetError(msg, cert.minimal_denominator);
      if (p == 0) Space::Builder::warn(s, msg);
    }
    net.certificates.push_back(cert);
    try {
      nets[p] = enumerate_net(coords, net.D_n, options);
    } catch (const BudgetError&) {
      throw overflow();
    }
    net.net_sizes.push_back(nets[p].size());
  }

  const unsigned j_cap =
      params.toy && params.max_weight_index != 0 ? std::min(n + 1, params.max_weight_index) : n + 1;
  std::uint64_t next_sigma = prev.max_sigma();
  const std::uint64_t stride = params.sigma_stride;

  Space::Builder::begin_stage(s);
  auto admit = [&](GammaElement e, SparseFunctional c, std::size_t& counter) {
    ++counter;
    if (e.b_star.empty()) ++counts.zero_functionals;
    if (counts.total() > params.element_budget) throw overflow();
    e.rank = n + 1;
    next_sigma += stride;
    e.sigma = next_sigma;
    Space::Builder::push(s, std::move(e), std::move(c));
  };

  // Type 1: (n+1, 1/m_j, b*), b* in B_{0,n}.
  for (unsigned j = 1; j <= j_cap; ++j) {
    const Natural& mj = seq.m(j);
    Scalar inv_mj = make_scalar(Natural(1), mj);
    if (j % 2 == 0) {
      for (const auto& b : nets[0]) {
        GammaElement e;
        e.kind = ElementKind::type1;
        e.weight_index = j;
        e.age = 1;
        e.b_star = b;
        admit(std::move(e), inv_mj * b, counts.type1_even);
      }
    } else {
      // b* = e*_eta with weight eta = 1/m_{4i-2} < 1/n_j^2.
      const Natural& nj = seq.n(j);
      for (Id eta = 0; eta < prev.size(); ++eta) {
        unsigned k = prev.element(eta).weight_index;
        if (k % 4 != 2) continue;
        if (!(seq.m(k) > nj * nj)) continue;
        GammaElement e;
        e.kind = ElementKind::type1;
        e.weight_index = j;
        e.age = 1;
        e.b_star = SparseFunctional::unit(eta);
        admit(std::move(e), inv_mj * e.b_star, counts.type1_odd);
      }
    }
  }

  // Type 2: (n+1, xi, 1/m_j, b*), xi in Delta_p, 1 <= p <= n-1.
  for (unsigned p = 1; p + 1 <= n; ++p) {
    auto [first, last] = prev.stage_range(p);
    std::map<Id, SparseFunctional> projected_units;  // P*_{(0,p]} e*_eta, cached
    auto tail_part = [&](const SparseFunctional& b) {
      SparseFunctional head;
      for (const auto& [eta, a] : b) {
        auto it = projected_units.find(eta);
        if (it == projected_units.end())
          it = projected_units.emplace(eta, prev.dual_projection(SparseFunctional::unit(eta), p)).first;
        head.add_scaled(it->second, a);
      }
      return b - head;
    };
    for (Id xi = first; xi < last; ++xi) {
      const GammaElement& x = prev.element(xi);
      const unsigned j = x.weight_index;
      if (j > j_cap) continue;
      if (!(Natural(x.age) < seq.n(j))) continue;
      Scalar inv_mj = make_scalar(Natural(1), seq.m(j));
      auto make = [&](const SparseFunctional& b) {
        GammaElement e;
        e.kind = ElementKind::type2;
        e.weight_index = j;
        e.age = 1 + x.age;
        e.b_star = b;
        e.xi = xi;
        e.p = p;
        SparseFunctional c = inv_mj * tail_part(b);
        c.add(xi, Scalar(1));
        return std::make_pair(std::move(e), std::move(c));
      };
      if (j % 2 == 0) {
        for (const auto& b : nets[p]) {
          auto [e, c] = make(b);
          admit(std::move(e), std::move(c), counts.type2_even);
        }
      } else {
        // b* = e*_eta, eta in Gamma_n \ Gamma_p of weight 1/m_{4 sigma(xi)}.
        const std::uint64_t target = 4 * x.sigma;
        for (Id eta = static_cast<Id>(prev.gamma_size(p)); eta < prev.size(); ++eta) {
          if (prev.element(eta).weight_index != target) continue;
          auto [e, c] = make(SparseFunctional::unit(eta));
          admit(std::move(e), std::move(c), counts.type2_odd);
        }
      }
    }
  }
  if (counts.total() == 0) throw StructuralError("stage " + std::to_string(n + 1) + " admitted no elements");
  Space::Builder::add_net(s, std::move(net));
  return s;
}

/// Gamma': Delta'_2 = {beta_0}; Delta'_{n+1} = { gamma in Delta_{n+1} :
/// c*_gamma(eta) != 0 for some eta in Gamma'_n }.
inline Space build_gamma_prime(const Space& in) {
  if (in.stages() < 2) throw StructuralError("Gamma' needs stage 2");
  auto [first, last] = in.stage_range(2);
  if (last - first < 2) throw StructuralError("Delta_2 has fewer than two elements; Delta'_2 cannot be proper");
  const std::size_t pick = in.params().beta0_index;
  if (pick >= last - first) throw StructuralError("beta_0 index outside Delta_2");
  const Id beta0 = first + static_cast<Id>(pick);
  std::vector<bool> flags(in.size(), false);
  flags[beta0] = true;
  for (unsigned n = 2; n < in.stages(); ++n) {
    auto [a, b] = in.stage_range(n + 1);
    for (Id g = a; g < b; ++g)
      for (const auto& entry : in.c_star(g))
        if (flags[entry.first]) {
          flags[g] = true;
          break;
        }
  }
  Space out = in;
  Space::Builder::set_gamma_prime(out, beta0, std::move(flags));
  for (unsigned n = 2; n <= in.stages(); ++n) {
    auto ids = out.delta_prime_ids(n);
    auto [a, b] = out.stage_range(n);
    if (ids.empty() || ids.size() == static_cast<std::size_t>(b - a))
      throw StructuralError("Delta'_" + std::to_string(n) + " is empty or not proper");
  }
  return out;
}

/// Builds stages 1..max_stage and, when max_stage >= 2, Gamma'.
inline Space build_space(const Params& params) {
  Space s = initial_space(params);
  while (s.stages() < params.max_stage) s = build_next_stage(s);
  if (s.stages() >= 2) s = build_gamma_prime(s);
  return s;
}

/// Net B_{p,n} of the built space, with its certificate.
struct NetResult {
  std::vector<SparseFunctional> functionals;
  NetCertificate certificate;
};

inline NetResult generate_net(const Space& s, unsigned p, unsigned n, const Natural& denominator) {
  if (!(p < n)) throw IndexError("net B_{p,n} needs p < n");
  if (n > s.stages()) throw IndexError("net stage beyond built stages");
  const Params& params = s.params();
  std::vector<Id> coords = s.window_ids(p, n);
  NetResult r;
  r.certificate = certify_net(coords.size(), denominator, n);
  if (!r.certificate.passes && !params.toy)
    throw NetError("D_" + std::to_string(n) + " = " + denominator.get_str() +
                       " fails the net certificate; minimal adequate D_" + std::to_string(n) + " = " +
                       r.certificate.minimal_denominator.get_str(),
                   r.certificate.minimal_denominator);
  NetOptions options;
  if (params.toy) {
    options.signs = params.net_signs;
    options.max_support = params.net_max_support;
  }
  options.budget = params.element_budget + 1;
  r.functionals = enumerate_net(coords, denominator, options);
  return r;
}

/// The net B_{p,n} exactly as used by the recorded build.
inline NetResult generate_net(const Space& s, unsigned p, unsigned n) {
  if (n == 0 || n > s.nets().size()) throw IndexError("no recorded net for stage " + std::to_string(n));
  return generate_net(s, p, n, s.nets()[n - 1].D_n);
}

}  // namespace bdwb

#endif  // BDWB_SPACE_HPP
