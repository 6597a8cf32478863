#ifndef BDWB_FDD_HPP
#define BDWB_FDD_HPP

#include <bdwb/lp_norms.hpp>
#include <bdwb/matrix.hpp>
#include <bdwb/report.hpp>
#include <bdwb/space.hpp>

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bdwb {

/// A built space cut at stage N, with the d-vectors d_gamma (gamma in
/// Gamma_N) computed once. Points live in l_inf(Gamma_N) and functionals in
/// l1(Gamma_N); "d-coordinates" of x are the coefficients a_gamma with
/// x = sum a_gamma d_gamma.
class Truncation {
 public:
  explicit Truncation(std::shared_ptr<const Space> space, unsigned N = 0) : space_(std::move(space)) {
    if (!space_) throw std::invalid_argument("null space");
    N_ = N == 0 ? space_->stages() : N;
    if (N_ > space_->stages()) throw IndexError("truncation beyond built stages");
    size_ = space_->gamma_size(N_);
    rank_.resize(size_);
    for (Id g = 0; g < size_; ++g) rank_[g] = space_->element(g).rank;
    compute_d_vectors();
  }

  const Space& space() const { return *space_; }
  std::shared_ptr<const Space> shared_space() const { return space_; }
  unsigned N() const { return N_; }
  std::size_t size() const { return size_; }
  unsigned rank(Id g) const {
    check(g);
    return rank_[g];
  }
  std::vector<Id> ids() const { return space_->window_ids(0, N_); }

  const SparsePoint& d_vector(Id g) const {
    check(g);
    return d_[g];
  }
  SparseFunctional d_star(Id g) const {
    check(g);
    SparseFunctional f = space_->d_star(g);
    f.set_universe(size_);
    return f;
  }
  const SparseFunctional& c_star(Id g) const {
    check(g);
    return space_->c_star(g);
  }

  /// i_n(u): equals u on Gamma_n and x(eta) = <c*_eta, x> for later eta.
  SparsePoint extend(const SparsePoint& u, unsigned n) const {
    const Id limit = static_cast<Id>(space_->gamma_size(n));
    if (!u.empty() && u.max_id() >= limit) throw IndexError("i_n needs a point supported on Gamma_n");
    SparsePoint x = u;
    x.set_universe(size_);
    for (Id eta = limit; eta < size_; ++eta) x.set(eta, duality_pair(space_->c_star(eta), x));
    return x;
  }

  /// sum a_gamma d_gamma for coefficients given in d-coordinates.
  SparsePoint from_d_coords(const SparsePoint& a) const {
    SparsePoint x(size_);
    for (const auto& [g, coeff] : a) x.add_scaled(d_vector(g), coeff);
    return x;
  }
  /// a_gamma = <d*_gamma, x>.
  SparsePoint to_d_coords(const SparsePoint& x) const {
    SparsePoint a(size_);
    for (Id g = 0; g < size_; ++g) a.set(g, x.get(g) - duality_pair(space_->c_star(g), x));
    return a;
  }

  /// P*_{(0,p]} e*_eta for every eta in Gamma_N.
  std::vector<SparseFunctional> dual_projection_table(unsigned p) const {
    const Id limit = static_cast<Id>(space_->gamma_size(p));
    std::vector<SparseFunctional> table(size_);
    for (Id eta = 0; eta < size_; ++eta) {
      if (eta < limit) {
        table[eta] = SparseFunctional::unit(eta, size_);
      } else {
        SparseFunctional f(size_);
        for (const auto& [zeta, a] : space_->c_star(eta)) f.add_scaled(table[zeta], a);
        table[eta] = std::move(f);
      }
    }
    return table;
  }

  SparseFunctional dual_projection(const SparseFunctional& f, unsigned p) const {
    SparseFunctional g = space_->dual_projection(f, p);
    g.set_universe(size_);
    return g;
  }

  /// Range [min, max] of the ranks carrying a nonzero d-coordinate.
  std::pair<unsigned, unsigned> range_of(const SparsePoint& d_coords) const {
    if (d_coords.empty()) throw std::domain_error("the range of 0 is undefined");
    unsigned lo = ~0u, hi = 0;
    for (const auto& entry : d_coords) {
      lo = std::min(lo, rank(entry.first));
      hi = std::max(hi, rank(entry.first));
    }
    return {lo, hi};
  }

 private:
  void check(Id g) const {
    if (g >= size_) throw IndexError("id " + std::to_string(g) + " outside Gamma_" + std::to_string(N_));
  }

  // d_gamma(gamma) = 1, zero before gamma, d_gamma(eta) = <c*_eta, d_gamma> after.
  void compute_d_vectors() {
    d_.assign(size_, SparsePoint(size_));
    // users[z] = ids eta with z in supp c*_eta, so only etas that can see the
    // current support are evaluated.
    std::vector<std::vector<Id>> users(size_);
    for (Id eta = 0; eta < size_; ++eta)
      for (const auto& entry : space_->c_star(eta)) users[entry.first].push_back(eta);
    for (Id g = 0; g < size_; ++g) {
      SparsePoint& d = d_[g];
      d.set(g, Scalar(1));
      std::set<Id> frontier(users[g].begin(), users[g].end());
      while (!frontier.empty()) {
        Id eta = *frontier.begin();
        frontier.erase(frontier.begin());
        Scalar v = duality_pair(space_->c_star(eta), d);
        if (is_zero(v)) continue;
        d.set(eta, v);
        frontier.insert(users[eta].begin(), users[eta].end());
      }
    }
  }

  std::shared_ptr<const Space> space_;
  unsigned N_ = 0;
  std::size_t size_ = 0;
  std::vector<unsigned> rank_;
  std::vector<SparsePoint> d_;
};

/// d_gamma truncated to Gamma_N.
inline SparsePoint d_vector(const Truncation& t, Id g) { return t.d_vector(g); }

/// Matrix with columns d_gamma (e-coordinates), gamma in Gamma_N.
inline RationalMatrix d_basis_matrix(const Truncation& t) {
  RationalMatrix m(t.ids(), t.ids());
  for (Id g = 0; g < t.size(); ++g) m.set_column(g, t.d_vector(g));
  return m;
}

/// Matrix with rows d*_gamma, i.e. d_basis_matrix's inverse.
inline RationalMatrix d_star_matrix(const Truncation& t) {
  RationalMatrix m(t.ids(), t.ids());
  for (Id g = 0; g < t.size(); ++g) {
    m.add(g, g, Scalar(1));
    for (const auto& [z, a] : t.c_star(g)) m.add(g, z, -a);
  }
  return m;
}

struct ProjectionPair {
  unsigned p = 0, q = 0;
  RationalMatrix dual;    // P*_{(p,q]} on l1(Gamma_N), e*-coordinates, columns = images of e*_eta
  RationalMatrix primal;  // P_{(p,q]} on l_inf(Gamma_N), e-coordinates
};

inline ProjectionPair proj_star_interval(const Truncation& t, unsigned p, unsigned q) {
  if (!(p < q) || q > t.N()) throw IndexError("projection interval (p,q] needs 0 <= p < q <= N");
  auto hi = t.dual_projection_table(q);
  std::vector<SparseFunctional> lo;
  if (p > 0) lo = t.dual_projection_table(p);
  ProjectionPair r;
  r.p = p;
  r.q = q;
  r.dual = RationalMatrix(t.ids(), t.ids());
  for (Id eta = 0; eta < t.size(); ++eta) {
    SparseFunctional col = hi[eta];
    if (p > 0) col -= lo[eta];
    r.dual.set_column(eta, col);
  }
  r.primal = r.dual.transpose();
  return r;
}

/// Measured basis constants at truncation N. At truncation the d-vectors
/// span all of l_inf(Gamma_N), so the primal norms are plain row sums; the
/// linear-programming route over the d-basis is run as a cross-check when
/// |Gamma_N| <= lp_limit.
struct BasisReport {
  std::vector<Scalar> dual_per_n;    // ||P*_{(0,n]}||, n = 1..N
  std::vector<Scalar> primal_per_n;  // ||P_{(0,n]}||
  std::vector<std::optional<Scalar>> primal_lp_per_n;
  Scalar M_dual;
  Scalar primal_constant;
  Scalar decomposition_constant;  // max over 0 <= p < q <= N of ||P_{(p,q]}||
  bool within_two = false;
};

inline BasisReport basis_constants(const Truncation& t, std::size_t lp_limit = 12) {
  BasisReport r;
  r.M_dual = 1;
  r.primal_constant = 1;
  r.decomposition_constant = 1;
  std::vector<std::vector<SparseFunctional>> tables(t.N() + 1);
  for (unsigned n = 1; n <= t.N(); ++n) tables[n] = t.dual_projection_table(n);
  std::vector<SparsePoint> basis;
  if (t.size() <= lp_limit)
    for (Id g = 0; g < t.size(); ++g) basis.push_back(t.d_vector(g));
  auto column_norm = [&](unsigned p, unsigned q) {
    // ||P*_{(p,q]}||_1 = max column l1 sum
    Scalar best(0);
    for (Id eta = 0; eta < t.size(); ++eta) {
      SparseFunctional col = tables[q][eta];
      if (p > 0) col -= tables[p][eta];
      best = std::max(best, norm_l1(col));
    }
    return best;
  };
  for (unsigned n = 1; n <= t.N(); ++n) {
    Scalar dual = column_norm(0, n);
    r.dual_per_n.push_back(dual);
    // P_{(0,n]} is the transpose, so its row sums are the same column sums.
    RationalMatrix primal(t.ids(), t.ids());
    for (Id eta = 0; eta < t.size(); ++eta)
      for (const auto& [z, a] : tables[n][eta]) primal.set(eta, z, a);
    Scalar rows = opnorm_linf_full(primal);
    r.primal_per_n.push_back(rows);
    if (!basis.empty())
      r.primal_lp_per_n.push_back(opnorm_linf_on_subspace(primal, basis).value);
    else
      r.primal_lp_per_n.push_back(std::nullopt);
    r.M_dual = std::max(r.M_dual, dual);
    r.primal_constant = std::max(r.primal_constant, rows);
  }
  for (unsigned q = 1; q <= t.N(); ++q)
    for (unsigned p = 0; p < q; ++p) r.decomposition_constant = std::max(r.decomposition_constant, column_norm(p, q));
  r.within_two = r.M_dual <= 2;
  return r;
}

struct ExtensionReport {
  RationalMatrix matrix;  // columns i_n(e_gamma), gamma in Gamma_n
  bool extension_property = false;
  bool left_inequality = false;
  bool bounded_by_M = false;
  bool image_is_d_span = false;
  Scalar norm;  // ||i_n||, exact row sums
  Scalar M;     // M_dual used in the bound
};

/// i_n as a matrix, with the extension property, both sides of
/// ||x|| <= ||i_n x|| <= M ||x|| on the e-basis and the image identity
/// i_n[l_inf(Gamma_n)] = span{d_gamma : gamma in Gamma_n}.
inline ExtensionReport extension_op(const Truncation& t, unsigned n, std::optional<Scalar> M = std::nullopt) {
  if (n == 0 || n > t.N()) throw IndexError("i_n needs 1 <= n <= N");
  ExtensionReport r;
  r.M = M ? *M : basis_constants(t, 0).M_dual;
  const std::size_t limit = t.space().gamma_size(n);
  std::vector<Id> cols = t.space().window_ids(0, n);
  r.matrix = RationalMatrix(t.ids(), cols);
  r.extension_property = r.left_inequality = r.image_is_d_span = true;
  for (Id g : cols) {
    SparsePoint x = t.extend(SparsePoint::unit(g, t.size()), n);
    r.matrix.set_column(g, x);
    if (!(x.restricted([&](Id i) { return i < limit; }) == SparsePoint::unit(g, t.size())))
      r.extension_property = false;
    if (norm_linf(x) < 1) r.left_inequality = false;
    SparsePoint a = t.to_d_coords(x);
    if (!a.empty() && a.max_id() >= limit) r.image_is_d_span = false;
  }
  // i_n is injective (it restricts back to the identity), so the image has
  // dimension |Gamma_n|, the number of d_gamma it must lie among.
  r.image_is_d_span = r.image_is_d_span && r.extension_property;
  r.norm = opnorm_linf_full(r.matrix);
  if (cols.empty()) r.norm = 0;
  r.bounded_by_M = r.norm <= r.M;
  return r;
}

struct LocalSupport {
  unsigned lo = 0, hi = 0;    // ran x = [lo, hi]
  std::vector<Id> ids;        // locsupp x
  bool reconstructs = false;  // x = i_hi(x|_{Gamma_hi})
};

/// Range and local support of x = sum a_gamma d_gamma (a given in d-coordinates).
inline LocalSupport local_support(const Truncation& t, const SparsePoint& d_coords) {
  LocalSupport r;
  std::tie(r.lo, r.hi) = t.range_of(d_coords);
  SparsePoint x = t.from_d_coords(d_coords);
  const Id limit = static_cast<Id>(t.space().gamma_size(r.hi));
  SparsePoint u = x.restricted([&](Id i) { return i < limit; });
  r.ids = u.support();
  r.reconstructs = t.extend(u, r.hi) == x;
  return r;
}

enum class ProfileDirection { into, out_of };

/// ||T - P_{(0,n]} T|| (into) or ||T - T P_{(0,n]}|| (out_of) for n in the
/// schedule. T is given in e-coordinates; its columns are the coordinates of
/// its domain, a coordinate subspace l_inf(S) of l_inf(Gamma_N), so norms are
/// exact row sums. For out_of the domain must be P_{(0,n]}-invariant.
inline std::vector<Scalar> compact_approx_profile(const Truncation& t, const RationalMatrix& T,
                                                  ProfileDirection direction, const std::vector<unsigned>& schedule) {
  std::vector<Scalar> out;
  std::set<Id> domain(T.cols().begin(), T.cols().end());
  for (Id r : T.rows())
    if (r >= t.size()) throw ShapeError("operator rows outside Gamma_N");
  for (Id c : T.cols())
    if (c >= t.size()) throw ShapeError("operator columns outside Gamma_N");
  for (unsigned n : schedule) {
    if (n == 0 || n > t.N()) throw IndexError("profile stage outside 1..N");
    auto table = t.dual_projection_table(n);
    // P_{(0,n]} x at coordinate eta is <P*_{(0,n]} e*_eta, x>.
    auto project = [&](const SparsePoint& x) {
      SparsePoint y(t.size());
      for (Id eta = 0; eta < t.size(); ++eta) y.set(eta, duality_pair(table[eta], x));
      return y;
    };
    RationalMatrix diff(t.ids(), T.cols());
    for (Id c : T.cols()) {
      SparsePoint col(t.size());
      for (const auto& [r, a] : T.column(c)) col.set(r, a);
      SparsePoint rest;
      if (direction == ProfileDirection::into) {
        rest = col - project(col);
      } else {
        SparsePoint pe = project(SparsePoint::unit(c, t.size()));
        SparsePoint tpe(t.size());
        for (const auto& [k, a] : pe) {
          if (!domain.count(k)) throw ShapeError("domain of T is not invariant under P_{(0,n]}");
          for (const auto& [r, v] : T.column(k)) tpe.add(r, a * v);
        }
        rest = col - tpe;
      }
      diff.set_column(c, rest);
    }
    out.push_back(opnorm_linf_full(diff));
  }
  return out;
}

/// Exhaustive check of the structural statements about Gamma':
///  (a) gamma in Gamma' \ {beta_0}  <=>  c*_gamma restricted to Gamma' is nonzero,
///  (b) gamma in Gamma'  <=>  d*_gamma restricted to Gamma' is nonzero,
///  (c) gamma in Gamma'  =>  d_gamma vanishes off Gamma',
///  (d) every y in span{d_gamma : gamma in Gamma'} is supported in Gamma'
///      (checked on `samples` pseudo-random combinations),
///  (e) i_q[l_inf(Gamma'_q \ Gamma'_p)] = span{d_gamma : gamma in Gamma'_q \ Gamma'_p}
///      for all 0 <= p < q <= N.
inline VerificationReport verify_gamma_prime_structure(const Truncation& t, std::size_t samples = 20,
                                                       std::uint64_t seed = 1) {
  const Space& s = t.space();
  VerificationReport rep;
  rep.suite = "y";
  if (!s.has_gamma_prime()) {
    rep.add("gamma_prime_built", "Gamma' is defined from stage 2 on", false, "space has no Gamma'");
    return rep;
  }
  const Id beta0 = s.beta0();
  auto prime = [&](Id g) { return s.in_gamma_prime(g); };

  std::size_t bad_a = 0, bad_b = 0, bad_c = 0;
  std::string wa, wb, wc;
  for (Id g = 0; g < t.size(); ++g) {
    bool c_hits = false;
    for (const auto& entry : t.c_star(g))
      if (prime(entry.first)) c_hits = true;
    if ((prime(g) && g != beta0) != c_hits) {
      if (bad_a++ == 0) wa = std::to_string(g);
    }
    SparseFunctional d = t.d_star(g);
    bool d_hits = false;
    for (const auto& entry : d)
      if (prime(entry.first)) d_hits = true;
    if (prime(g) != d_hits) {
      if (bad_b++ == 0) wb = std::to_string(g);
    }
    if (prime(g))
      for (const auto& entry : t.d_vector(g))
        if (!prime(entry.first)) {
          if (bad_c++ == 0) wc = std::to_string(g) + "@" + std::to_string(entry.first);
          break;
        }
  }
  {
    auto& c = rep.add("c_star_meets_gamma_prime", "gamma in Gamma'\\{beta_0} iff c*_gamma|Gamma' != 0", bad_a == 0);
    c.witness("elements", std::to_string(t.size())).witness("violations", std::to_string(bad_a));
    if (bad_a) c.witness("first", wa);
    c.witness("beta0_c_star_support_in_gamma_1",
              (t.c_star(beta0).empty() || t.c_star(beta0).max_id() < s.gamma_size(1)) ? "true" : "false");
  }
  rep.add("d_star_meets_gamma_prime", "gamma in Gamma' iff d*_gamma|Gamma' != 0", bad_b == 0)
      .witness("violations", std::to_string(bad_b))
      .witness("first", bad_b ? wb : "-");
  rep.add("d_vector_vanishes_off_gamma_prime", "d_gamma vanishes on Gamma \\ Gamma' for gamma in Gamma'", bad_c == 0)
      .witness("violations", std::to_string(bad_c))
      .witness("first", bad_c ? wc : "-");

  std::vector<Id> primes = s.gamma_prime_ids(t.N());
  std::size_t bad_d = 0;
  std::uint64_t state = seed;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  };
  for (std::size_t k = 0; k < samples && !primes.empty(); ++k) {
    SparsePoint a(t.size());
    for (int term = 0; term < 4; ++term)
      a.add(primes[next() % primes.size()], make_scalar(static_cast<long>(next() % 7) - 3, 1 + next() % 5));
    SparsePoint y = t.from_d_coords(a);
    for (const auto& entry : y)
      if (!prime(entry.first)) {
        ++bad_d;
        break;
      }
  }
  rep.add("span_supported_in_gamma_prime", "supp y is contained in Gamma' for y in the Gamma' d-span", bad_d == 0)
      .witness("samples", std::to_string(samples))
      .witness("violations", std::to_string(bad_d));

  std::size_t bad_e = 0, pairs = 0;
  std::string we;
  for (unsigned q = 1; q <= t.N(); ++q) {
    const Id hi = static_cast<Id>(s.gamma_size(q));
    for (unsigned p = 0; p < q; ++p) {
      const Id lo = static_cast<Id>(s.gamma_size(p));
      ++pairs;
      std::vector<SparsePoint> coords;
      std::size_t window = 0;
      bool ok = true;
      for (Id g = lo; g < hi; ++g) {
        if (!prime(g)) continue;
        ++window;
        SparsePoint a = t.to_d_coords(t.extend(SparsePoint::unit(g, t.size()), q));
        for (const auto& entry : a)
          if (entry.first < lo || entry.first >= hi || !prime(entry.first)) ok = false;
        coords.push_back(std::move(a));
      }
      // the images are independent (restriction recovers e_gamma), so equal
      // dimension plus containment gives equality
      if (ok && window <= 64) ok = rank_of(coords) == window;
      if (!ok && bad_e++ == 0) we = "(" + std::to_string(p) + "," + std::to_string(q) + "]";
    }
  }
  rep.add("extension_of_gamma_prime_window", "i_q[l_inf(Gamma'_q\\Gamma'_p)] = span{d_gamma : gamma in Gamma'_q\\Gamma'_p}",
          bad_e == 0)
      .witness("intervals", std::to_string(pairs))
      .witness("violations", std::to_string(bad_e))
      .witness("first", bad_e ? we : "-");

  std::size_t improper = 0;
  for (unsigned n = 2; n <= t.N(); ++n) {
    auto [a, b] = s.stage_range(n);
    std::size_t k = s.delta_prime_ids(n).size();
    if (k == 0 || k == static_cast<std::size_t>(b - a)) ++improper;
  }
  rep.add("delta_prime_nonempty_proper", "Delta'_n is a nonempty proper subset of Delta_n for 2 <= n <= N",
          improper == 0)
      .witness("stages", std::to_string(t.N()));
  return rep;
}

}  // namespace bdwb

#endif  // BDWB_FDD_HPP
