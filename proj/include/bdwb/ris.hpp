#ifndef BDWB_RIS_HPP
#define BDWB_RIS_HPP

#include <bdwb/fdd.hpp>
#include <bdwb/params.hpp>
#include <bdwb/report.hpp>

#include <optional>
#include <string>
#include <vector>

namespace bdwb {

/// Block sequence x_1, x_2, ... given in d-coordinates, with ranges and
/// e-coordinate values precomputed at the truncation.
class BlockSequence {
 public:
  BlockSequence(const Truncation& t, std::vector<SparsePoint> d_coords) : coords_(std::move(d_coords)) {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (coords_[i].empty()) throw ShapeError("block sequence entry " + std::to_string(i + 1) + " is zero");
      ranges_.push_back(t.range_of(coords_[i]));
      points_.push_back(t.from_d_coords(coords_[i]));
      if (i > 0 && !(ranges_[i - 1].second < ranges_[i].first))
        throw ShapeError("entries " + std::to_string(i) + " and " + std::to_string(i + 1) + " are not successive blocks");
    }
  }

  std::size_t size() const { return coords_.size(); }
  const SparsePoint& d_coords(std::size_t i) const { return coords_.at(i); }
  const SparsePoint& point(std::size_t i) const { return points_.at(i); }
  std::pair<unsigned, unsigned> range(std::size_t i) const { return ranges_.at(i); }

  BlockSequence subsequence(const Truncation& t, const std::vector<std::size_t>& keep) const {
    std::vector<SparsePoint> picked;
    for (std::size_t i : keep) picked.push_back(coords_.at(i));
    return BlockSequence(t, std::move(picked));
  }

 private:
  std::vector<SparsePoint> coords_;
  std::vector<std::pair<unsigned, unsigned>> ranges_;
  std::vector<SparsePoint> points_;
};

struct RISCertificate {
  Scalar C;  // least constant for which conditions (i) and (iii) hold
  std::vector<unsigned> js;
  int binding_condition = 1;  // which condition attains C
  std::size_t binding_index = 0;
  std::optional<Id> binding_gamma;
  Scalar min_norm;  // min_i ||x_i||, > 0 means semi-normalized over the finite sequence
};

struct RISViolation {
  int condition = 0;  // 1, 2 or 3 as in the definition
  std::size_t index = 0;
  std::optional<Id> gamma;
  std::string detail;
};

struct RISResult {
  std::optional<RISCertificate> certificate;
  std::optional<RISViolation> violation;
  bool ok() const { return certificate.has_value(); }
};

/// Conditions of a C-RIS for (x_i) with indices (j_i):
///   (i)   ||x_i|| <= C,
///   (ii)  max ran x_{i-1} < j_i for every i after the first,
///   (iii) |x_i(gamma)| <= C / m_k whenever weight gamma = 1/m_k with k < j_i.
/// Returns the least C, or the first violated condition. With `cap`, (i) and
/// (iii) are checked against that C instead.
inline RISResult ris_certify(const Truncation& t, const BlockSequence& xs, const std::vector<unsigned>& js,
                             std::optional<Scalar> cap = std::nullopt) {
  RISResult r;
  if (js.size() != xs.size()) throw ShapeError("index sequence length differs from the block sequence");
  if (xs.size() == 0) throw ShapeError("empty block sequence");
  for (std::size_t i = 0; i < js.size(); ++i) {
    if (js[i] == 0 || (i > 0 && js[i] <= js[i - 1])) {
      r.violation = RISViolation{2, i, std::nullopt, "index sequence is not a strictly increasing sequence of naturals"};
      return r;
    }
    if (i > 0 && !(xs.range(i - 1).second < js[i])) {
      r.violation = RISViolation{2, i, std::nullopt,
                                 "max ran x_" + std::to_string(i) + " = " + std::to_string(xs.range(i - 1).second) +
                                     " is not below j_" + std::to_string(i + 1) + " = " + std::to_string(js[i])};
      return r;
    }
  }
  WeightSequences seq(t.space().params());
  RISCertificate c;
  c.js = js;
  c.C = 0;
  c.min_norm = norm_linf(xs.point(0));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Scalar nrm = norm_linf(xs.point(i));
    c.min_norm = std::min(c.min_norm, nrm);
    if (cap && nrm > *cap) {
      r.violation = RISViolation{1, i, std::nullopt, "||x_" + std::to_string(i + 1) + "|| = " + to_string(nrm)};
      return r;
    }
    if (nrm > c.C) {
      c.C = nrm;
      c.binding_condition = 1;
      c.binding_index = i;
      c.binding_gamma.reset();
    }
    for (const auto& [g, v] : xs.point(i)) {
      unsigned k = t.space().element(g).weight_index;
      if (k >= js[i]) continue;
      Scalar need = Scalar(seq.m(k)) * abs(v);
      if (cap && need > *cap) {
        r.violation = RISViolation{3, i, g, "m_k |x_i(gamma)| = " + to_string(need)};
        return r;
      }
      if (need > c.C) {
        c.C = need;
        c.binding_condition = 3;
        c.binding_index = i;
        c.binding_gamma = g;
      }
    }
  }
  if (cap) c.C = *cap;
  r.certificate = std::move(c);
  return r;
}

enum class LocalWeight { bounded, rapidly_decreasing, neither };

inline const char* to_string(LocalWeight w) {
  switch (w) {
    case LocalWeight::bounded: return "bounded";
    case LocalWeight::rapidly_decreasing: return "rapidly_decreasing";
    case LocalWeight::neither: return "neither";
  }
  return "?";
}

struct LocalWeightReport {
  LocalWeight kind = LocalWeight::neither;
  unsigned bound = 0;  // largest weight index allowed for "bounded"
  std::vector<std::vector<Id>> locsupps;
  std::vector<unsigned> js;        // greedy indices (empty for neither)
  std::optional<RISResult> ris;    // certificate found for them
};

/// Least admissible indices: j_1 = 1, j_i = max(j_{i-1} + 1, max ran x_{i-1} + 1).
/// Smaller j_i only removes constraints from (iii), so these give the least C.
inline std::vector<unsigned> greedy_js(const BlockSequence& xs) {
  std::vector<unsigned> js;
  for (std::size_t i = 0; i < xs.size(); ++i)
    js.push_back(i == 0 ? 1u : std::max(js.back() + 1, xs.range(i - 1).second + 1));
  return js;
}

/// Finite reading of the two local-weight notions:
///  bounded:             every weight index on a local support is <= bound
///                       (default: the largest index on locsupp x_1),
///  rapidly decreasing:  every gamma in locsupp x_{i+1} has weight index > max ran x_i.
/// Bounded is tested first. A classified sequence gets greedy indices and a
/// measured RIS constant.
inline LocalWeightReport local_weight_classify(const Truncation& t, const BlockSequence& xs,
                                               std::optional<unsigned> bound = std::nullopt) {
  LocalWeightReport r;
  const Space& s = t.space();
  for (std::size_t i = 0; i < xs.size(); ++i) r.locsupps.push_back(local_support(t, xs.d_coords(i)).ids);
  unsigned first_max = 0;
  for (Id g : r.locsupps.at(0)) first_max = std::max(first_max, s.element(g).weight_index);
  r.bound = bound ? *bound : first_max;
  bool bounded = true, rapid = true;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (Id g : r.locsupps[i]) {
      unsigned k = s.element(g).weight_index;
      if (k > r.bound) bounded = false;
      if (i > 0 && !(k > xs.range(i - 1).second)) rapid = false;
    }
  r.kind = bounded ? LocalWeight::bounded : rapid ? LocalWeight::rapidly_decreasing : LocalWeight::neither;
  if (r.kind != LocalWeight::neither) {
    r.js = greedy_js(xs);
    r.ris = ris_certify(t, xs, r.js);
  }
  return r;
}

struct WeightSplit {
  SparsePoint y, z;  // e-coordinates
  bool reconstructs = false;      // y + z = x
  bool in_window_span = false;    // both in span{d_gamma : gamma in Gamma'_q \ Gamma'_p}
  bool norms_bounded = false;     // ||y||, ||z|| <= M ||x||
  bool regimes_separated = false; // locsupp y has indices <= k, locsupp z indices > k
  Scalar M;
};

/// u = x|_{Gamma_q}, split into v (weight >= 1/m_k, i.e. index <= k) and
/// w (index > k); y = i_q(v), z = i_q(w). k = 0 puts everything in z.
inline WeightSplit weight_split(const Truncation& t, const SparsePoint& x_d_coords, unsigned k, unsigned p,
                                unsigned q, std::optional<Scalar> M = std::nullopt) {
  if (!(p < q) || q > t.N()) throw IndexError("weight_split needs 0 <= p < q <= N");
  const Space& s = t.space();
  if (!x_d_coords.empty()) {
    auto [lo, hi] = t.range_of(x_d_coords);
    if (lo <= p || hi > q) throw ShapeError("ran x is not inside (p, q]");
  }
  WeightSplit r;
  r.M = M ? *M : basis_constants(t, 0).M_dual;
  SparsePoint x = t.from_d_coords(x_d_coords);
  const Id limit = static_cast<Id>(s.gamma_size(q));
  const Id floor = static_cast<Id>(s.gamma_size(p));
  SparsePoint v(t.size()), w(t.size());
  for (const auto& [g, a] : x) {
    if (g >= limit) continue;
    (s.element(g).weight_index <= k ? v : w).set(g, a);
  }
  r.y = t.extend(v, q);
  r.z = t.extend(w, q);
  r.reconstructs = r.y + r.z == x;
  const Scalar nx = norm_linf(x);
  r.norms_bounded = norm_linf(r.y) <= r.M * nx && norm_linf(r.z) <= r.M * nx;

  auto window_ok = [&](const SparsePoint& pt) {
    if (!s.has_gamma_prime()) return false;
    for (const auto& [g, a] : t.to_d_coords(pt))
      if (g < floor || g >= limit || !s.in_gamma_prime(g)) return false;
    return true;
  };
  r.in_window_span = window_ok(r.y) && window_ok(r.z);

  r.regimes_separated = true;
  auto check_regime = [&](const SparsePoint& pt, bool low) {
    if (pt.empty()) return;
    for (Id g : local_support(t, t.to_d_coords(pt)).ids) {
      bool is_low = s.element(g).weight_index <= k;
      if (is_low != low) r.regimes_separated = false;
    }
  };
  check_regime(r.y, true);
  check_regime(r.z, false);
  return r;
}

/// Conditions for (z, eta) to be a (C, j, 0)-exact pair, each with the worst
/// witness. z is given in e-coordinates.
inline VerificationReport exact_pair_check(const Truncation& t, const SparsePoint& z, Id eta, const Scalar& C,
                                           unsigned j) {
  const Space& s = t.space();
  WeightSequences seq(s.params());
  VerificationReport rep;
  rep.suite = "exact_pair";
  const Scalar bound1 = C / Scalar(seq.m(j));

  Scalar worst1(0);
  std::optional<Id> at1;
  for (Id xi = 0; xi < t.size(); ++xi) {
    Scalar v = abs(duality_pair(t.d_star(xi), z));
    if (v > worst1) worst1 = v, at1 = xi;
  }
  rep.add("dual_coordinates", "|<d*_xi, z>| <= C/m_j for every xi", worst1 <= bound1)
      .witness("max", worst1)
      .witness("bound", bound1)
      .witness("xi", at1 ? std::to_string(*at1) : "-");

  const unsigned k_eta = s.element(eta).weight_index;
  rep.add("weight_of_eta", "weight eta = 1/m_j", k_eta == j)
      .witness("weight_index", std::to_string(k_eta))
      .witness("j", std::to_string(j));

  Scalar nz = norm_linf(z);
  rep.add("sup_norm", "||z|| <= C", nz <= C).witness("norm", nz).witness("C", C);

  rep.add("vanishes_at_eta", "z(eta) = 0", is_zero(z.get(eta))).witness("z(eta)", z.get(eta));

  // |z(xi)| <= C / m_{min(i,j)} for weight xi = 1/m_i, i != j; the witness
  // is the coordinate with the largest excess |z(xi)| - bound.
  std::optional<Scalar> worst_excess;
  Scalar worst_val(0), worst_bound(0);
  std::optional<Id> at5;
  for (const auto& [xi, a] : z) {
    unsigned i = s.element(xi).weight_index;
    if (i == j) continue;
    Scalar b = C / Scalar(seq.m(std::min(i, j)));
    Scalar excess = abs(a) - b;
    if (!worst_excess || excess > *worst_excess) worst_excess = excess, worst_val = abs(a), worst_bound = b, at5 = xi;
  }
  rep.add("weighted_coordinates", "|z(xi)| <= C/m_{min(i,j)} when weight xi = 1/m_i, i != j",
          !worst_excess || sgn(*worst_excess) <= 0)
      .witness("value", worst_val)
      .witness("bound", worst_bound)
      .witness("xi", at5 ? std::to_string(*at5) : "-");
  return rep;
}

}  // namespace bdwb

#endif  // BDWB_RIS_HPP
