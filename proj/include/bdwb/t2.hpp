#ifndef BDWB_T2_HPP
#define BDWB_T2_HPP

#include <bdwb/matrix.hpp>
#include <bdwb/rational.hpp>
#include <bdwb/report.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bdwb {

/// Upper-triangular 2x2 matrix (a11 a12; 0 a22) over Q.
struct T2Mat {
  Scalar a11, a12, a22;

  friend T2Mat operator*(const T2Mat& x, const T2Mat& y) {
    return {x.a11 * y.a11, x.a11 * y.a12 + x.a12 * y.a22, x.a22 * y.a22};
  }
  friend T2Mat operator+(const T2Mat& x, const T2Mat& y) { return {x.a11 + y.a11, x.a12 + y.a12, x.a22 + y.a22}; }
  friend T2Mat operator-(const T2Mat& x, const T2Mat& y) { return {x.a11 - y.a11, x.a12 - y.a12, x.a22 - y.a22}; }
  friend bool operator==(const T2Mat& x, const T2Mat& y) {
    return x.a11 == y.a11 && x.a12 == y.a12 && x.a22 == y.a22;
  }
  static T2Mat identity() { return {Scalar(1), Scalar(0), Scalar(1)}; }
};

inline std::array<T2Mat, 3> t2_basis() {
  return {T2Mat{Scalar(1), Scalar(0), Scalar(0)}, T2Mat{Scalar(0), Scalar(1), Scalar(0)},
          T2Mat{Scalar(0), Scalar(0), Scalar(1)}};
}

/// The derivation A -> (0 a12; 0 0) into rad T2.
inline T2Mat strict_upper(const T2Mat& a) { return {Scalar(0), a.a12, Scalar(0)}; }

/// A finite algebra given by its addition and multiplication tables;
/// element 0 is the zero element.
struct FiniteAlgebra {
  std::string name;
  std::size_t size = 0;
  std::vector<std::vector<std::uint16_t>> add, mul;
  std::vector<std::string> labels;
};

using Subset = std::vector<bool>;

namespace detail {

inline std::size_t popcount(const Subset& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), true)); }

inline bool subset_of(const Subset& a, const Subset& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace detail

/// T2 over Z/p: element (a, b, c) = (a b; 0 c) is encoded as a + p b + p^2 c.
inline FiniteAlgebra t2_over(unsigned p) {
  if (p < 2 || p > 7) throw std::invalid_argument("field size must be a small prime");
  FiniteAlgebra A;
  A.name = "T2(F" + std::to_string(p) + ")";
  A.size = p * p * p;
  auto enc = [p](unsigned a, unsigned b, unsigned c) { return static_cast<std::uint16_t>(a + p * b + p * p * c); };
  A.add.assign(A.size, std::vector<std::uint16_t>(A.size));
  A.mul = A.add;
  for (unsigned x = 0; x < A.size; ++x) {
    unsigned a = x % p, b = (x / p) % p, c = x / (p * p);
    A.labels.push_back("(" + std::to_string(a) + " " + std::to_string(b) + "; 0 " + std::to_string(c) + ")");
    for (unsigned y = 0; y < A.size; ++y) {
      unsigned d = y % p, e = (y / p) % p, f = y / (p * p);
      A.add[x][y] = enc((a + d) % p, (b + e) % p, (c + f) % p);
      A.mul[x][y] = enc((a * d) % p, (a * e + b * f) % p, (c * f) % p);
    }
  }
  return A;
}

/// M_{m_1}(F_2) + ... + M_{m_n}(F_2), elements as packed bit matrices.
inline FiniteAlgebra matrix_direct_sum_f2(const std::vector<unsigned>& ms) {
  unsigned bits = 0;
  for (unsigned m : ms) {
    if (m == 0 || m > 2) throw std::invalid_argument("block sizes must be 1 or 2");
    bits += m * m;
  }
  if (bits > 8) throw std::invalid_argument("direct sum too large for exhaustive enumeration");
  FiniteAlgebra A;
  A.name = "direct sum of matrix algebras over F2";
  A.size = std::size_t{1} << bits;
  A.add.assign(A.size, std::vector<std::uint16_t>(A.size));
  A.mul = A.add;
  auto entry = [](unsigned x, unsigned offset, unsigned m, unsigned i, unsigned j) {
    return (x >> (offset + i * m + j)) & 1u;
  };
  for (unsigned x = 0; x < A.size; ++x) {
    A.labels.push_back(std::to_string(x));
    for (unsigned y = 0; y < A.size; ++y) {
      A.add[x][y] = static_cast<std::uint16_t>(x ^ y);
      unsigned prod = 0, offset = 0;
      for (unsigned m : ms) {
        for (unsigned i = 0; i < m; ++i)
          for (unsigned j = 0; j < m; ++j) {
            unsigned s = 0;
            for (unsigned k = 0; k < m; ++k) s ^= entry(x, offset, m, i, k) & entry(y, offset, m, k, j);
            prod |= s << (offset + i * m + j);
          }
        offset += m * m;
      }
      A.mul[x][y] = static_cast<std::uint16_t>(prod);
    }
  }
  return A;
}

enum class Sidedness { left, two_sided };

/// Smallest left (or two-sided) ideal containing `gens`. Over a prime field
/// closure under addition already gives closure under scalars.
inline Subset ideal_closure(const FiniteAlgebra& A, const Subset& gens, Sidedness side) {
  Subset in(A.size, false);
  std::deque<std::uint16_t> work;
  auto push = [&](std::uint16_t x) {
    if (!in[x]) {
      in[x] = true;
      work.push_back(x);
    }
  };
  push(0);
  for (std::size_t x = 0; x < A.size; ++x)
    if (gens[x]) push(static_cast<std::uint16_t>(x));
  while (!work.empty()) {
    std::uint16_t x = work.front();
    work.pop_front();
    for (std::size_t r = 0; r < A.size; ++r) {
      push(A.mul[r][x]);
      if (side == Sidedness::two_sided) push(A.mul[x][r]);
    }
    for (std::size_t y = 0; y < A.size; ++y)
      if (in[y]) push(A.add[x][y]);
  }
  return in;
}

inline bool is_ideal(const FiniteAlgebra& A, const Subset& s, Sidedness side) {
  if (!s[0]) return false;
  for (std::size_t x = 0; x < A.size; ++x) {
    if (!s[x]) continue;
    for (std::size_t y = 0; y < A.size; ++y) {
      if (s[y] && !s[A.add[x][y]]) return false;
      if (!s[A.mul[y][x]]) return false;
      if (side == Sidedness::two_sided && !s[A.mul[x][y]]) return false;
    }
  }
  return true;
}

/// Every ideal, found by adjoining one element at a time to known ideals.
inline std::vector<Subset> enumerate_ideals(const FiniteAlgebra& A, Sidedness side) {
  std::set<Subset> seen;
  std::deque<Subset> work;
  Subset zero(A.size, false);
  zero[0] = true;
  seen.insert(zero);
  work.push_back(zero);
  while (!work.empty()) {
    Subset I = work.front();
    work.pop_front();
    for (std::size_t x = 0; x < A.size; ++x) {
      if (I[x]) continue;
      Subset g = I;
      g[x] = true;
      Subset J = ideal_closure(A, g, side);
      if (seen.insert(J).second) work.push_back(J);
    }
  }
  return {seen.begin(), seen.end()};
}

/// Every subset checked directly; feasible for |A| <= 16.
inline std::vector<Subset> enumerate_ideals_exhaustive(const FiniteAlgebra& A, Sidedness side) {
  if (A.size > 16) throw std::invalid_argument("exhaustive subset enumeration needs |A| <= 16");
  std::vector<Subset> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << A.size); ++mask) {
    Subset s(A.size);
    for (std::size_t x = 0; x < A.size; ++x) s[x] = (mask >> x) & 1u;
    if (is_ideal(A, s, side)) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Subset> maximal_proper(const std::vector<Subset>& ideals, std::size_t size) {
  std::vector<Subset> proper, out;
  for (const auto& I : ideals)
    if (detail::popcount(I) < size) proper.push_back(I);
  for (const auto& I : proper) {
    bool maximal = true;
    for (const auto& J : proper)
      if (J != I && detail::subset_of(I, J)) maximal = false;
    if (maximal) out.push_back(I);
  }
  return out;
}

/// The five named subsets of T2(F_p): {0}, rad T2, R1 (a22 = 0),
/// C2 (a11 = 0), T2.
struct T2NamedIdeals {
  Subset zero, rad, r1, c2, all;
  std::vector<Subset> as_list() const { return {zero, rad, r1, c2, all}; }
};

inline T2NamedIdeals t2_named(unsigned p) {
  const std::size_t n = p * p * p;
  T2NamedIdeals s{Subset(n), Subset(n), Subset(n), Subset(n), Subset(n, true)};
  for (std::size_t x = 0; x < n; ++x) {
    unsigned a = x % p, c = static_cast<unsigned>(x / (p * p));
    s.zero[x] = x == 0;
    s.rad[x] = a == 0 && c == 0;
    s.r1[x] = c == 0;
    s.c2[x] = a == 0;
  }
  return s;
}

inline bool same_family(std::vector<Subset> a, std::vector<Subset> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

/// Two-sided ideals of T2(F_p) equal {0, rad, R1, C2, T2}; maximal left
/// ideals equal {R1, C2}; rad is a left ideal strictly inside both.
inline VerificationReport t2_ideal_report(unsigned p) {
  VerificationReport rep;
  rep.suite = "algebra";
  FiniteAlgebra A = t2_over(p);
  T2NamedIdeals named = t2_named(p);
  const std::string F = "F" + std::to_string(p);

  auto two = enumerate_ideals(A, Sidedness::two_sided);
  rep.add("t2_two_sided_ideals_" + F, "the two-sided ideals of T2 are exactly 0, rad T2, R1, C2, T2",
          same_family(two, named.as_list()))
      .witness("found", std::to_string(two.size()));
  if (A.size <= 16) {
    auto exhaustive = enumerate_ideals_exhaustive(A, Sidedness::two_sided);
    rep.add("t2_two_sided_ideals_subsets_" + F, "all 2^|T2| subsets tested for the ideal property",
            same_family(exhaustive, named.as_list()))
        .witness("found", std::to_string(exhaustive.size()));
  }
  auto left = enumerate_ideals(A, Sidedness::left);
  auto maximal = maximal_proper(left, A.size);
  rep.add("t2_maximal_left_ideals_" + F, "R1 and C2 are the only maximal left ideals of T2",
          same_family(maximal, {named.r1, named.c2}))
      .witness("left_ideals", std::to_string(left.size()))
      .witness("maximal", std::to_string(maximal.size()));
  bool rad_left = is_ideal(A, named.rad, Sidedness::left);
  bool rad_inside = detail::subset_of(named.rad, named.r1) && detail::subset_of(named.rad, named.c2) &&
                    named.rad != named.r1 && named.rad != named.c2;
  rep.add("t2_radical_not_maximal_" + F, "rad T2 is a left ideal properly inside R1 and C2, so not maximal",
          rad_left && rad_inside);
  return rep;
}

/// Leibniz rule for A -> strict upper part, and non-innerness into rad T2:
/// no X in rad T2 has D(A) = AX - XA for all A. Over Q this is an
/// inconsistent linear system with a certificate; over F_p the candidates
/// are exhausted. For contrast, the same equation over all of T2 is solvable.
inline VerificationReport derivation_report() {
  VerificationReport rep;
  rep.suite = "algebra";
  auto basis = t2_basis();
  bool leibniz = true;
  for (const auto& a : basis)
    for (const auto& b : basis)
      if (!(strict_upper(a * b) == a * strict_upper(b) + strict_upper(a) * b)) leibniz = false;
  rep.add("derivation_leibniz", "D(AB) = A D(B) + D(A) B on all basis pairs", leibniz).witness("pairs", "9");
  rep.add("derivation_kills_unit", "D(I) = 0", strict_upper(T2Mat::identity()) == T2Mat{});

  // X = (0 x; 0 0): (AX - XA) has (1,2) entry (a11 - a22) x. One row per basis A.
  DenseMatrix sys;
  std::vector<Scalar> rhs;
  for (const auto& a : basis) {
    sys.push_back({a.a11 - a.a22});
    rhs.push_back(strict_upper(a).a12);
  }
  LinearSolveResult q = solve_or_certify(sys, rhs);
  bool certified = false;
  if (q.infeasibility_certificate) {
    const auto& y = *q.infeasibility_certificate;
    Scalar lhs(0), yb(0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      lhs += y[i] * sys[i][0];
      yb += y[i] * rhs[i];
    }
    certified = is_zero(lhs) && yb == 1;
  }
  rep.add("derivation_not_inner_over_Q", "D(A) = AX - XA has no solution X in rad T2 (exact certificate)",
          !q.consistent() && certified);

  for (unsigned p : {2u, 3u}) {
    FiniteAlgebra A = t2_over(p);
    T2NamedIdeals named = t2_named(p);
    auto d = [p](std::size_t x) { return static_cast<std::size_t>(p * ((x / p) % p)); };  // strict upper part
    auto sub = [&](std::size_t x, std::size_t y) {
      std::size_t neg = 0;  // -y
      for (std::size_t z = 0; z < A.size; ++z)
        if (A.add[y][z] == 0) neg = z;
      return static_cast<std::size_t>(A.add[x][neg]);
    };
    std::size_t solutions_rad = 0, solutions_all = 0, candidates = 0;
    for (std::size_t x = 0; x < A.size; ++x) {
      bool works = true;
      for (std::size_t a = 0; a < A.size && works; ++a)
        if (sub(A.mul[a][x], A.mul[x][a]) != d(a)) works = false;
      if (named.rad[x]) {
        ++candidates;
        solutions_rad += works;
      }
      solutions_all += works;
    }
    rep.add("derivation_not_inner_over_F" + std::to_string(p),
            "no X in rad T2 satisfies D(A) = AX - XA for all A (exhaustive)", solutions_rad == 0)
        .witness("candidates", std::to_string(candidates))
        .witness("solutions_in_rad", std::to_string(solutions_rad))
        .witness("solutions_in_T2", std::to_string(solutions_all));
  }
  return rep;
}

struct DirectSumLattice {
  std::size_t summands = 0;
  std::size_t size = 0;  // 2^n subsets plus the zero ideal
  bool linearly_ordered = true;
  std::optional<std::size_t> brute_force_ideals;  // ideals of the quotient algebra, if enumerated
  bool matches_model = true;
};

/// Lattice N -> {(T_jk) : T_jj compact for j not in N} over subsets N of
/// {1..n}, plus {0}. For n <= 2 and blocks of size <= 2 the ideals of the
/// quotient, the matrix algebra direct sum over F2, are enumerated.
inline DirectSumLattice direct_sum_lattice_model(const std::vector<unsigned>& ms) {
  DirectSumLattice r;
  r.summands = ms.size();
  r.size = (std::size_t{1} << ms.size()) + 1;
  // two incomparable subsets exist iff n >= 2
  r.linearly_ordered = ms.size() < 2;
  unsigned bits = 0;
  for (unsigned m : ms) bits += m * m;
  if (!ms.empty() && ms.size() <= 2 && bits <= 8 && *std::max_element(ms.begin(), ms.end()) <= 2) {
    FiniteAlgebra A = matrix_direct_sum_f2(ms);
    auto ideals = enumerate_ideals(A, Sidedness::two_sided);
    r.brute_force_ideals = ideals.size();
    // each ideal must be a product of 0/full summands
    std::size_t products = 0;
    for (const auto& I : ideals) {
      unsigned offset = 0;
      bool product = true;
      for (unsigned m : ms) {
        unsigned mask = ((1u << (m * m)) - 1u) << offset;
        std::size_t hits = 0;
        for (std::size_t x = 0; x < A.size; ++x)
          if (I[x] && (x & ~mask) == 0 && (x & mask) != 0) ++hits;
        if (hits != 0 && hits != (std::size_t{1} << (m * m)) - 1) product = false;
        offset += m * m;
      }
      products += product;
    }
    bool chain = true;
    for (const auto& I : ideals)
      for (const auto& J : ideals)
        if (!detail::subset_of(I, J) && !detail::subset_of(J, I)) chain = false;
    r.matches_model = ideals.size() + 1 == r.size && products == ideals.size() && chain == r.linearly_ordered;
  }
  return r;
}

}  // namespace bdwb

#endif  // BDWB_T2_HPP
