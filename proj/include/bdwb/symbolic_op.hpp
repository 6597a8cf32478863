#ifndef BDWB_SYMBOLIC_OP_HPP
#define BDWB_SYMBOLIC_OP_HPP

#include <bdwb/fdd.hpp>
#include <bdwb/lp_norms.hpp>
#include <bdwb/matrix.hpp>
#include <bdwb/report.hpp>
#include <bdwb/t2.hpp>

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bdwb {

/// Coordinates for Z_N = X_N + Y_N at a truncation: X_N has the basis
/// d_gamma (gamma in Gamma_N), Y_N the basis d_gamma (gamma in Gamma'_N).
/// On Z_N the Y copy of gamma is numbered y_offset() + gamma.
class ZFrame {
 public:
  explicit ZFrame(std::shared_ptr<const Truncation> t) : t_(std::move(t)) {
    if (!t_->space().has_gamma_prime()) throw StructuralError("Z needs Gamma'");
    x_ids_ = t_->ids();
    y_ids_ = t_->space().gamma_prime_ids(t_->N());
    for (Id g : x_ids_) z_ids_.push_back(g);
    for (Id g : y_ids_) z_ids_.push_back(y_offset() + g);

    // d-basis to e-coordinates on Z_N, and back. Y_N sits inside l_inf(Gamma'_N)
    // because its d-vectors vanish off Gamma'.
    d_to_e_ = RationalMatrix(z_ids_, z_ids_);
    for (Id g : x_ids_) d_to_e_.set_column(g, t_->d_vector(g));
    for (Id g : y_ids_) {
      SparsePoint shifted;
      for (const auto& [r, a] : t_->d_vector(g)) {
        if (!t_->space().in_gamma_prime(r)) throw StructuralError("d-vector of a Gamma' element leaves Gamma'");
        shifted.set(y_offset() + r, a);
      }
      d_to_e_.set_column(y_offset() + g, shifted);
    }
    e_to_d_ = unitriangular_invert(d_to_e_);
  }

  const Truncation& truncation() const { return *t_; }
  std::shared_ptr<const Truncation> shared_truncation() const { return t_; }
  unsigned N() const { return t_->N(); }
  const std::vector<Id>& x_ids() const { return x_ids_; }
  const std::vector<Id>& y_ids() const { return y_ids_; }
  const std::vector<Id>& z_ids() const { return z_ids_; }
  Id y_offset() const { return static_cast<Id>(t_->size()); }
  const RationalMatrix& d_to_e() const { return d_to_e_; }
  const RationalMatrix& e_to_d() const { return e_to_d_; }

  std::vector<Id> x_upto(unsigned n) const { return t_->space().window_ids(0, std::min(n, N())); }
  std::vector<Id> y_upto(unsigned n) const {
    std::vector<Id> out;
    const std::size_t limit = t_->space().gamma_size(std::min(n, N()));
    for (Id g : y_ids_)
      if (g < limit) out.push_back(g);
    return out;
  }

 private:
  std::shared_ptr<const Truncation> t_;
  std::vector<Id> x_ids_, y_ids_, z_ids_;
  RationalMatrix d_to_e_, e_to_d_;
};

/// T = ( a11 I_X + K11   a12 J + K12 )
///     (     K21         a22 I_Y + K22 )
/// with the K blocks over the d-bases of X_N and Y_N.
struct SymbolicOp {
  Scalar a11, a12, a22;
  RationalMatrix K11, K12, K21, K22;
  unsigned N = 0;

  static SymbolicOp zero(const ZFrame& f) {
    SymbolicOp s;
    s.N = f.N();
    s.K11 = RationalMatrix(f.x_ids(), f.x_ids());
    s.K12 = RationalMatrix(f.x_ids(), f.y_ids());
    s.K21 = RationalMatrix(f.y_ids(), f.x_ids());
    s.K22 = RationalMatrix(f.y_ids(), f.y_ids());
    return s;
  }

  bool scalars_zero() const { return is_zero(a11) && is_zero(a12) && is_zero(a22); }
  bool blocks_zero() const {
    return K11.is_zero_matrix() && K12.is_zero_matrix() && K21.is_zero_matrix() && K22.is_zero_matrix();
  }

  friend bool operator==(const SymbolicOp& s, const SymbolicOp& t) {
    return s.N == t.N && s.a11 == t.a11 && s.a12 == t.a12 && s.a22 == t.a22 && s.K11 == t.K11 && s.K12 == t.K12 &&
           s.K21 == t.K21 && s.K22 == t.K22;
  }
  friend SymbolicOp operator+(SymbolicOp s, const SymbolicOp& t) {
    if (s.N != t.N) throw ShapeError("truncation mismatch");
    s.a11 += t.a11, s.a12 += t.a12, s.a22 += t.a22;
    s.K11 += t.K11, s.K12 += t.K12, s.K21 += t.K21, s.K22 += t.K22;
    return s;
  }
  friend SymbolicOp operator-(SymbolicOp s, const SymbolicOp& t) {
    if (s.N != t.N) throw ShapeError("truncation mismatch");
    s.a11 -= t.a11, s.a12 -= t.a12, s.a22 -= t.a22;
    s.K11 -= t.K11, s.K12 -= t.K12, s.K21 -= t.K21, s.K22 -= t.K22;
    return s;
  }
  friend SymbolicOp operator*(const Scalar& c, SymbolicOp s) {
    s.a11 *= c, s.a12 *= c, s.a22 *= c;
    s.K11 *= c, s.K12 *= c, s.K21 *= c, s.K22 *= c;
    return s;
  }
};

namespace detail {

/// J M: the same entries with rows re-declared over the X ids.
inline RationalMatrix j_left(const RationalMatrix& m, const std::vector<Id>& x_ids) {
  RationalMatrix out(x_ids, m.cols());
  for (Id c : m.cols())
    for (const auto& [r, a] : m.column(c)) out.set(r, c, a);
  return out;
}

/// M J: columns restricted to the Y ids.
inline RationalMatrix j_right(const RationalMatrix& m, const std::vector<Id>& y_ids) { return m.select_columns(y_ids); }

/// The inclusion J as a block X <- Y, used when a scalar multiple of J is
/// folded into a finite-rank block.
inline RationalMatrix j_block(const ZFrame& f) {
  RationalMatrix out(f.x_ids(), f.y_ids());
  for (Id g : f.y_ids()) out.set(g, g, Scalar(1));
  return out;
}

}  // namespace detail

/// Exact normal form of S T.
inline SymbolicOp compose(const ZFrame& f, const SymbolicOp& S, const SymbolicOp& T) {
  if (S.N != T.N || S.N != f.N()) throw ShapeError("truncation mismatch in compose");
  using detail::j_left;
  using detail::j_right;
  const auto& X = f.x_ids();
  const auto& Y = f.y_ids();
  SymbolicOp R = SymbolicOp::zero(f);
  R.a11 = S.a11 * T.a11;
  R.a12 = S.a11 * T.a12 + S.a12 * T.a22;
  R.a22 = S.a22 * T.a22;

  R.K11 = S.a11 * T.K11 + T.a11 * S.K11 + S.K11 * T.K11 + S.a12 * j_left(T.K21, X) + S.K12 * T.K21;
  R.K12 = S.a11 * T.K12 + T.a12 * j_right(S.K11, Y) + S.K11 * T.K12 + S.a12 * j_left(T.K22, X) + T.a22 * S.K12 +
          S.K12 * T.K22;
  R.K21 = T.a11 * S.K21 + S.K21 * T.K11 + S.a22 * T.K21 + S.K22 * T.K21;
  R.K22 = T.a12 * j_right(S.K21, Y) + S.K21 * T.K12 + S.a22 * T.K22 + T.a22 * S.K22 + S.K22 * T.K22;
  return R;
}

/// The operator on Z_N in d-coordinates (Y coordinates shifted by y_offset).
inline RationalMatrix materialize(const ZFrame& f, const SymbolicOp& S) {
  const Id off = f.y_offset();
  RationalMatrix M(f.z_ids(), f.z_ids());
  for (Id g : f.x_ids()) M.add(g, g, S.a11);
  for (Id g : f.y_ids()) {
    M.add(g, off + g, S.a12);
    M.add(off + g, off + g, S.a22);
  }
  for (Id c : S.K11.cols())
    for (const auto& [r, a] : S.K11.column(c)) M.add(r, c, a);
  for (Id c : S.K12.cols())
    for (const auto& [r, a] : S.K12.column(c)) M.add(r, off + c, a);
  for (Id c : S.K21.cols())
    for (const auto& [r, a] : S.K21.column(c)) M.add(off + r, c, a);
  for (Id c : S.K22.cols())
    for (const auto& [r, a] : S.K22.column(c)) M.add(off + r, off + c, a);
  return M;
}

/// The operator in e-coordinates of l_inf(Gamma_N) + l_inf(Gamma'_N).
inline RationalMatrix e_coordinates(const ZFrame& f, const RationalMatrix& d_coords) {
  return f.d_to_e() * d_coords * f.e_to_d();
}

/// ||S|| on Z_N with ||(x, y)|| = max(||x||, ||y||). X_N and Y_N are the full
/// coordinate spaces l_inf(Gamma_N) and l_inf(Gamma'_N) at truncation, so the
/// norm is the largest absolute row sum in e-coordinates.
inline Scalar opnorm(const ZFrame& f, const SymbolicOp& S) {
  return opnorm_linf_full(e_coordinates(f, materialize(f, S)));
}

/// The same norm by linear programming over the d-basis of Z_N.
inline Scalar opnorm_lp(const ZFrame& f, const SymbolicOp& S) {
  RationalMatrix E = e_coordinates(f, materialize(f, S));
  std::vector<SparsePoint> basis;
  for (Id z : f.z_ids()) {
    SparsePoint b;
    for (const auto& [r, a] : f.d_to_e().column(z)) b.set(r, a);
    basis.push_back(std::move(b));
  }
  return opnorm_linf_on_subspace(E, basis).value;
}

inline T2Mat phi(const SymbolicOp& S) { return {S.a11, S.a12, S.a22}; }

inline SymbolicOp psi(const ZFrame& f, const T2Mat& A) {
  SymbolicOp S = SymbolicOp::zero(f);
  S.a11 = A.a11;
  S.a12 = A.a12;
  S.a22 = A.a22;
  return S;
}

enum class IdealLabel { ZERO, K, E, M1, M2, B };

inline const char* to_string(IdealLabel l) {
  switch (l) {
    case IdealLabel::ZERO: return "ZERO";
    case IdealLabel::K: return "K";
    case IdealLabel::E: return "E";
    case IdealLabel::M1: return "M1";
    case IdealLabel::M2: return "M2";
    case IdealLabel::B: return "B";
  }
  return "?";
}

/// Inclusion order of the six ideals: ZERO < K < E < M1, M2 < B.
inline bool label_leq(IdealLabel a, IdealLabel b) {
  if (a == b || a == IdealLabel::ZERO || b == IdealLabel::B) return true;
  if (a == IdealLabel::K) return b != IdealLabel::ZERO;
  if (a == IdealLabel::E) return b == IdealLabel::M1 || b == IdealLabel::M2;
  return false;
}

inline IdealLabel label_join(IdealLabel a, IdealLabel b) {
  if (label_leq(a, b)) return b;
  if (label_leq(b, a)) return a;
  return IdealLabel::B;
}

inline IdealLabel label_meet(IdealLabel a, IdealLabel b) {
  if (label_leq(a, b)) return a;
  if (label_leq(b, a)) return b;
  return IdealLabel::E;
}

/// Smallest of the six ideals containing S.
inline IdealLabel ideal_classify(const SymbolicOp& S) {
  if (S.scalars_zero()) return S.blocks_zero() ? IdealLabel::ZERO : IdealLabel::K;
  const bool z11 = is_zero(S.a11), z22 = is_zero(S.a22);
  if (z11 && z22) return IdealLabel::E;
  if (z22) return IdealLabel::M1;
  if (z11) return IdealLabel::M2;
  return IdealLabel::B;
}

/// Label of phi^{-1}[I] for the ideals of T2.
inline IdealLabel preimage_label(const Subset& ideal, const T2NamedIdeals& named) {
  if (ideal == named.zero) return IdealLabel::K;
  if (ideal == named.rad) return IdealLabel::E;
  if (ideal == named.r1) return IdealLabel::M1;
  if (ideal == named.c2) return IdealLabel::M2;
  if (ideal == named.all) return IdealLabel::B;
  throw std::invalid_argument("not an ideal of T2");
}

/// Deterministic random operators over a frame.
class OpSampler {
 public:
  OpSampler(const ZFrame& f, std::uint64_t seed, unsigned max_stage = 0, std::size_t terms = 3)
      : f_(f), rng_(seed), terms_(terms) {
    unsigned n = max_stage == 0 ? f.N() : std::min(max_stage, f.N());
    xs_ = f.x_upto(n);
    ys_ = f.y_upto(n);
  }

  Scalar scalar(bool nonzero = false) {
    for (;;) {
      long num = static_cast<long>(rng_() % 9) - 4;
      long den = 1 + static_cast<long>(rng_() % 4);
      if (num != 0 || !nonzero) return make_scalar(num, den);
    }
  }

  RationalMatrix block(const std::vector<Id>& rows_all, const std::vector<Id>& cols_all, const std::vector<Id>& rows,
                       const std::vector<Id>& cols) {
    RationalMatrix m(rows_all, cols_all);
    if (rows.empty() || cols.empty()) return m;
    for (std::size_t k = 0; k < terms_; ++k) m.add(rows[rng_() % rows.size()], cols[rng_() % cols.size()], scalar());
    return m;
  }

  /// Finite-rank blocks on stages <= max_stage; `label` fixes which scalars may be nonzero.
  SymbolicOp op(IdealLabel label) {
    SymbolicOp S = SymbolicOp::zero(f_);
    if (label != IdealLabel::ZERO) {
      S.K11 = block(f_.x_ids(), f_.x_ids(), xs_, xs_);
      S.K12 = block(f_.x_ids(), f_.y_ids(), xs_, ys_);
      S.K21 = block(f_.y_ids(), f_.x_ids(), ys_, xs_);
      S.K22 = block(f_.y_ids(), f_.y_ids(), ys_, ys_);
      if (S.blocks_zero()) S.K11.add(xs_.front(), xs_.front(), Scalar(1));
    }
    switch (label) {
      case IdealLabel::ZERO:
      case IdealLabel::K:
        break;
      case IdealLabel::E:
        S.a12 = scalar();
        break;
      case IdealLabel::M1:
        S.a11 = scalar(true);
        S.a12 = scalar();
        break;
      case IdealLabel::M2:
        S.a22 = scalar(true);
        S.a12 = scalar();
        break;
      case IdealLabel::B:
        S.a11 = scalar(true);
        S.a12 = scalar();
        S.a22 = scalar(true);
        break;
    }
    return S;
  }

  IdealLabel label() { return static_cast<IdealLabel>(rng_() % 6); }
  std::mt19937_64& rng() { return rng_; }

 private:
  const ZFrame& f_;
  std::mt19937_64 rng_;
  std::size_t terms_;
  std::vector<Id> xs_, ys_;
};

/// phi o psi = id, ker phi = zero-scalar operators, phi and psi multiplicative,
/// compose agrees with the product of materialized matrices, associativity,
/// ideal absorption on random products and sums, and the order isomorphism
/// I -> phi^{-1}[I] from the ideals of T2 (enumerated over F2) to the labels.
inline VerificationReport lattice_check(const ZFrame& f, std::size_t samples = 200, std::uint64_t seed = 7) {
  VerificationReport rep;
  rep.suite = "algebra";
  OpSampler gen(f, seed);

  bool phipsi = true;
  for (const auto& A : t2_basis())
    if (!(phi(psi(f, A)) == A)) phipsi = false;
  for (int k = 0; k < 20; ++k) {
    T2Mat A{gen.scalar(), gen.scalar(), gen.scalar()};
    if (!(phi(psi(f, A)) == A)) phipsi = false;
  }
  rep.add("phi_psi_identity", "phi o psi is the identity on T2", phipsi);

  bool kernel = true;
  for (int k = 0; k < 60; ++k) {
    IdealLabel l = static_cast<IdealLabel>(k % 6);
    SymbolicOp S = gen.op(l);
    bool in_kernel = phi(S) == T2Mat{};
    if (in_kernel != S.scalars_zero()) kernel = false;
  }
  rep.add("kernel_of_phi", "phi(T) = 0 iff every scalar part of T is zero", kernel);

  std::size_t mult_bad = 0, psi_bad = 0, oracle_bad = 0, assoc_bad = 0, absorb_bad = 0, sum_bad = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    SymbolicOp S = gen.op(gen.label()), T = gen.op(gen.label());
    SymbolicOp ST = compose(f, S, T);
    if (!(phi(ST) == phi(S) * phi(T))) ++mult_bad;
    IdealLabel ls = ideal_classify(S), lt = ideal_classify(T), lst = ideal_classify(ST);
    if (!label_leq(lst, ls) || !label_leq(lst, lt)) ++absorb_bad;
    if (!label_leq(ideal_classify(S + T), label_join(ls, lt))) ++sum_bad;
    if (k < 50) {
      T2Mat A{gen.scalar(), gen.scalar(), gen.scalar()}, B{gen.scalar(), gen.scalar(), gen.scalar()};
      if (!(compose(f, psi(f, A), psi(f, B)) == psi(f, A * B))) ++psi_bad;
    }
    if (k < 20) {
      if (!(materialize(f, ST) == materialize(f, S) * materialize(f, T))) ++oracle_bad;
      SymbolicOp U = gen.op(gen.label());
      if (!(compose(f, compose(f, S, T), U) == compose(f, S, compose(f, T, U)))) ++assoc_bad;
    }
  }
  rep.add("phi_multiplicative", "phi(ST) = phi(S) phi(T)", mult_bad == 0).witness("samples", std::to_string(samples));
  rep.add("psi_multiplicative", "psi is a unital algebra homomorphism", psi_bad == 0 && compose(f, psi(f, T2Mat::identity()), psi(f, T2Mat::identity())) == psi(f, T2Mat::identity()));
  rep.add("compose_matches_matrix_product", "normal-form product equals the product of materialized matrices",
          oracle_bad == 0);
  rep.add("compose_associative", "composition is associative", assoc_bad == 0);
  rep.add("ideal_absorption", "label(ST) lies below label(S) and label(T)", absorb_bad == 0)
      .witness("samples", std::to_string(samples))
      .witness("violations", std::to_string(absorb_bad));
  rep.add("ideal_sums", "label(S+T) lies below the join of the labels", sum_bad == 0);

  // Order isomorphism from the ideals of T2 (brute force over F2) onto {K, E, M1, M2, B}.
  FiniteAlgebra A = t2_over(2);
  T2NamedIdeals named = t2_named(2);
  auto ideals = enumerate_ideals(A, Sidedness::two_sided);
  bool iso = ideals.size() == 5;
  std::set<IdealLabel> images;
  for (const auto& I : ideals) {
    IdealLabel li;
    try {
      li = preimage_label(I, named);
    } catch (const std::invalid_argument&) {
      iso = false;
      continue;
    }
    images.insert(li);
    for (const auto& J : ideals) {
      IdealLabel lj = preimage_label(J, named);
      if (detail::subset_of(I, J) != label_leq(li, lj)) iso = false;
    }
  }
  iso = iso && images == std::set<IdealLabel>{IdealLabel::K, IdealLabel::E, IdealLabel::M1, IdealLabel::M2,
                                              IdealLabel::B};
  rep.add("preimage_order_isomorphism", "I -> phi^{-1}[I] maps the ideals of T2 order-isomorphically onto the ideals containing K",
          iso);

  // phi(T) in I  <=>  label(T) <= label(phi^{-1}[I]) on samples, for I over Q
  // described by its defining scalar conditions.
  std::size_t member_bad = 0;
  for (std::size_t k = 0; k < 60; ++k) {
    SymbolicOp S = gen.op(static_cast<IdealLabel>(k % 6));
    T2Mat a = phi(S);
    const bool in_zero = a == T2Mat{}, in_rad = is_zero(a.a11) && is_zero(a.a22), in_r1 = is_zero(a.a22),
               in_c2 = is_zero(a.a11);
    IdealLabel l = ideal_classify(S);
    if (in_zero != label_leq(l, IdealLabel::K) || in_rad != label_leq(l, IdealLabel::E) ||
        in_r1 != label_leq(l, IdealLabel::M1) || in_c2 != label_leq(l, IdealLabel::M2))
      ++member_bad;
  }
  rep.add("preimage_membership", "T lies in phi^{-1}[I] iff phi(T) lies in I", member_bad == 0);
  return rep;
}

/// 0 -> K -> B -> T2 -> 0 with section psi: phi o psi = id, psi unital and
/// multiplicative, ker phi = zero-scalar operators, T - psi(phi(T)) in K.
inline VerificationReport split_exact_check(const ZFrame& f, std::size_t samples = 50, std::uint64_t seed = 11) {
  VerificationReport rep;
  rep.suite = "algebra";
  OpSampler gen(f, seed);
  bool section = true, unital = psi(f, T2Mat::identity()).a11 == 1 && psi(f, T2Mat::identity()).a22 == 1 &&
                                psi(f, T2Mat::identity()).blocks_zero();
  for (const auto& A : t2_basis())
    for (const auto& B : t2_basis()) {
      if (!(phi(psi(f, A)) == A)) section = false;
      if (!(compose(f, psi(f, A), psi(f, B)) == psi(f, A * B))) section = false;
    }
  std::size_t kernel_bad = 0, remainder_bad = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    SymbolicOp T = gen.op(gen.label());
    if ((phi(T) == T2Mat{}) != (ideal_classify(T) == IdealLabel::K || ideal_classify(T) == IdealLabel::ZERO))
      ++kernel_bad;
    if (!label_leq(ideal_classify(T - psi(f, phi(T))), IdealLabel::K)) ++remainder_bad;
  }
  rep.add("split_section", "psi is a unital homomorphism with phi o psi = id", section && unital);
  rep.add("split_kernel", "ker phi consists of the operators with zero scalar parts", kernel_bad == 0)
      .witness("samples", std::to_string(samples));
  rep.add("split_remainder", "T - psi(phi(T)) lies in K", remainder_bad == 0);
  return rep;
}

/// e_n for the three approximating sequences.
enum class AISide { left, right, two_sided };

inline SymbolicOp ai_element(const ZFrame& f, AISide side, unsigned n) {
  SymbolicOp e = SymbolicOp::zero(f);
  auto proj = [&](const std::vector<Id>& all, const std::vector<Id>& upto) {
    RationalMatrix m(all, all);
    for (Id g : upto) m.set(g, g, Scalar(1));
    return m;
  };
  switch (side) {
    case AISide::left:  // diag(I, P_(0,n]|Y)
      e.a11 = 1;
      e.K22 = proj(f.y_ids(), f.y_upto(n));
      break;
    case AISide::right:  // diag(P_(0,n]|X, I)
      e.a22 = 1;
      e.K11 = proj(f.x_ids(), f.x_upto(n));
      break;
    case AISide::two_sided:
      e.K11 = proj(f.x_ids(), f.x_upto(n));
      e.K22 = proj(f.y_ids(), f.y_upto(n));
      break;
  }
  return e;
}

struct AIProfile {
  IdealLabel ideal = IdealLabel::K;
  AISide side = AISide::two_sided;
  std::vector<unsigned> schedule;
  std::vector<std::vector<Scalar>> profiles;  // per sample, per n: ||e_n T - T|| and/or ||T e_n - T||
  std::vector<Scalar> approximant_norms;      // ||e_n|| per n
  Scalar sup_norm;
  bool terminal_zero = false;  // every profile is 0 from the first n >= support stage on
};

/// Profiles of the sequences that approximate the identity in M1 (left),
/// M2 (right) and K (two-sided) for samples classified in that ideal.
inline AIProfile approx_identity_profile(const ZFrame& f, IdealLabel ideal, const std::vector<SymbolicOp>& samples,
                                         const std::vector<unsigned>& schedule, unsigned support_stage) {
  AIProfile r;
  r.ideal = ideal;
  r.schedule = schedule;
  switch (ideal) {
    case IdealLabel::M1: r.side = AISide::left; break;
    case IdealLabel::M2: r.side = AISide::right; break;
    case IdealLabel::K: r.side = AISide::two_sided; break;
    default: throw std::invalid_argument("approximate identities are tabulated for M1, M2 and K");
  }
  for (const auto& T : samples)
    if (!label_leq(ideal_classify(T), ideal))
      throw std::invalid_argument(std::string("sample is not in ") + to_string(ideal));
  r.sup_norm = 0;
  for (unsigned n : schedule) {
    Scalar nrm = opnorm(f, ai_element(f, r.side, n));
    r.approximant_norms.push_back(nrm);
    r.sup_norm = std::max(r.sup_norm, nrm);
  }
  r.terminal_zero = true;
  for (const auto& T : samples) {
    std::vector<Scalar> prof;
    for (unsigned n : schedule) {
      SymbolicOp e = ai_element(f, r.side, n);
      Scalar v(0);
      if (r.side != AISide::right) v = std::max(v, opnorm(f, compose(f, e, T) - T));
      if (r.side != AISide::left) v = std::max(v, opnorm(f, compose(f, T, e) - T));
      if (n >= support_stage && !is_zero(v)) r.terminal_zero = false;
      prof.push_back(v);
    }
    r.profiles.push_back(std::move(prof));
  }
  return r;
}

struct RightAIWitness {
  bool found = false;
  std::optional<Id> gamma;          // y = d_gamma / ||d_gamma||
  Scalar distance;                  // dist(y, image of P_(0,n]) by LP
  Scalar lhs;                       // ||(J - K) y||
  Scalar first_term, second_term;   // ||y - P K y||, ||K y - P K y||
  Scalar lower_bound;               // first_term - second_term
  bool chain_holds = false;         // lhs >= lower_bound
  Scalar best_distance;             // when no witness reaches 1 - eps
  std::string label;
};

/// The chain ||(J - K) y|| >= ||y - P_n K y|| - ||K y - P_n K y|| for a unit
/// y in Y_N far from the image of P_n, against a given K : Y_N -> X_N (in
/// d-coordinates). At truncation J itself has finite rank, so this is a
/// per-witness check of the inequality chain, not a distance claim.
inline RightAIWitness no_right_ai_witness(const ZFrame& f, const RationalMatrix& K, unsigned n, const Scalar& eps) {
  if (!(sgn(eps) > 0 && eps < 1)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (n == 0 || n > f.N()) throw IndexError("n outside 1..N");
  const Truncation& t = f.truncation();
  RightAIWitness w;
  w.label = "per-witness check of the inequality chain at truncation N = " + std::to_string(f.N()) +
            "; not a claim about the distance from J to the compact operators";
  std::vector<SparsePoint> image;
  for (Id g : f.x_upto(n)) image.push_back(t.d_vector(g));
  const std::size_t limit = t.space().gamma_size(n);
  w.best_distance = -1;
  for (Id g : f.y_ids()) {
    if (g < limit) continue;
    SparsePoint y = (1 / norm_linf(t.d_vector(g))) * t.d_vector(g);
    Scalar dist = dist_linf_to_subspace(y, image).value;
    if (dist > w.best_distance) {
      w.best_distance = dist;
      w.gamma = g;
    }
  }
  if (!w.gamma || w.best_distance < 1 - eps) return w;
  w.found = true;
  w.distance = w.best_distance;
  const Id g = *w.gamma;
  const Scalar scale = 1 / norm_linf(t.d_vector(g));
  SparsePoint y = scale * t.d_vector(g);
  // K y and P_n K y from the d-coordinates of K y.
  SparsePoint ky_d = K.apply(SparsePoint::unit(g));
  ky_d *= scale;
  SparsePoint pky_d = ky_d.restricted([&](Id i) { return i < limit; });
  SparsePoint ky = t.from_d_coords(ky_d), pky = t.from_d_coords(pky_d);
  w.lhs = norm_linf(y - ky);
  w.first_term = norm_linf(y - pky);
  w.second_term = norm_linf(ky - pky);
  w.lower_bound = w.first_term - w.second_term;
  w.chain_holds = w.lhs >= w.lower_bound;
  return w;
}

/// K as a block Y_N -> X_N for the proof step with J K22.
inline RationalMatrix j_times(const ZFrame& f, const RationalMatrix& k22) { return detail::j_left(k22, f.x_ids()); }

enum class BlockSpace { X, Y };

/// ||M|| for a block between X_N / Y_N given in d-coordinates.
inline Scalar block_norm(const ZFrame& f, const RationalMatrix& M, BlockSpace rows, BlockSpace cols) {
  SymbolicOp S = SymbolicOp::zero(f);
  if (rows == BlockSpace::X && cols == BlockSpace::X) S.K11 = M;
  if (rows == BlockSpace::X && cols == BlockSpace::Y) S.K12 = M;
  if (rows == BlockSpace::Y && cols == BlockSpace::X) S.K21 = M;
  if (rows == BlockSpace::Y && cols == BlockSpace::Y) S.K22 = M;
  return opnorm(f, S);
}

struct ZeroExtension {
  RationalMatrix extended;     // X_N -> W
  bool restricts_back = false;  // extended J = K
  std::size_t rank_before = 0, rank_after = 0;
  Scalar norm_before, norm_after;
};

/// K : Y_N -> W extended to X_N by zero on the d_gamma with gamma outside Gamma'.
inline ZeroExtension extend_by_zero(const ZFrame& f, const RationalMatrix& K, BlockSpace target) {
  if (K.cols() != f.y_ids()) throw ShapeError("extend_by_zero expects a block with the Y_N d-basis as columns");
  ZeroExtension r;
  r.extended = RationalMatrix(K.rows(), f.x_ids());
  for (Id c : K.cols())
    for (const auto& [row, a] : K.column(c)) r.extended.set(row, c, a);
  r.restricts_back = detail::j_right(r.extended, f.y_ids()) == K;
  r.rank_before = rank(K);
  r.rank_after = rank(r.extended);
  r.norm_before = block_norm(f, K, target, BlockSpace::Y);
  r.norm_after = block_norm(f, r.extended, target, BlockSpace::X);
  return r;
}

struct GeneratorCheck {
  SymbolicOp first_factor;   // T (I 0; 0 0)
  SymbolicOp second_left;    // (a12 I + K~12, 0; T~22, 0)
  bool identity_holds = false;
};

inline SymbolicOp generator_p1(const ZFrame& f) {
  SymbolicOp g = SymbolicOp::zero(f);
  g.a11 = 1;
  return g;
}

inline SymbolicOp generator_j(const ZFrame& f) {
  SymbolicOp g = SymbolicOp::zero(f);
  g.a12 = 1;
  return g;
}

/// T = T (I 0; 0 0) + (a12 I + K~12, 0; T~22, 0)(0 J; 0 0) for T in M1.
inline GeneratorCheck m1_generators_check(const ZFrame& f, const SymbolicOp& T) {
  if (!is_zero(T.a22)) throw std::invalid_argument("operator is not in M1 (a22 != 0)");
  GeneratorCheck r;
  r.first_factor = compose(f, T, generator_p1(f));
  SymbolicOp G = SymbolicOp::zero(f);
  G.a11 = T.a12;
  G.K11 = extend_by_zero(f, T.K12, BlockSpace::X).extended;
  G.K21 = extend_by_zero(f, T.K22, BlockSpace::Y).extended;
  r.second_left = G;
  r.identity_holds = r.first_factor + compose(f, G, generator_j(f)) == T;
  return r;
}

struct ObstructionCertificate {
  Scalar a11, a12;
  DenseMatrix system;  // unknowns (beta, gamma)
  std::vector<Scalar> rhs;
  std::optional<std::vector<Scalar>> certificate;  // y with y^T A = 0, y^T b = 1
  bool unsatisfiable = false;
};

/// For a would-be single generator R with scalar parts (a11, a12): the system
/// beta a11 = 1, beta a12 = 0, gamma a11 = 0, gamma a12 = 1 has no solution.
inline ObstructionCertificate single_generator_obstruction(const Scalar& a11, const Scalar& a12) {
  ObstructionCertificate c;
  c.a11 = a11;
  c.a12 = a12;
  c.system = {{a11, Scalar(0)}, {a12, Scalar(0)}, {Scalar(0), a11}, {Scalar(0), a12}};
  c.rhs = {Scalar(1), Scalar(0), Scalar(0), Scalar(1)};
  LinearSolveResult s = solve_or_certify(c.system, c.rhs);
  c.certificate = s.infeasibility_certificate;
  if (c.certificate) {
    const auto& y = *c.certificate;
    Scalar b(0), col0(0), col1(0);
    for (std::size_t i = 0; i < 4; ++i) {
      b += y[i] * c.rhs[i];
      col0 += y[i] * c.system[i][0];
      col1 += y[i] * c.system[i][1];
    }
    c.unsatisfiable = b == 1 && is_zero(col0) && is_zero(col1);
  }
  return c;
}

inline ObstructionCertificate single_generator_obstruction(const SymbolicOp& R) {
  return single_generator_obstruction(R.a11, R.a12);
}

struct KernelWitness {
  std::size_t operators = 0;
  std::size_t basis_vectors = 0;
  std::size_t nonzero_images = 0;
  bool annihilates() const { return nonzero_images == 0; }
};

/// S_j = (0, beta_j J; 0, gamma_j I_Y) sends every (x, 0) to 0.
inline KernelWitness m2_kernel_witness(const ZFrame& f, const std::vector<SymbolicOp>& S) {
  KernelWitness w;
  w.operators = S.size();
  for (const auto& s : S)
    if (!is_zero(s.a11) || !s.blocks_zero()) throw ShapeError("operator is not of the form (0, bJ; 0, cI)");
  for (const auto& s : S) {
    RationalMatrix M = materialize(f, s);
    for (Id g : f.x_ids()) {
      ++w.basis_vectors;
      if (!M.apply(SparsePoint::unit(g)).empty()) ++w.nonzero_images;
    }
  }
  return w;
}

/// The family S_j = (0, beta_j J; 0, gamma_j I_Y).
inline std::vector<SymbolicOp> m2_kernel_family(const ZFrame& f, const std::vector<std::pair<Scalar, Scalar>>& coeffs) {
  std::vector<SymbolicOp> S;
  for (const auto& [b, c] : coeffs) {
    SymbolicOp s = SymbolicOp::zero(f);
    s.a12 = b;
    s.a22 = c;
    S.push_back(std::move(s));
  }
  return S;
}

}  // namespace bdwb

#endif  // BDWB_SYMBOLIC_OP_HPP
