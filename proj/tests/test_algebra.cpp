#include <bdwb/symbolic_op.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace bdwb;
using fixtures::q;

namespace {

std::shared_ptr<const Truncation> toy4_truncation() {
  static auto t = std::make_shared<const Truncation>(fixtures::toy4());
  return t;
}

const ZFrame& frame() {
  static ZFrame f(toy4_truncation());
  return f;
}

// Upper-triangular 2x2 matrices over Z/p as triples, multiplied by hand.
struct Tri {
  unsigned a, b, c;
  bool operator<(const Tri& o) const { return std::tie(a, b, c) < std::tie(o.a, o.b, o.c); }
  bool operator==(const Tri& o) const { return a == o.a && b == o.b && c == o.c; }
};

Tri mul(const Tri& x, const Tri& y, unsigned p) {
  return {(x.a * y.a) % p, (x.a * y.b + x.b * y.c) % p, (x.c * y.c) % p};
}

std::vector<Tri> all_tri(unsigned p) {
  std::vector<Tri> out;
  for (unsigned c = 0; c < p; ++c)
    for (unsigned b = 0; b < p; ++b)
      for (unsigned a = 0; a < p; ++a) out.push_back({a, b, c});
  return out;
}

// Every subspace of F_p^3 spanned by at most three vectors, kept when it is a
// two-sided (or left) ideal.
std::set<std::set<Tri>> brute_ideals(unsigned p, bool two_sided) {
  auto elems = all_tri(p);
  std::set<std::set<Tri>> out;
  for (const Tri& u : elems)
    for (const Tri& v : elems)
      for (const Tri& w : elems) {
        std::set<Tri> span;
        for (unsigned i = 0; i < p; ++i)
          for (unsigned j = 0; j < p; ++j)
            for (unsigned k = 0; k < p; ++k)
              span.insert({(i * u.a + j * v.a + k * w.a) % p, (i * u.b + j * v.b + k * w.b) % p,
                           (i * u.c + j * v.c + k * w.c) % p});
        bool ok = true;
        for (const Tri& s : span)
          for (const Tri& r : elems) {
            if (!span.count(mul(r, s, p))) ok = false;
            if (two_sided && !span.count(mul(s, r, p))) ok = false;
          }
        if (ok) out.insert(span);
      }
  return out;
}

std::set<Tri> as_tris(const Subset& s, unsigned p) {
  std::set<Tri> out;
  for (std::size_t x = 0; x < s.size(); ++x)
    if (s[x]) out.insert({static_cast<unsigned>(x % p), static_cast<unsigned>((x / p) % p), static_cast<unsigned>(x / (p * p))});
  return out;
}

// e-coordinate matrix of S on l_inf(Gamma_N) + l_inf(Gamma'_N), with the
// change of basis built from elimination-based d-vectors.
oracle::Dense oracle_e_matrix(const ZFrame& f, const SymbolicOp& S) {
  const Space& s = f.truncation().space();
  const std::size_t nx = f.x_ids().size();
  const auto& zs = f.z_ids();
  const std::size_t nz = zs.size();
  std::map<Id, std::size_t> pos;
  for (std::size_t i = 0; i < nz; ++i) pos[zs[i]] = i;
  // d-vectors over Gamma_N
  oracle::Dense A(nx, std::vector<Scalar>(nx, Scalar(0)));
  for (Id g = 0; g < nx; ++g) {
    A[g][g] = 1;
    for (const auto& [i, v] : s.c_star(g)) A[g][i] -= v;
  }
  std::vector<std::vector<Scalar>> d(nx);
  for (Id g = 0; g < nx; ++g) {
    std::vector<Scalar> rhs(nx, Scalar(0));
    rhs[g] = 1;
    d[g] = *oracle::solve_square(A, rhs);
  }
  oracle::Dense D(nz, std::vector<Scalar>(nz, Scalar(0)));
  for (std::size_t c = 0; c < nz; ++c) {
    Id z = zs[c];
    Id g = z < f.y_offset() ? z : z - f.y_offset();
    for (Id r = 0; r < nx; ++r) {
      if (sgn(d[g][r]) == 0) continue;
      Id row = z < f.y_offset() ? r : f.y_offset() + r;
      D[pos.at(row)][c] = d[g][r];
    }
  }
  RationalMatrix Md = materialize(f, S);
  oracle::Dense M(nz, std::vector<Scalar>(nz, Scalar(0)));
  for (std::size_t r = 0; r < nz; ++r)
    for (std::size_t c = 0; c < nz; ++c) M[r][c] = Md.at(zs[r], zs[c]);
  auto times = [&](const oracle::Dense& X, const oracle::Dense& Y) {
    oracle::Dense out(nz, std::vector<Scalar>(nz, Scalar(0)));
    for (std::size_t i = 0; i < nz; ++i)
      for (std::size_t k = 0; k < nz; ++k)
        if (sgn(X[i][k]) != 0)
          for (std::size_t j = 0; j < nz; ++j) out[i][j] += X[i][k] * Y[k][j];
    return out;
  };
  oracle::Dense Dinv(nz, std::vector<Scalar>(nz, Scalar(0)));
  for (std::size_t c = 0; c < nz; ++c) {
    std::vector<Scalar> rhs(nz, Scalar(0));
    rhs[c] = 1;
    auto col = *oracle::solve_square(D, rhs);
    for (std::size_t r = 0; r < nz; ++r) Dinv[r][c] = col[r];
  }
  return times(times(D, M), Dinv);
}

Scalar max_row_sum(const oracle::Dense& M) {
  Scalar best(0);
  for (const auto& row : M) {
    Scalar s(0);
    for (const auto& v : row) s += abs(v);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TEST(T2, IdealsMatchBruteForce) {
  for (unsigned p : {2u, 3u}) {
    FiniteAlgebra A = t2_over(p);
    T2NamedIdeals named = t2_named(p);
    std::set<std::set<Tri>> lib, lib_left;
    for (const auto& I : enumerate_ideals(A, Sidedness::two_sided)) lib.insert(as_tris(I, p));
    for (const auto& I : enumerate_ideals(A, Sidedness::left)) lib_left.insert(as_tris(I, p));
    auto two = brute_ideals(p, true);
    EXPECT_EQ(lib, two) << "p = " << p;
    EXPECT_EQ(two.size(), 5u);
    std::set<std::set<Tri>> named_set;
    for (const auto& I : named.as_list()) named_set.insert(as_tris(I, p));
    EXPECT_EQ(named_set, two);
    EXPECT_EQ(lib_left, brute_ideals(p, false));

    std::vector<Subset> left(enumerate_ideals(A, Sidedness::left));
    auto maximal = maximal_proper(left, A.size);
    EXPECT_TRUE(same_family(maximal, {named.r1, named.c2}));
    EXPECT_TRUE(t2_ideal_report(p).passed());
  }
}

TEST(T2, DerivationAndDirectSums) {
  EXPECT_TRUE(derivation_report().passed());
  // strict_upper is a derivation: D(ab) = D(a) b + a D(b).
  std::mt19937_64 rng(3);
  auto r = [&] { return q(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)); };
  for (int k = 0; k < 50; ++k) {
    T2Mat a{r(), r(), r()}, b{r(), r(), r()};
    EXPECT_EQ(strict_upper(a * b), strict_upper(a) * b + a * strict_upper(b));
  }
  for (const std::vector<unsigned>& ms : {std::vector<unsigned>{1}, {2}, {1, 1}, {1, 2}}) {
    DirectSumLattice d = direct_sum_lattice_model(ms);
    ASSERT_TRUE(d.brute_force_ideals.has_value());
    // ideals of a product of simple algebras: one per subset of summands
    EXPECT_EQ(*d.brute_force_ideals, std::size_t{1} << ms.size());
    EXPECT_TRUE(d.matches_model);
    EXPECT_EQ(d.linearly_ordered, ms.size() == 1);
  }
}

TEST(Algebra, LabelsAndClassification) {
  const ZFrame& f = frame();
  SymbolicOp S = SymbolicOp::zero(f);
  EXPECT_EQ(ideal_classify(S), IdealLabel::ZERO);
  S.K11.set(0, 0, q(1));
  EXPECT_EQ(ideal_classify(S), IdealLabel::K);
  S.a12 = 2;
  EXPECT_EQ(ideal_classify(S), IdealLabel::E);
  S.a11 = 1;
  EXPECT_EQ(ideal_classify(S), IdealLabel::M1);
  S.a22 = 1;
  EXPECT_EQ(ideal_classify(S), IdealLabel::B);
  S.a11 = 0;
  EXPECT_EQ(ideal_classify(S), IdealLabel::M2);

  EXPECT_EQ(label_join(IdealLabel::M1, IdealLabel::M2), IdealLabel::B);
  EXPECT_EQ(label_meet(IdealLabel::M1, IdealLabel::M2), IdealLabel::E);
  EXPECT_FALSE(label_leq(IdealLabel::M1, IdealLabel::M2));
  EXPECT_TRUE(label_leq(IdealLabel::K, IdealLabel::M2));
  EXPECT_EQ(label_join(IdealLabel::K, IdealLabel::E), IdealLabel::E);
}

TEST(Algebra, ComposeAgreesWithDenseProducts) {
  const ZFrame& f = frame();
  OpSampler gen(f, 5, 3);
  const auto& zs = f.z_ids();
  for (int k = 0; k < 15; ++k) {
    SymbolicOp S = gen.op(gen.label()), T = gen.op(gen.label());
    RationalMatrix ms = materialize(f, S), mt = materialize(f, T), mc = materialize(f, compose(f, S, T));
    for (Id r : zs)
      for (Id c : zs) {
        Scalar v(0);
        for (Id m : zs) v += ms.at(r, m) * mt.at(m, c);
        ASSERT_EQ(mc.at(r, c), v);
      }
  }
  SymbolicOp T = gen.op(IdealLabel::B);
  EXPECT_EQ(compose(f, psi(f, T2Mat::identity()), T), T);
  EXPECT_EQ(compose(f, T, psi(f, T2Mat::identity())), T);
}

TEST(Algebra, ScalarPlusFiniteRankEntrywise) {
  // (alpha I + K)(beta I + L) = alpha beta I + alpha L + beta K + K L on X.
  const ZFrame& f = frame();
  OpSampler gen(f, 9, 2);
  for (int k = 0; k < 20; ++k) {
    SymbolicOp S = SymbolicOp::zero(f), T = SymbolicOp::zero(f);
    S.a11 = gen.scalar();
    T.a11 = gen.scalar();
    S.K11 = gen.block(f.x_ids(), f.x_ids(), f.x_upto(2), f.x_upto(2));
    T.K11 = gen.block(f.x_ids(), f.x_ids(), f.x_upto(2), f.x_upto(2));
    SymbolicOp R = compose(f, S, T);
    EXPECT_EQ(R.a11, S.a11 * T.a11);
    for (Id r : f.x_ids())
      for (Id c : f.x_ids()) {
        Scalar kl(0);
        for (Id m : f.x_ids()) kl += S.K11.at(r, m) * T.K11.at(m, c);
        ASSERT_EQ(R.K11.at(r, c), S.a11 * T.K11.at(r, c) + T.a11 * S.K11.at(r, c) + kl);
      }
  }
}

TEST(Algebra, NormsMatchOracle) {
  const ZFrame& f = frame();
  OpSampler gen(f, 13, 2);
  for (int k = 0; k < 6; ++k) {
    SymbolicOp S = gen.op(gen.label());
    EXPECT_EQ(opnorm(f, S), max_row_sum(oracle_e_matrix(f, S)));
  }
  EXPECT_EQ(opnorm(f, generator_j(f)), 1);
  EXPECT_EQ(opnorm(f, psi(f, T2Mat::identity())), 1);
}

TEST(Algebra, LatticeAndSplitChecks) {
  const ZFrame& f = frame();
  VerificationReport l = lattice_check(f, 60);
  for (const auto& c : l.checks) EXPECT_EQ(c.status, CheckStatus::pass) << c.name;
  VerificationReport s = split_exact_check(f);
  for (const auto& c : s.checks) EXPECT_EQ(c.status, CheckStatus::pass) << c.name;
}

TEST(Algebra, ApproximateIdentities) {
  const ZFrame& f = frame();
  OpSampler gen(f, 17, 2);
  Scalar bound = std::max(Scalar(1), basis_constants(f.truncation(), 0).primal_constant);
  for (IdealLabel ideal : {IdealLabel::M1, IdealLabel::M2, IdealLabel::K}) {
    std::vector<SymbolicOp> samples;
    for (int k = 0; k < 50; ++k) samples.push_back(gen.op(ideal));
    AIProfile prof = approx_identity_profile(f, ideal, samples, {1, 2, 3, 4}, 2);
    EXPECT_TRUE(prof.terminal_zero) << to_string(ideal);
    EXPECT_LE(prof.sup_norm, bound);
    for (const auto& p : prof.profiles) EXPECT_EQ(p.back(), 0);
  }
  std::vector<SymbolicOp> wrong{gen.op(IdealLabel::B)};
  EXPECT_THROW(approx_identity_profile(f, IdealLabel::M1, wrong, {1}, 1), std::invalid_argument);
  EXPECT_THROW(approx_identity_profile(f, IdealLabel::E, {}, {1}, 1), std::invalid_argument);
}

TEST(Algebra, NoRightApproximateIdentityWitness) {
  const ZFrame& f = frame();
  const Truncation& t = f.truncation();
  // K = 0: ||J y|| = 1 and the chain is 1 >= 1 - 0.
  RationalMatrix zero(f.x_ids(), f.y_ids());
  RightAIWitness w = no_right_ai_witness(f, zero, 1, q(1, 2));
  ASSERT_TRUE(w.found);
  EXPECT_EQ(w.lhs, 1);
  EXPECT_EQ(w.lower_bound, 1);
  EXPECT_TRUE(w.chain_holds);
  // the LP distance against vertex enumeration
  {
    oracle::Dense B(t.size(), std::vector<Scalar>(1, Scalar(0)));
    for (const auto& [r, a] : t.d_vector(0)) B[r][0] = a;
    std::vector<Scalar> y(t.size(), Scalar(0));
    Scalar scale = 1 / norm_linf(t.d_vector(*w.gamma));
    for (const auto& [r, a] : t.d_vector(*w.gamma)) y[r] = scale * a;
    EXPECT_EQ(w.distance, oracle::dist_to_span(y, B));
  }

  // K = P_n restricted to Y, as a block Y -> X: the witness lies outside
  // Gamma_n, so K y = 0.
  for (unsigned n : {1u, 2u}) {
    RationalMatrix K(f.x_ids(), f.y_ids());
    for (Id g : f.y_upto(n)) K.set(g, g, q(1));
    RightAIWitness v = no_right_ai_witness(f, K, n, q(1, 2));
    ASSERT_TRUE(v.found);
    EXPECT_EQ(v.second_term, 0);
    EXPECT_TRUE(v.chain_holds);
  }

  // random rank-2 K at n = 2
  OpSampler gen(f, 23, 4);
  for (int k = 0; k < 10; ++k) {
    RationalMatrix K(f.x_ids(), f.y_ids());
    for (int r = 0; r < 2; ++r) {
      Id row = f.x_ids()[gen.rng()() % f.x_ids().size()];
      Id col = f.y_ids()[gen.rng()() % f.y_ids().size()];
      K.set(row, col, gen.scalar(true));
    }
    RightAIWitness v = no_right_ai_witness(f, K, 2, q(1, 2));
    ASSERT_TRUE(v.found);
    EXPECT_TRUE(v.chain_holds);
    EXPECT_GE(v.lhs, v.lower_bound);
  }
  EXPECT_THROW(no_right_ai_witness(f, zero, 1, q(1)), std::invalid_argument);
  EXPECT_THROW(no_right_ai_witness(f, zero, 0, q(1, 2)), IndexError);
}

TEST(Algebra, ExtendByZero) {
  const ZFrame& f = frame();
  RationalMatrix zero(f.x_ids(), f.y_ids());
  ZeroExtension z = extend_by_zero(f, zero, BlockSpace::X);
  EXPECT_TRUE(z.extended.is_zero_matrix());
  EXPECT_EQ(z.norm_after, 0);
  OpSampler gen(f, 29, 4);
  for (int k = 0; k < 20; ++k) {
    BlockSpace target = k % 2 ? BlockSpace::X : BlockSpace::Y;
    const auto& rows = target == BlockSpace::X ? f.x_ids() : f.y_ids();
    RationalMatrix K = gen.block(rows, f.y_ids(), rows, f.y_ids());
    ZeroExtension e = extend_by_zero(f, K, target);
    EXPECT_TRUE(e.restricts_back);
    EXPECT_EQ(e.rank_before, e.rank_after);
    // Y_N sits isometrically inside X_N, so restriction cannot raise the norm.
    EXPECT_LE(e.norm_before, e.norm_after);
  }
  EXPECT_THROW(extend_by_zero(f, RationalMatrix(f.x_ids(), f.x_ids()), BlockSpace::X), ShapeError);
}

TEST(Algebra, M1Generators) {
  const ZFrame& f = frame();
  SymbolicOp P = generator_p1(f), J = generator_j(f);
  EXPECT_EQ(compose(f, P, J), J);
  EXPECT_EQ(compose(f, J, P), SymbolicOp::zero(f));
  EXPECT_EQ(compose(f, J, J), SymbolicOp::zero(f));
  OpSampler gen(f, 31, 3);
  for (int k = 0; k < 50; ++k) {
    SymbolicOp T = gen.op(k % 2 ? IdealLabel::M1 : IdealLabel::E);
    GeneratorCheck g = m1_generators_check(f, T);
    EXPECT_TRUE(g.identity_holds);
  }
  EXPECT_THROW(m1_generators_check(f, gen.op(IdealLabel::M2)), std::invalid_argument);
}

TEST(Algebra, SingleGeneratorObstruction) {
  // R = (1, 0): beta = 1 and gamma * 1 = 0 but gamma * 0 = 1 is impossible.
  ObstructionCertificate c = single_generator_obstruction(q(1), q(0));
  ASSERT_TRUE(c.certificate.has_value());
  EXPECT_TRUE(c.unsatisfiable);
  std::mt19937_64 rng(37);
  for (int k = 0; k < 30; ++k) {
    Scalar a11 = q(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
    Scalar a12 = q(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
    ObstructionCertificate o = single_generator_obstruction(a11, a12);
    ASSERT_TRUE(o.certificate.has_value());
    // check the certificate by hand
    const auto& y = *o.certificate;
    EXPECT_EQ(y[0] * a11 + y[1] * a12, 0);
    EXPECT_EQ(y[2] * a11 + y[3] * a12, 0);
    EXPECT_EQ(y[0] + y[3], 1);
  }
}

TEST(Algebra, M2KernelWitness) {
  const ZFrame& f = frame();
  auto family = m2_kernel_family(f, {{q(1), q(0)}, {q(0), q(1)}, {q(2, 3), q(-5)}});
  KernelWitness w = m2_kernel_witness(f, family);
  EXPECT_TRUE(w.annihilates());
  EXPECT_EQ(w.basis_vectors, 3 * f.x_ids().size());
  // (0, bJ; 0, cI)(I 0; 0 0) = 0
  for (const auto& S : family) EXPECT_EQ(compose(f, S, generator_p1(f)), SymbolicOp::zero(f));
  SymbolicOp bad = SymbolicOp::zero(f);
  bad.a11 = 1;
  EXPECT_THROW(m2_kernel_witness(f, {bad}), ShapeError);
}
