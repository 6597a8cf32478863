#include <bdwb/fdd.hpp>

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "space_oracles.hpp"

using namespace bdwb;
using fixtures::q;

namespace {

using oracle::d_vectors;

// P*_{(0,p]} e*_eta = sum_{gamma in Gamma_p} d_gamma(eta) d*_gamma, as dense
// columns.
oracle::Dense oracle_dual_projection(const Space& s, const std::vector<std::vector<Scalar>>& d, std::size_t gp) {
  const std::size_t size = d.size();
  oracle::Dense cols(size, std::vector<Scalar>(size, Scalar(0)));
  for (std::size_t eta = 0; eta < size; ++eta)
    for (Id g = 0; g < gp; ++g) {
      const Scalar& v = d[g][eta];
      if (sgn(v) == 0) continue;
      cols[eta][g] += v;
      for (const auto& [i, a] : s.c_star(g)) cols[eta][i] -= v * a;
    }
  return cols;
}

Scalar column_norm(const oracle::Dense& cols) {
  Scalar best(0);
  for (const auto& c : cols) {
    Scalar s(0);
    for (const auto& v : c) s += abs(v);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TEST(Fdd, ReferenceDVectorsByHand) {
  Truncation t(fixtures::reference());
  const Space& s = t.space();
  // d_1 (the base element, id 0) has coordinate a_gamma / 16 at gamma in
  // Delta_2, where b*_gamma = a_gamma e*_1.
  SparsePoint expect(t.size());
  expect.set(0, q(1));
  for (Id g : s.stage_ids(2)) expect.set(g, s.element(g).b_star.get(0) / 16);
  EXPECT_EQ(t.d_vector(0), expect);
  for (Id g : s.stage_ids(2)) EXPECT_EQ(t.d_vector(g), SparsePoint::unit(g, t.size()));
}

TEST(Fdd, DVectorsMatchEliminationOracle) {
  for (auto space : {fixtures::reference(), fixtures::toy4()}) {
    Truncation t(space);
    auto d = d_vectors(*space, t.size());
    for (Id g = 0; g < t.size(); ++g)
      for (Id i = 0; i < t.size(); ++i) ASSERT_EQ(t.d_vector(g).get(i), d[g][i]) << "d_" << g << "(" << i << ")";
  }
}

TEST(Fdd, DualityTable) {
  for (auto space : {fixtures::reference(), fixtures::toy4(), fixtures::toy5()}) {
    Truncation t(space);
    EXPECT_EQ(d_star_matrix(t) * d_basis_matrix(t), RationalMatrix::identity(t.ids())) << "size " << t.size();
  }
}

TEST(Fdd, DualProjectionsMatchOracle) {
  Truncation t(fixtures::toy4());
  const Space& s = t.space();
  auto d = d_vectors(s, t.size());
  for (unsigned p = 1; p <= t.N(); ++p) {
    auto table = t.dual_projection_table(p);
    oracle::Dense cols = oracle_dual_projection(s, d, s.gamma_size(p));
    for (Id eta = 0; eta < t.size(); ++eta)
      for (Id i = 0; i < t.size(); ++i) ASSERT_EQ(table[eta].get(i), cols[eta][i]) << "p " << p;
  }
}

TEST(Fdd, ProjectionIdentities) {
  Truncation t(fixtures::toy4());
  const std::size_t N = t.N();
  // P*_{(0,N]} is the identity at truncation N.
  EXPECT_EQ(proj_star_interval(t, 0, N).dual, RationalMatrix::identity(t.ids()));
  for (unsigned p = 0; p < N; ++p)
    for (unsigned r = p + 1; r <= N; ++r) {
      ProjectionPair pp = proj_star_interval(t, p, r);
      EXPECT_EQ(pp.dual * pp.dual, pp.dual) << "(" << p << "," << r << "]";
      // P*_{(p,r]} d*_gamma = d*_gamma inside the window and 0 outside.
      for (Id g = 0; g < t.size(); ++g) {
        SparseFunctional img(t.size());
        for (const auto& [z, a] : t.d_star(g))
          for (const auto& [i, v] : pp.dual.column(z)) img.add(i, a * v);
        bool inside = t.rank(g) > p && t.rank(g) <= r;
        EXPECT_EQ(img, inside ? t.d_star(g) : SparseFunctional(t.size()));
      }
    }
  EXPECT_THROW(proj_star_interval(t, 2, 2), IndexError);
}

TEST(Fdd, ProjectionRankOnStageThree) {
  auto s3 = fixtures::cached("toy3", fixtures::toy_params(3, {1, 1}));
  Truncation t(s3);
  ProjectionPair pp = proj_star_interval(t, 0, 2);
  oracle::Dense dense;
  for (Id r : t.ids()) {
    std::vector<Scalar> row;
    for (Id c : t.ids()) row.push_back(pp.dual.at(r, c));
    dense.push_back(row);
  }
  EXPECT_EQ(oracle::rank(dense), s3->gamma_size(2));
}

TEST(Fdd, ReferenceBasisConstants) {
  Truncation t(fixtures::reference());
  auto d = d_vectors(t.space(), t.size());
  Scalar expect(1);
  for (unsigned p = 1; p <= t.N(); ++p)
    expect = std::max(expect, column_norm(oracle_dual_projection(t.space(), d, t.space().gamma_size(p))));
  BasisReport b = basis_constants(t);
  EXPECT_EQ(expect, 1);
  EXPECT_EQ(b.M_dual, expect);
  EXPECT_TRUE(b.within_two);
  for (std::size_t i = 0; i < b.primal_per_n.size(); ++i) {
    ASSERT_TRUE(b.primal_lp_per_n[i].has_value());
    EXPECT_EQ(*b.primal_lp_per_n[i], b.primal_per_n[i]);
  }
}

TEST(Fdd, ToyBasisConstantsMatchOracle) {
  Truncation t(fixtures::toy4());
  auto d = d_vectors(t.space(), t.size());
  BasisReport b = basis_constants(t);
  for (unsigned p = 1; p <= t.N(); ++p)
    EXPECT_EQ(b.dual_per_n[p - 1], column_norm(oracle_dual_projection(t.space(), d, t.space().gamma_size(p))));
}

TEST(Fdd, ExtensionOperator) {
  Truncation ref(fixtures::reference());
  // i_1(e_1) = d_1
  EXPECT_EQ(ref.extend(SparsePoint::unit(0, ref.size()), 1), ref.d_vector(0));

  Truncation t(fixtures::toy4());
  for (unsigned n = 1; n <= t.N(); ++n) {
    ExtensionReport r = extension_op(t, n);
    EXPECT_TRUE(r.extension_property);
    EXPECT_TRUE(r.left_inequality);
    EXPECT_TRUE(r.bounded_by_M);
    EXPECT_TRUE(r.image_is_d_span);
    // d_gamma vanishes on Gamma_n except at gamma when gamma is in Delta_n.
    for (Id g : t.space().stage_ids(n)) {
      SparsePoint col(t.size());
      for (const auto& [i, v] : r.matrix.column(g)) col.set(i, v);
      EXPECT_EQ(col, t.d_vector(g));
    }
  }
  EXPECT_THROW(extension_op(t, 0), IndexError);
  EXPECT_THROW(t.extend(SparsePoint::unit(t.size() - 1, t.size()), 1), IndexError);
}

TEST(Fdd, LocalSupport) {
  Truncation t(fixtures::toy4());
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    SparsePoint a(t.size());
    unsigned lo = 9, hi = 0;
    for (int k = 0; k < 3; ++k) {
      Id g = static_cast<Id>(rng() % t.size());
      a.set(g, q(1 + static_cast<long>(rng() % 4), 1 + static_cast<long>(rng() % 3)));
      lo = std::min(lo, t.rank(g));
      hi = std::max(hi, t.rank(g));
    }
    LocalSupport ls = local_support(t, a);
    EXPECT_EQ(ls.lo, lo);
    EXPECT_EQ(ls.hi, hi);
    EXPECT_TRUE(ls.reconstructs);
    for (Id i : ls.ids) EXPECT_LE(t.rank(i), hi);
  }
  EXPECT_THROW(local_support(t, SparsePoint(t.size())), std::domain_error);
}

TEST(Fdd, CompactProfiles) {
  Truncation t(fixtures::toy4());
  // T = P_{(0,2]}: finite rank, so ||T - P_{(0,n]} T|| = 0 for n >= 2 and the
  // profile is nonincreasing.
  RationalMatrix T = proj_star_interval(t, 0, 2).primal;
  auto into = compact_approx_profile(t, T, ProfileDirection::into, {1, 2, 3, 4});
  EXPECT_GT(into[0], 0);
  EXPECT_EQ(into[1], 0);
  EXPECT_EQ(into[3], 0);
  auto out = compact_approx_profile(t, T, ProfileDirection::out_of, {2, 4});
  EXPECT_EQ(out[0], 0);
  EXPECT_EQ(out[1], 0);
  // The identity approximates itself only at N.
  auto id = compact_approx_profile(t, RationalMatrix::identity(t.ids()), ProfileDirection::into, {1, 4});
  EXPECT_GT(id[0], 0);
  EXPECT_EQ(id[1], 0);
}

TEST(Fdd, GammaPrimeStructureAtStageFive) {
  Truncation t(fixtures::toy5());
  ASSERT_EQ(t.N(), 5u);
  VerificationReport r = verify_gamma_prime_structure(t);
  for (const auto& c : r.checks) EXPECT_EQ(c.status, CheckStatus::pass) << c.name << ": " << c.detail;
  EXPECT_TRUE(r.passed());
}
