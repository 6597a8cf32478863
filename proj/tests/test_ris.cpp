#include <bdwb/ris.hpp>

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "space_oracles.hpp"

using namespace bdwb;
using fixtures::q;

namespace {

Scalar least_C(const Space& s, const std::vector<std::vector<Scalar>>& xs, const std::vector<unsigned>& js) {
  auto C = oracle::least_ris_constant(s, xs, js);
  EXPECT_TRUE(C.has_value());
  return C.value_or(Scalar(-1));
}

SparsePoint random_block(const Truncation& t, std::mt19937_64& rng, unsigned lo, unsigned hi) {
  const Space& s = t.space();
  auto ids = s.window_ids(lo - 1, hi);
  SparsePoint a(t.size());
  std::size_t terms = 1 + rng() % 3;
  for (std::size_t k = 0; k < terms; ++k)
    a.set(ids[rng() % ids.size()], q(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 4)));
  if (a.empty()) a.set(ids.front(), q(1));
  return a;
}

}  // namespace

TEST(Ris, CertificateMatchesOracle) {
  Truncation t(fixtures::toy4());
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<SparsePoint> blocks{random_block(t, rng, 1, 2), random_block(t, rng, 3, 3),
                                    random_block(t, rng, 4, 4)};
    BlockSequence xs(t, blocks);
    auto js = greedy_js(xs);
    std::vector<std::vector<Scalar>> pts;
    for (const auto& b : blocks) pts.push_back(oracle::point(t.space(), t.size(), b));
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (Id g = 0; g < t.size(); ++g) ASSERT_EQ(xs.point(i).get(g), pts[i][g]);
    RISResult r = ris_certify(t, xs, js);
    ASSERT_TRUE(r.ok());
    Scalar C = least_C(t.space(), pts, js);
    EXPECT_EQ(r.certificate->C, C);
    EXPECT_TRUE(ris_certify(t, xs, js, C).ok());
    if (sgn(C) > 0) {
      RISResult below = ris_certify(t, xs, js, C * q(99, 100));
      ASSERT_FALSE(below.ok());
      EXPECT_TRUE(below.violation->condition == 1 || below.violation->condition == 3);
    }
  }
}

TEST(Ris, GreedyIndicesGiveLeastConstant) {
  Truncation t(fixtures::toy4());
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SparsePoint> blocks{random_block(t, rng, 1, 2), random_block(t, rng, 3, 4)};
    BlockSequence xs(t, blocks);
    auto greedy = greedy_js(xs);
    Scalar best = ris_certify(t, xs, greedy).certificate->C;
    std::vector<std::vector<Scalar>> pts;
    for (const auto& b : blocks) pts.push_back(oracle::point(t.space(), t.size(), b));
    // every admissible (j_1, j_2) with j_i <= 6
    Scalar least(-1);
    for (unsigned j1 = 1; j1 <= 6; ++j1)
      for (unsigned j2 = j1 + 1; j2 <= 6; ++j2) {
        if (!(xs.range(0).second < j2)) continue;
        Scalar C = least_C(t.space(), pts, {j1, j2});
        if (least < 0 || C < least) least = C;
      }
    EXPECT_EQ(best, least);
  }
}

TEST(Ris, ConditionTwoViolations) {
  Truncation t(fixtures::toy4());
  const Space& s = t.space();
  BlockSequence xs(t, {SparsePoint::unit(s.stage_ids(2)[0], t.size()), SparsePoint::unit(s.stage_ids(3)[0], t.size())});
  RISResult r = ris_certify(t, xs, {1, 2});
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violation->condition, 2);
  EXPECT_EQ(ris_certify(t, xs, {2, 2}).violation->condition, 2);
  EXPECT_TRUE(ris_certify(t, xs, {1, 3}).ok());
  EXPECT_THROW(ris_certify(t, xs, {1}), ShapeError);
  EXPECT_THROW(BlockSequence(t, {SparsePoint::unit(s.stage_ids(3)[0], t.size()),
                                 SparsePoint::unit(s.stage_ids(2)[0], t.size())}),
               ShapeError);
}

TEST(Ris, SingletonConstant) {
  // With j_1 = 1 condition (iii) is empty, so C = ||d_gamma||.
  Truncation t(fixtures::toy4());
  for (Id g = 0; g < t.size(); ++g) {
    BlockSequence xs(t, {SparsePoint::unit(g, t.size())});
    EXPECT_EQ(ris_certify(t, xs, {1}).certificate->C, norm_linf(t.d_vector(g)));
  }
  // A larger j_1 can raise it. On the reference build d_1 is 1 at the base
  // element (index 1) and at most 1/16 on Delta_2 (index 2), so j_1 >= 2
  // gives m_1 * 1 = 4 and the index-2 terms add at most 16 * 1/16 = 1.
  Truncation ref(fixtures::reference());
  BlockSequence one(ref, {SparsePoint::unit(0, ref.size())});
  EXPECT_EQ(ris_certify(ref, one, {1}).certificate->C, 1);
  EXPECT_EQ(ris_certify(ref, one, {2}).certificate->C, 4);
  EXPECT_EQ(ris_certify(ref, one, {3}).certificate->C, 4);
}

TEST(Ris, LocalWeightClassification) {
  Truncation t(fixtures::toy4());
  const Space& s = t.space();
  // The base element, then a weight-index-4 element of stage 4.
  Id base = 0;
  Id late = 0;
  for (Id g : s.stage_ids(4))
    if (s.element(g).weight_index == 4 && s.element(g).kind == ElementKind::type1) late = g;
  ASSERT_NE(late, 0u);
  BlockSequence xs(t, {SparsePoint::unit(base, t.size()), SparsePoint::unit(late, t.size())});
  LocalWeightReport r = local_weight_classify(t, xs);
  ASSERT_NE(r.kind, LocalWeight::neither);
  ASSERT_TRUE(r.ris.has_value());
  EXPECT_TRUE(r.ris->ok());
  EXPECT_EQ(r.js, greedy_js(xs));
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_EQ(r.locsupps[i], local_support(t, xs.d_coords(i)).ids);
}

TEST(Ris, WeightSplit) {
  Truncation t(fixtures::toy5());
  const Space& s = t.space();
  Scalar M = basis_constants(t, 0).M_dual;
  std::mt19937_64 rng(12);
  std::size_t done = 0;
  for (int trial = 0; trial < 80 && done < 30; ++trial) {
    unsigned p = static_cast<unsigned>(rng() % 4) + 1, qq = p + 1 + static_cast<unsigned>(rng() % (5 - p));
    std::vector<Id> pool;
    for (Id g : s.window_ids(p, qq))
      if (s.in_gamma_prime(g)) pool.push_back(g);
    if (pool.empty()) continue;
    SparsePoint a(t.size());
    for (int k = 0; k < 3; ++k) a.set(pool[rng() % pool.size()], q(1 + static_cast<long>(rng() % 3), 2));
    for (unsigned k = 0; k <= 4; ++k) {
      WeightSplit w = weight_split(t, a, k, p, qq, M);
      EXPECT_TRUE(w.reconstructs);
      EXPECT_TRUE(w.in_window_span);
      EXPECT_TRUE(w.regimes_separated);
      EXPECT_TRUE(w.norms_bounded);
      EXPECT_TRUE(k != 0 || w.y.empty());
    }
    ++done;
  }
  EXPECT_GE(done, 20u);
  EXPECT_THROW(weight_split(t, SparsePoint::unit(0, t.size()), 1, 1, 2, M), ShapeError);
  EXPECT_THROW(weight_split(t, SparsePoint(), 1, 2, 2, M), IndexError);
}

TEST(Ris, ExactPairBasics) {
  Truncation t(fixtures::toy4());
  const Space& s = t.space();
  Id eta = 0;
  for (Id g : s.stage_ids(3))
    if (s.element(g).weight_index == 2) eta = g;
  ASSERT_NE(eta, 0u);
  VerificationReport zero = exact_pair_check(t, SparsePoint(t.size()), eta, q(1), 2);
  EXPECT_TRUE(zero.passed());

  // z = d_zeta for zeta in the last stage with weight index 4: coordinate
  // values are 1 at zeta only (nothing depends on the last stage).
  Id zeta = 0;
  for (Id g : s.stage_ids(4))
    if (s.element(g).weight_index == 4) zeta = g;
  ASSERT_NE(zeta, 0u);
  SparsePoint z = t.d_vector(zeta);
  VerificationReport big = exact_pair_check(t, q(3) * z, eta, q(1), 2);
  bool sup_failed = false;
  for (const auto& c : big.checks)
    if (c.name == "sup_norm") sup_failed = c.status == CheckStatus::fail;
  EXPECT_TRUE(sup_failed);
}

TEST(Ris, ExactPairConditionsMatchOracle) {
  Truncation t(fixtures::toy4());
  const Space& s = t.space();
  WeightSequences seq(s.params());
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    SparsePoint z(t.size());
    for (int k = 0; k < 3; ++k)
      z.set(static_cast<Id>(rng() % t.size()), q(static_cast<long>(rng() % 5) - 2, 1 << (rng() % 6)));
    Id eta = static_cast<Id>(rng() % t.size());
    unsigned j = 1 + static_cast<unsigned>(rng() % 4);
    Scalar C = q(1 + static_cast<long>(rng() % 3), 1 + static_cast<long>(rng() % 2));
    VerificationReport rep = exact_pair_check(t, z, eta, C, j);

    std::map<std::string, bool> expect;
    const Scalar mj(seq.m(j));
    bool dual = true;
    for (Id xi = 0; xi < t.size(); ++xi) {
      // <d*_xi, z> = z(xi) - <c*_xi, z>
      Scalar v = z.get(xi);
      for (const auto& [i, a] : s.c_star(xi)) v -= a * z.get(i);
      if (abs(v) > C / mj) dual = false;
    }
    expect["dual_coordinates"] = dual;
    expect["weight_of_eta"] = s.element(eta).weight_index == j;
    expect["sup_norm"] = norm_linf(z) <= C;
    expect["vanishes_at_eta"] = sgn(z.get(eta)) == 0;
    bool weighted = true;
    for (Id xi = 0; xi < t.size(); ++xi) {
      unsigned i = s.element(xi).weight_index;
      if (i == j) continue;
      if (abs(z.get(xi)) > C / Scalar(seq.m(std::min(i, j)))) weighted = false;
    }
    expect["weighted_coordinates"] = weighted;
    ASSERT_EQ(rep.checks.size(), expect.size());
    for (const auto& c : rep.checks) EXPECT_EQ(c.status == CheckStatus::pass, expect.at(c.name)) << c.name;
  }
}
