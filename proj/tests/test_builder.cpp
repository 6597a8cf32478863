#include <bdwb/serialize.hpp>
#include <bdwb/space.hpp>

#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "space_oracles.hpp"

using namespace bdwb;

namespace {

using fixtures::q;
using fixtures::reference_params;

void expect_matches_oracle(const Space& s) { EXPECT_EQ(oracle::admission_mismatch(s), ""); }

Params toy_params(unsigned stages, std::vector<long> dens, SignPolicy signs, unsigned support) {
  return fixtures::toy_params(stages, std::move(dens), signs, support);
}

}  // namespace

TEST(Params, GrowthConditions) {
  ParamReport ok = validate_params(reference_params());
  EXPECT_TRUE(ok.passed());
  EXPECT_TRUE(ok.all_hold());

  Params bad = reference_params();
  bad.m = {Natural(4), Natural(8)};
  ParamReport strict = validate_params(bad);
  EXPECT_FALSE(strict.passed());
  bad.toy = true;
  ParamReport toy = validate_params(bad);
  EXPECT_TRUE(toy.passed());
  EXPECT_FALSE(toy.warnings.empty());

  Params small = toy_params(2, {1}, SignPolicy::both, 0);
  small.m = {Natural(2), Natural(4)};
  EXPECT_TRUE(validate_params(small).passed());
  EXPECT_NO_THROW(build_space(small));

  Params nonmono = reference_params();
  nonmono.m = {Natural(16), Natural(4)};
  EXPECT_THROW(validate_params(nonmono), ParamError);
  nonmono.toy = true;
  EXPECT_THROW(validate_params(nonmono), ParamError);

  Params invalid = reference_params();
  invalid.m = {Natural(3), Natural(9)};
  invalid.n = {Natural(4)};
  EXPECT_THROW(build_space(invalid), ParamError);
}

TEST(Params, WeightSequencesExtend) {
  Params p = toy_params(2, {1}, SignPolicy::both, 0);
  WeightSequences seq(p);
  EXPECT_EQ(seq.m(3), 256);
  EXPECT_EQ(seq.m(4), 65536);
  // n_2 = m_2^2 (4 n_1)^log2(m_2) = 256 * 12^4
  EXPECT_EQ(seq.n(2), Natural(256) * 20736);
}

TEST(Net, CertificateArithmetic) {
  NetCertificate c = certify_net(1, Natural(1), 1);
  EXPECT_EQ(c.rounding_bound, q(1, 2));
  EXPECT_TRUE(c.passes);
  EXPECT_EQ(c.minimal_denominator, 1);
  NetCertificate d = certify_net(6, Natural(2), 2);
  EXPECT_FALSE(d.passes);
  EXPECT_EQ(d.minimal_denominator, 12);
}

TEST(Net, ReferenceNetsAndGridSample) {
  Space s = build_space(reference_params());
  NetResult two = generate_net(s, 0, 1, Natural(2));
  std::set<Scalar> coeffs;
  for (const auto& f : two.functionals) {
    EXPECT_LE(f.size(), 1u);
    coeffs.insert(f.get(0));
  }
  EXPECT_EQ(two.functionals.size(), 5u);
  EXPECT_EQ(coeffs, (std::set<Scalar>{q(-1), q(-1, 2), q(0), q(1, 2), q(1)}));
  EXPECT_TRUE(two.certificate.passes);

  NetResult one = generate_net(s, 0, 1, Natural(1));
  EXPECT_EQ(one.functionals.size(), 3u);
  EXPECT_TRUE(one.certificate.passes);
  EXPECT_EQ(one.certificate.rounding_bound, one.certificate.target);

  // Every point of a fine grid in [-1, 1] lies within the certified bound of
  // some net element.
  for (const NetResult* r : {&two, &one}) {
    Scalar worst(0);
    for (long t = -256; t <= 256; ++t) {
      Scalar x = q(t, 256);
      Scalar best(2);
      for (const auto& f : r->functionals) best = std::min(best, Scalar(abs(x - f.get(0))));
      worst = std::max(worst, best);
    }
    EXPECT_LE(worst, r->certificate.rounding_bound);
  }
  EXPECT_THROW(generate_net(s, 1, 1), IndexError);
}

TEST(Net, RandomBallPointsInTwoCoordinates) {
  // |S| = 2 with D = 4: bound 1/4. Random points of the l1 ball, nearest net
  // element by brute force.
  std::vector<Id> coords{0, 1};
  auto net = enumerate_net(coords, Natural(4));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    Scalar a = make_scalar(static_cast<long>(rng() % 201) - 100, 100);
    Scalar b = make_scalar(static_cast<long>(rng() % 201) - 100, 100);
    if (abs(a) + abs(b) > 1) continue;
    Scalar best(4);
    for (const auto& f : net) best = std::min(best, Scalar(abs(a - f.get(0)) + abs(b - f.get(1))));
    EXPECT_LE(best, q(1, 4));
  }
}

TEST(Builder, ReferenceConstruction) {
  auto t0 = std::chrono::steady_clock::now();
  Space s = build_space(reference_params());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 1.0);
  ASSERT_EQ(s.stages(), 2u);
  EXPECT_EQ(s.stage_ids(1).size(), 1u);
  EXPECT_EQ(s.stage_ids(2).size(), 5u);
  const AdmissionCounts& ac = s.nets()[0].admitted;
  EXPECT_EQ(ac.type1_even, 5u);
  EXPECT_EQ(ac.type1_odd + ac.type2_even + ac.type2_odd, 0u);
  EXPECT_EQ(s.nets()[0].D_n, 2);
  EXPECT_EQ(s.nets()[0].N_n, 2);

  bool plus = false, minus = false;
  for (Id g : s.stage_ids(2)) {
    const GammaElement& e = s.element(g);
    EXPECT_EQ(e.weight_index, 2u);
    EXPECT_EQ(e.age, 1u);
    // c* = b* / 16
    EXPECT_EQ(s.c_star(g), make_scalar(1, 16) * e.b_star);
    if (e.b_star == SparseFunctional::unit(0)) plus = true;
    if (e.b_star == q(-1) * SparseFunctional::unit(0)) minus = true;
  }
  EXPECT_TRUE(plus && minus);
  EXPECT_EQ(s.beta0(), 1u);
  EXPECT_EQ(s.delta_prime_ids(2), std::vector<Id>{1});
  expect_matches_oracle(s);
}

TEST(Builder, MinimalPolicyOnReference) {
  Params p = reference_params();
  p.net_policy = NetPolicy::minimal;
  p.denominators.clear();
  Space s = build_space(p);
  EXPECT_EQ(s.nets()[0].D_n, 1);
  EXPECT_EQ(s.stage_ids(2).size(), 3u);
}

TEST(Builder, ToyBuildsMatchOracle) {
  expect_matches_oracle(build_space(toy_params(4, {1, 1, 1}, SignPolicy::nonnegative, 1)));
  expect_matches_oracle(build_space(toy_params(4, {1, 1, 1}, SignPolicy::both, 1)));
  expect_matches_oracle(build_space(toy_params(3, {2, 2}, SignPolicy::both, 2)));
}

TEST(Builder, ToyStageFourHasEveryRule) {
  Space s = build_space(toy_params(4, {1, 1, 1}, SignPolicy::nonnegative, 1));
  std::size_t t1odd = 0, t2even = 0;
  for (const auto& ns : s.nets()) {
    t1odd += ns.admitted.type1_odd;
    t2even += ns.admitted.type2_even;
  }
  EXPECT_GT(t1odd, 0u);
  EXPECT_GT(t2even, 0u);
}

TEST(Builder, TypeTwoIdentity) {
  // c* - (b* - P*_{(0,p]} b*) / m_j = e*_xi for every type-2 element.
  Space s = build_space(toy_params(5, {1, 1, 1, 1}, SignPolicy::nonnegative, 1));
  WeightSequences seq(s.params());
  std::size_t seen = 0;
  for (const auto& e : s.elements()) {
    if (e.kind != ElementKind::type2) continue;
    ++seen;
    SparseFunctional tail = e.b_star - s.dual_projection(e.b_star, e.p);
    SparseFunctional lhs = s.c_star(e.id) - make_scalar(Natural(1), seq.m(e.weight_index)) * tail;
    EXPECT_EQ(lhs, SparseFunctional::unit(*e.xi)) << "element " << e.id;
    EXPECT_EQ(e.age, s.element(*e.xi).age + 1);
  }
  EXPECT_GT(seen, 0u);
}

TEST(Builder, SigmaAndStructure) {
  Space s = build_space(toy_params(5, {1, 1, 1, 1}, SignPolicy::nonnegative, 1));
  std::set<std::uint64_t> sig;
  for (const auto& e : s.elements()) {
    EXPECT_GT(e.sigma, e.rank);
    EXPECT_TRUE(sig.insert(e.sigma).second);
    for (const auto& [i, a] : s.c_star(e.id)) EXPECT_LT(s.element(i).rank, e.rank);
  }
}

TEST(Builder, GammaPrimeExamples) {
  Space s = build_space(toy_params(5, {1, 1, 1, 1}, SignPolicy::nonnegative, 1));
  const Id b0 = s.beta0();
  Id zeta = 0;
  for (Id g : s.stage_ids(2))
    if (g != b0) zeta = g;
  ASSERT_NE(zeta, 0u);
  for (unsigned n = 2; n < s.stages(); ++n) {
    bool found_b0 = false, found_zeta = false;
    for (Id g : s.stage_ids(n + 1)) {
      const GammaElement& e = s.element(g);
      if (e.kind != ElementKind::type1 || e.weight_index != 2) continue;
      if (e.b_star == SparseFunctional::unit(b0)) {
        found_b0 = true;
        EXPECT_TRUE(s.in_gamma_prime(g));
      }
      if (e.b_star == SparseFunctional::unit(zeta)) {
        found_zeta = true;
        EXPECT_FALSE(s.in_gamma_prime(g));
      }
    }
    EXPECT_TRUE(found_b0 && found_zeta) << "stage " << n + 1;
    auto ids = s.delta_prime_ids(n + 1);
    EXPECT_FALSE(ids.empty());
    EXPECT_LT(ids.size(), s.stage_ids(n + 1).size());
  }
}

TEST(Builder, NetErrorNamesMinimalDenominator) {
  Params p = reference_params();
  p.max_stage = 3;
  p.denominators = {Natural(2), Natural(2)};
  try {
    build_space(p);
    FAIL() << "expected NetError";
  } catch (const NetError& e) {
    EXPECT_EQ(e.minimal_denominator, 12);
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos);
  }
}

TEST(Builder, BudgetExceeded) {
  Params p = toy_params(5, {1, 1, 1, 1}, SignPolicy::nonnegative, 1);
  p.element_budget = 50;
  try {
    build_space(p);
    FAIL() << "expected BudgetError";
  } catch (const BudgetError& e) {
    EXPECT_NE(std::string(e.what()).find("type1 even"), std::string::npos);
  }
}

TEST(Builder, ExportIsDeterministicAndRoundTrips) {
  Params p = toy_params(4, {1, 1, 1}, SignPolicy::nonnegative, 1);
  std::string a = export_space(build_space(p));
  std::string b = export_space(build_space(p));
  EXPECT_EQ(a, b);
  EXPECT_EQ(export_space(import_space(a)), a);
  std::string tampered = a;
  auto pos = tampered.find("\"1/16\"");
  ASSERT_NE(pos, std::string::npos);
  tampered.replace(pos, 6, "\"1/17\"");
  EXPECT_ANY_THROW(import_space(tampered));
}
