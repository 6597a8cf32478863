// Parameter sets and cached builds shared by the tests.
#ifndef BDWB_TESTS_FIXTURES_HPP
#define BDWB_TESTS_FIXTURES_HPP

#include <bdwb/space.hpp>

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace fixtures {

using namespace bdwb;

inline Scalar q(long n, long d = 1) { return make_scalar(n, d); }

// Strict parameters: m = (4, 16), n = (16, 2^32), D_1 = 2, two stages.
inline Params reference_params() {
  Params p;
  p.m = {Natural(4), Natural(16)};
  p.n = {Natural(16), Natural("4294967296")};
  p.net_policy = NetPolicy::explicit_;
  p.denominators = {Natural(2)};
  p.max_stage = 2;
  return p;
}

inline Params toy_params(unsigned stages, std::vector<long> dens, SignPolicy signs = SignPolicy::nonnegative,
                         unsigned support = 1) {
  Params p;
  p.toy = true;
  p.m = {Natural(4), Natural(16)};
  p.n = {Natural(3)};
  p.net_policy = NetPolicy::explicit_;
  for (long d : dens) p.denominators.push_back(Natural(d));
  p.net_signs = signs;
  p.net_max_support = support;
  p.max_weight_index = 4;
  p.max_stage = stages;
  return p;
}

// Builds are deterministic, so each parameter set is built once per binary.
inline std::shared_ptr<const Space> cached(const std::string& key, const Params& p) {
  static std::map<std::string, std::shared_ptr<const Space>> cache;
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_shared<const Space>(build_space(p))).first;
  return it->second;
}

inline std::shared_ptr<const Space> reference() { return cached("reference", reference_params()); }
// 49 elements over four stages.
inline std::shared_ptr<const Space> toy4() { return cached("toy4", toy_params(4, {1, 1, 1})); }
// 437 elements over five stages.
inline std::shared_ptr<const Space> toy5() { return cached("toy5", toy_params(5, {1, 1, 1, 1})); }

}  // namespace fixtures

#endif
