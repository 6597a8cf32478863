#ifndef BDWB_PARAMS_HPP
#define BDWB_PARAMS_HPP

#include <bdwb/rational.hpp>

#include <gmp.h>

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdwb {

class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How the net denominators D_n (and hence N_n) are chosen.
enum class NetPolicy {
  minimal,    // smallest D_n whose adequacy certificate passes
  factorial,  // D_n = N_n!, N_n minimal with a passing certificate
  explicit_,  // D_n read from Params::denominators
};

enum class SignPolicy { both, nonnegative };

struct Params {
  std::vector<Natural> m;  // weights m_1, m_2, ...; missing terms follow m_{j+1} = m_j^2
  std::vector<Natural> n;  // ages n_1, n_2, ...; missing terms follow the minimal growth rule
  NetPolicy net_policy = NetPolicy::minimal;
  std::vector<Natural> denominators;  // D_1, D_2, ... for NetPolicy::explicit_
  unsigned max_stage = 2;
  bool toy = false;
  std::size_t beta0_index = 0;  // position of beta_0 inside Delta_2
  unsigned sigma_stride = 1;    // sigma values: running max + stride, + 2 stride, ...
  std::size_t element_budget = 200000;

  // Net restrictions admitted in toy mode only.
  SignPolicy net_signs = SignPolicy::both;
  unsigned net_max_support = 0;   // 0: unrestricted
  unsigned max_weight_index = 0;  // 0: unrestricted

  bool restricts_nets() const {
    return net_signs != SignPolicy::both || net_max_support != 0 || max_weight_index != 0;
  }
};

/// Lazily extended (m_j) and (n_j). Indices are 1-based as in the recursion.
class WeightSequences {
 public:
  static constexpr std::size_t kMaxBits = std::size_t{1} << 22;

  explicit WeightSequences(const Params& p) : m_(p.m), n_(p.n) {
    if (m_.empty()) throw ParamError("the weight sequence m needs at least one term");
    if (n_.empty()) n_.push_back(m_[0] * m_[0]);
  }

  const Natural& m(unsigned j) const {
    if (j == 0) throw ParamError("weight index 0 is not defined");
    std::lock_guard lock(mutex_);
    while (m_.size() < j) m_.push_back(m_.back() * m_.back());
    return m_[j - 1];
  }

  const Natural& n(unsigned j) const {
    if (j == 0) throw ParamError("age index 0 is not defined");
    std::lock_guard lock(mutex_);
    while (n_.size() < j) {
      unsigned next = static_cast<unsigned>(n_.size()) + 1;
      while (m_.size() < next) m_.push_back(m_.back() * m_.back());
      const Natural& mj = m_[next - 1];
      // ceil(log2 m) as the exponent keeps the value on the admissible side.
      std::size_t exponent = mpz_sizeinbase(mj.get_mpz_t(), 2);
      if (mpz_popcount(mj.get_mpz_t()) == 1) exponent -= 1;
      Natural base = 4 * n_.back();
      std::size_t bits = mpz_sizeinbase(base.get_mpz_t(), 2) * exponent;
      if (bits > kMaxBits)
        throw ParamError("n_" + std::to_string(next) + " from the growth rule exceeds " +
                         std::to_string(kMaxBits) + " bits; supply it explicitly");
      Natural power;
      mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), exponent);
      n_.push_back(mj * mj * power);
    }
    return n_[j - 1];
  }

  std::size_t given_m() const { return m_.size(); }

 private:
  mutable std::mutex mutex_;
  mutable std::vector<Natural> m_;
  mutable std::vector<Natural> n_;
};

struct ParamCheck {
  std::string condition;  // e.g. "m_1 >= 4"
  std::string lhs, rhs;   // exact values
  bool holds = false;
};

struct ParamReport {
  bool strict = true;
  std::vector<ParamCheck> checks;
  std::vector<std::string> warnings;

  bool all_hold() const {
    for (const auto& c : checks)
      if (!c.holds) return false;
    return true;
  }
  /// Strict mode passes only when every growth condition holds; toy mode
  /// always passes and records failures as warnings.
  bool passed() const { return !strict || all_hold(); }
};

namespace detail {

/// log2 of a positive integer to double precision.
inline double log2_of(const Natural& z) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

/// Decides n >= m^2 (4 nprev)^(log2 m) exactly when m is a power of two and
/// by a guarded floating comparison otherwise.
inline bool age_growth_holds(const Natural& n, const Natural& m, const Natural& nprev, std::string& rhs) {
  Natural base = 4 * nprev;
  if (mpz_popcount(m.get_mpz_t()) == 1) {
    unsigned long e = mpz_sizeinbase(m.get_mpz_t(), 2) - 1;
    if (mpz_sizeinbase(base.get_mpz_t(), 2) * e < 4096) {
      Natural power;
      mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), e);
      Natural bound = m * m * power;
      rhs = bound.get_str();
      return n >= bound;
    }
    rhs = "2^" + std::to_string(2 * e + e * (mpz_sizeinbase(base.get_mpz_t(), 2) - 1)) + "+";
  } else {
    rhs = "m^2 (4 n_prev)^log2(m)";
  }
  double lhs_log = log2_of(n);
  double rhs_log = 2 * log2_of(m) + log2_of(m) * log2_of(base);
  return lhs_log >= rhs_log * (1 + 1e-12);
}

}  // namespace detail

/// Checks the growth conditions on (m_j), (n_j) over the supplied prefix.
/// Non-monotone m or m_j < 2 is a hard error in either mode.
inline ParamReport validate_params(const Params& p) {
  if (p.m.empty()) throw ParamError("the weight sequence m needs at least one term");
  for (std::size_t j = 0; j < p.m.size(); ++j) {
    if (p.m[j] < 2) throw ParamError("m_" + std::to_string(j + 1) + " must be at least 2");
    if (j > 0 && p.m[j] <= p.m[j - 1])
      throw ParamError("m must be strictly increasing (m_" + std::to_string(j + 1) + " <= m_" +
                       std::to_string(j) + ")");
  }
  for (std::size_t j = 0; j < p.n.size(); ++j)
    if (p.n[j] < 1) throw ParamError("n_" + std::to_string(j + 1) + " must be positive");
  if (p.max_stage < 1) throw ParamError("max_stage must be at least 1");
  if (p.sigma_stride < 1) throw ParamError("sigma_stride must be at least 1");
  if (p.net_policy == NetPolicy::explicit_ && p.denominators.size() + 1 < p.max_stage)
    throw ParamError("explicit net policy needs D_n for n = 1.." + std::to_string(p.max_stage - 1));
  for (const auto& d : p.denominators)
    if (d < 1) throw ParamError("net denominators must be positive");

  ParamReport report;
  report.strict = !p.toy;
  if (!p.toy && p.restricts_nets())
    throw ParamError("net restrictions (signs, support, weight index) require toy mode");

  WeightSequences seq(p);
  const Natural& m1 = p.m[0];
  const Natural& n1 = seq.n(1);
  report.checks.push_back({"m_1 >= 4", m1.get_str(), "4", m1 >= 4});
  report.checks.push_back({"n_1 >= m_1^2", n1.get_str(), Natural(m1 * m1).get_str(), n1 >= m1 * m1});
  for (std::size_t j = 1; j < p.m.size(); ++j) {
    const Natural& mj = p.m[j - 1];
    const Natural& mnext = p.m[j];
    std::string idx = std::to_string(j + 1), prev = std::to_string(j);
    report.checks.push_back({"m_" + idx + " >= m_" + prev + "^2", mnext.get_str(), Natural(mj * mj).get_str(),
                             mnext >= mj * mj});
    if (j < p.n.size()) {
      std::string rhs;
      bool ok = detail::age_growth_holds(p.n[j], mnext, p.n[j - 1], rhs);
      report.checks.push_back(
          {"n_" + idx + " >= m_" + idx + "^2 (4 n_" + prev + ")^log2(m_" + idx + ")", p.n[j].get_str(), rhs, ok});
    }
  }
  if (p.toy)
    for (const auto& c : report.checks)
      if (!c.holds) report.warnings.push_back("toy parameters violate " + c.condition);
  return report;
}

}  // namespace bdwb

#endif  // BDWB_PARAMS_HPP
