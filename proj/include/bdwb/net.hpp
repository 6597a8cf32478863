#ifndef BDWB_NET_HPP
#define BDWB_NET_HPP

#include <bdwb/params.hpp>
#include <bdwb/rational.hpp>
#include <bdwb/sparse.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdwb {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NetError : public std::runtime_error {
 public:
  NetError(const std::string& what, Natural minimal) : std::runtime_error(what), minimal_denominator(std::move(minimal)) {}
  Natural minimal_denominator;
};

/// Adequacy of the (1/D)-grid net on the l1 unit ball over `coordinates`
/// ids: rounding every coordinate to the grid costs at most |S|/(2D) in l1,
/// and the net is accepted when that bound is at most 2^-n.
struct NetCertificate {
  unsigned n = 0;
  std::size_t coordinates = 0;
  Natural denominator;
  Scalar rounding_bound;
  Scalar target;
  bool passes = false;
  Natural minimal_denominator;
};

inline Scalar power_of_two_inverse(unsigned n) {
  Natural den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, n);
  return make_scalar(Natural(1), den);
}

inline NetCertificate certify_net(std::size_t coordinates, const Natural& denominator, unsigned n) {
  NetCertificate c;
  c.n = n;
  c.coordinates = coordinates;
  c.denominator = denominator;
  c.rounding_bound = make_scalar(Natural(static_cast<unsigned long>(coordinates)), 2 * denominator);
  c.target = power_of_two_inverse(n);
  c.passes = c.rounding_bound <= c.target;
  // smallest D with |S| / (2D) <= 2^-n, i.e. D >= |S| 2^(n-1)
  Natural need;
  mpz_ui_pow_ui(need.get_mpz_t(), 2, n);
  need *= static_cast<unsigned long>(coordinates);
  c.minimal_denominator = (need + 1) / 2;
  if (c.minimal_denominator < 1) c.minimal_denominator = 1;
  return c;
}

struct NetOptions {
  SignPolicy signs = SignPolicy::both;
  unsigned max_support = 0;  // 0: unrestricted
  std::size_t budget = 0;    // 0: unrestricted
};

/// All sum a_eta e*_eta over `coordinates` with a_eta in (1/D)Z and
/// sum |a_eta| <= 1. Order: lexicographic over coordinates in the given
/// order, each coefficient running from +1 down to -1; the zero functional is
/// included.
inline std::vector<SparseFunctional> enumerate_net(const std::vector<Id>& coordinates, const Natural& denominator,
                                                   const NetOptions& options = {}, std::size_t universe = 0) {
  if (denominator < 1) throw std::invalid_argument("net denominator must be positive");
  if (!denominator.fits_slong_p()) throw BudgetError("net denominator too large to enumerate");
  const long d = denominator.get_si();
  std::vector<SparseFunctional> out;
  std::vector<long> numerators(coordinates.size(), 0);

  auto emit = [&] {
    if (options.budget != 0 && out.size() >= options.budget)
      throw BudgetError("net enumeration exceeded budget of " + std::to_string(options.budget) + " functionals");
    SparseFunctional f(universe);
    for (std::size_t i = 0; i < coordinates.size(); ++i)
      if (numerators[i] != 0) f.set(coordinates[i], make_scalar(numerators[i], d));
    out.push_back(std::move(f));
  };
  auto recurse = [&](auto&& self, std::size_t i, long remaining, unsigned support) -> void {
    if (i == coordinates.size()) {
      emit();
      return;
    }
    const bool may_add = options.max_support == 0 || support < options.max_support;
    const long hi = may_add ? remaining : 0;
    const long lo = options.signs == SignPolicy::both ? -hi : 0;
    for (long a = hi; a >= lo; --a) {
      numerators[i] = a;
      self(self, i + 1, remaining - (a < 0 ? -a : a), support + (a != 0 ? 1u : 0u));
    }
    numerators[i] = 0;
  };
  recurse(recurse, 0, d, 0);
  return out;
}

}  // namespace bdwb

#endif  // BDWB_NET_HPP
