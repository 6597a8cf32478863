#ifndef BDWB_RATIONAL_HPP
#define BDWB_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bdwb {

/// Exact rational scalar. gmpxx keeps results of arithmetic canonical
/// (lowest terms, positive denominator); values built from raw parts must
/// go through make_scalar.
using Scalar = mpq_class;
using Natural = mpz_class;

/// Element identifier: position in build order (rank, then intra-stage order).
using Id = std::uint32_t;

class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Scalar make_scalar(long num, long den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

inline Scalar make_scalar(const Natural& num, const Natural& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Scalar& q) { return sgn(q) == 0; }

/// "num/den" with the denominator always present, e.g. "-3/4", "2/1", "0/1".
inline std::string to_string(const Scalar& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const Natural& z) { return z.get_str(); }

/// Accepts "num/den" or a bare integer.
inline Scalar parse_scalar(std::string_view text) {
  auto bad = [&] { return FormatError("malformed rational: '" + std::string(text) + "'"); };
  if (text.empty()) throw bad();
  auto slash = text.find('/');
  Natural num, den(1);
  // set_str reports malformed input through its return value.
  if (slash == std::string_view::npos) {
    if (num.set_str(std::string(text), 10) != 0) throw bad();
  } else {
    if (num.set_str(std::string(text.substr(0, slash)), 10) != 0) throw bad();
    if (den.set_str(std::string(text.substr(slash + 1)), 10) != 0) throw bad();
  }
  if (den <= 0) throw bad();
  return make_scalar(num, den);
}

inline Natural parse_natural(std::string_view text) {
  Natural z;
  if (text.empty() || z.set_str(std::string(text), 10) != 0 || z < 0)
    throw FormatError("malformed natural number: '" + std::string(text) + "'");
  return z;
}

}  // namespace bdwb

#endif  // BDWB_RATIONAL_HPP
