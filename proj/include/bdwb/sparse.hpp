#ifndef BDWB_SPARSE_HPP
#define BDWB_SPARSE_HPP

#include <bdwb/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace bdwb {

struct DualTag {};
struct PrimalTag {};

/// Finitely supported exact vector indexed by element ids. Zero
/// coefficients are never stored. `universe` is |Gamma_N| for the truncation
/// the vector lives in (0 when not pinned to one).
template <typename Tag>
class SparseVector {
 public:
  using Storage = std::map<Id, Scalar>;
  using const_iterator = typename Storage::const_iterator;

  SparseVector() = default;
  explicit SparseVector(std::size_t universe) : universe_(universe) {}

  static SparseVector unit(Id id, std::size_t universe = 0) {
    SparseVector v(universe);
    v.set(id, Scalar(1));
    return v;
  }

  std::size_t universe() const { return universe_; }
  void set_universe(std::size_t universe) {
    if (universe != 0 && !entries_.empty() && entries_.rbegin()->first >= universe)
      throw IndexError("vector support exceeds universe of size " + std::to_string(universe));
    universe_ = universe;
  }

  Scalar get(Id id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? Scalar(0) : it->second;
  }

  const Scalar* find(Id id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void set(Id id, const Scalar& value) {
    check_id(id);
    if (is_zero(value))
      entries_.erase(id);
    else
      entries_[id] = value;
  }

  /// this[id] += value
  void add(Id id, const Scalar& value) {
    if (is_zero(value)) return;
    check_id(id);
    auto [it, inserted] = entries_.try_emplace(id, value);
    if (!inserted) {
      it->second += value;
      if (is_zero(it->second)) entries_.erase(it);
    }
  }

  /// this += factor * other
  void add_scaled(const SparseVector& other, const Scalar& factor) {
    if (is_zero(factor)) return;
    for (const auto& [id, value] : other.entries_) add(id, factor * value);
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }

  std::vector<Id> support() const {
    std::vector<Id> ids;
    ids.reserve(entries_.size());
    for (const auto& entry : entries_) ids.push_back(entry.first);
    return ids;
  }

  Id max_id() const { return entries_.rbegin()->first; }
  Id min_id() const { return entries_.begin()->first; }

  template <typename Pred>
  SparseVector restricted(Pred keep) const {
    SparseVector out(universe_);
    for (const auto& [id, value] : entries_)
      if (keep(id)) out.entries_.emplace_hint(out.entries_.end(), id, value);
    return out;
  }

  SparseVector& operator+=(const SparseVector& other) {
    add_scaled(other, Scalar(1));
    return *this;
  }
  SparseVector& operator-=(const SparseVector& other) {
    add_scaled(other, Scalar(-1));
    return *this;
  }
  SparseVector& operator*=(const Scalar& factor) {
    if (is_zero(factor)) {
      entries_.clear();
    } else {
      for (auto& entry : entries_) entry.second *= factor;
    }
    return *this;
  }

  friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
  friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
  friend SparseVector operator*(const Scalar& s, SparseVector a) { return a *= s; }
  friend SparseVector operator-(SparseVector a) { return a *= Scalar(-1); }

  friend bool operator==(const SparseVector& a, const SparseVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  void check_id(Id id) const {
    if (universe_ != 0 && id >= universe_)
      throw IndexError("id " + std::to_string(id) + " outside universe of size " +
                       std::to_string(universe_));
  }

  std::size_t universe_ = 0;
  Storage entries_;
};

/// Element of l1(Gamma_N): e*_gamma, c*_gamma, d*_gamma, b*.
using SparseFunctional = SparseVector<DualTag>;
/// Element of l_inf(Gamma_N): e_gamma, d_gamma, truncated points of X.
using SparsePoint = SparseVector<PrimalTag>;

/// <f, x> = sum_gamma f(gamma) x(gamma).
inline Scalar duality_pair(const SparseFunctional& f, const SparsePoint& x) {
  if (f.universe() != 0 && x.universe() != 0 && f.universe() != x.universe())
    throw IndexError("duality pairing across universes " + std::to_string(f.universe()) +
                     " and " + std::to_string(x.universe()));
  if (f.universe() == 0 && x.universe() != 0 && !f.empty() && f.max_id() >= x.universe())
    throw IndexError("functional support outside the point's universe");
  if (x.universe() == 0 && f.universe() != 0 && !x.empty() && x.max_id() >= f.universe())
    throw IndexError("point support outside the functional's universe");
  Scalar sum(0);
  const bool walk_f = f.size() <= x.size();
  if (walk_f) {
    for (const auto& [id, value] : f)
      if (const Scalar* other = x.find(id)) sum += value * *other;
  } else {
    for (const auto& [id, value] : x)
      if (const Scalar* other = f.find(id)) sum += value * *other;
  }
  return sum;
}

enum class NormKind { l1, linf };

template <typename Tag>
Scalar norm(const SparseVector<Tag>& v, NormKind which) {
  Scalar result(0);
  for (const auto& entry : v) {
    Scalar a = abs(entry.second);
    if (which == NormKind::l1)
      result += a;
    else if (a > result)
      result = a;
  }
  return result;
}

template <typename Tag>
Scalar norm_l1(const SparseVector<Tag>& v) {
  return norm(v, NormKind::l1);
}

template <typename Tag>
Scalar norm_linf(const SparseVector<Tag>& v) {
  return norm(v, NormKind::linf);
}

}  // namespace bdwb

#endif  // BDWB_SPARSE_HPP
