#ifndef BDWB_LP_NORMS_HPP
#define BDWB_LP_NORMS_HPP

#include <bdwb/matrix.hpp>
#include <bdwb/simplex.hpp>
#include <bdwb/sparse.hpp>

#include <map>
#include <vector>

namespace bdwb {

/// Optimum of an l_inf norm problem over span(basis), with the optimizing
/// point and its coordinates in the basis.
struct NormWitness {
  Scalar value;
  SparsePoint point;
  std::vector<Scalar> coefficients;
};

namespace detail {

inline std::vector<Id> union_support(const std::vector<SparsePoint>& vectors) {
  std::map<Id, bool> ids;
  for (const auto& v : vectors)
    for (const auto& entry : v) ids.emplace(entry.first, true);
  std::vector<Id> out;
  for (const auto& entry : ids) out.push_back(entry.first);
  return out;
}

inline void require_independent(const std::vector<SparsePoint>& basis) {
  if (rank_of(basis) != basis.size()) throw RankError("basis vectors are linearly dependent");
}

inline SparsePoint combine(const std::vector<SparsePoint>& basis, const std::vector<Scalar>& c,
                           std::size_t universe) {
  SparsePoint x(universe);
  for (std::size_t k = 0; k < basis.size(); ++k) x.add_scaled(basis[k], c[k]);
  return x;
}

}  // namespace detail

/// sup { ||M x||_inf : x in span(basis), ||x||_inf <= 1 }, solved exactly as
/// one linear program per output coordinate. The unit ball of the span is
/// centrally symmetric, so maximizing +(Mx)_r suffices for each row r.
inline NormWitness opnorm_linf_on_subspace(const RationalMatrix& m, const std::vector<SparsePoint>& basis) {
  detail::require_independent(basis);
  const std::size_t universe = basis.empty() ? 0 : basis.front().universe();
  NormWitness best{Scalar(0), SparsePoint(universe), std::vector<Scalar>(basis.size(), Scalar(0))};
  if (basis.empty()) return best;

  const std::vector<Id> coords = detail::union_support(basis);
  std::vector<SparsePoint> images;
  images.reserve(basis.size());
  for (const auto& b : basis) images.push_back(m.apply(b));
  std::map<Id, std::vector<Scalar>> image_rows;
  for (std::size_t k = 0; k < images.size(); ++k)
    for (const auto& [r, value] : images[k]) {
      auto& row = image_rows[r];
      if (row.empty()) row.assign(basis.size(), Scalar(0));
      row[k] = value;
    }

  LinearProgram lp;
  lp.sense = Sense::maximize;
  lp.bounds.assign(basis.size(), VariableBounds::free());
  for (Id i : coords) {
    std::vector<Scalar> row(basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) row[k] = basis[k].get(i);
    lp.constraints.push_back({row, Relation::less_equal, Scalar(1)});
    for (auto& v : row) v = -v;
    lp.constraints.push_back({std::move(row), Relation::less_equal, Scalar(1)});
  }
  for (const auto& [r, objective] : image_rows) {
    lp.objective = objective;
    LpSolution s = solve(lp);
    if (s.status != LpStatus::optimal) throw std::logic_error("norm LP not optimal on a bounded polytope");
    if (s.value > best.value) {
      best.value = s.value;
      best.coefficients = s.x;
    }
  }
  best.point = detail::combine(basis, best.coefficients, universe);
  return best;
}

/// min { ||x - v||_inf : v in span(basis) } with the minimizing v.
inline NormWitness dist_linf_to_subspace(const SparsePoint& x, const std::vector<SparsePoint>& basis) {
  detail::require_independent(basis);
  if (basis.empty()) return {norm_linf(x), SparsePoint(x.universe()), {}};
  std::vector<SparsePoint> all = basis;
  all.push_back(x);
  const std::vector<Id> coords = detail::union_support(all);
  const std::size_t k = basis.size();

  // Variables: c_1..c_k free, t >= 0. Minimize t.
  LinearProgram lp;
  lp.sense = Sense::minimize;
  lp.objective.assign(k + 1, Scalar(0));
  lp.objective[k] = 1;
  lp.bounds.assign(k, VariableBounds::free());
  lp.bounds.push_back(VariableBounds{});
  for (Id i : coords) {
    std::vector<Scalar> row(k + 1);
    for (std::size_t j = 0; j < k; ++j) row[j] = basis[j].get(i);
    row[k] = -1;
    // (Bc)_i - t <= x_i
    lp.constraints.push_back({row, Relation::less_equal, x.get(i)});
    for (std::size_t j = 0; j < k; ++j) row[j] = -row[j];
    // -(Bc)_i - t <= -x_i
    lp.constraints.push_back({std::move(row), Relation::less_equal, -x.get(i)});
  }
  LpSolution s = solve(lp);
  if (s.status != LpStatus::optimal) throw std::logic_error("distance LP not optimal");
  std::vector<Scalar> c(s.x.begin(), s.x.begin() + static_cast<std::ptrdiff_t>(k));
  return {s.value, detail::combine(basis, c, x.universe()), c};
}

}  // namespace bdwb

#endif  // BDWB_LP_NORMS_HPP
