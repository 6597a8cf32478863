#ifndef BDWB_SIMPLEX_HPP
#define BDWB_SIMPLEX_HPP

#include <bdwb/rational.hpp>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdwb {

enum class Relation { less_equal, greater_equal, equal };
enum class Sense { maximize, minimize };

struct LinearConstraint {
  std::vector<Scalar> coeffs;
  Relation relation = Relation::less_equal;
  Scalar rhs;
};

/// Bounds of one variable; `lower` defaults to 0, nullopt means unbounded.
struct VariableBounds {
  std::optional<Scalar> lower = Scalar(0);
  std::optional<Scalar> upper;

  static VariableBounds free() { return {std::nullopt, std::nullopt}; }
};

struct LinearProgram {
  Sense sense = Sense::maximize;
  std::vector<Scalar> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<VariableBounds> bounds;  // empty: every variable nonnegative

  std::size_t variable_count() const { return objective.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Scalar value;
  std::vector<Scalar> x;
  std::size_t pivots = 0;
};

namespace detail {

/// Dense simplex tableau in canonical form, minimizing `cost . z` over
/// z >= 0 with rows `a z = rhs`. Bland's rule throughout.
class Tableau {
 public:
  Tableau(std::vector<std::vector<Scalar>> rows, std::vector<Scalar> rhs, std::vector<std::size_t> basis)
      : a_(std::move(rows)), rhs_(std::move(rhs)), basis_(std::move(basis)) {}

  std::size_t rows() const { return a_.size(); }
  std::size_t cols() const { return a_.empty() ? 0 : a_[0].size(); }
  const std::vector<std::size_t>& basis() const { return basis_; }
  std::size_t pivots() const { return pivots_; }

  /// Returns false if the objective is unbounded below.
  bool minimize(const std::vector<Scalar>& cost, const std::vector<bool>& allowed) {
    const std::size_t m = rows(), n = cols();
    std::vector<Scalar> reduced(n);
    for (;;) {
      for (std::size_t j = 0; j < n; ++j) {
        reduced[j] = cost[j];
        for (std::size_t i = 0; i < m; ++i)
          if (!is_zero(a_[i][j])) reduced[j] -= cost[basis_[i]] * a_[i][j];
      }
      std::size_t entering = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (allowed[j] && sgn(reduced[j]) < 0) {
          entering = j;
          break;
        }
      }
      if (entering == n) return true;
      std::size_t leaving = m;
      Scalar best_ratio;
      for (std::size_t i = 0; i < m; ++i) {
        if (sgn(a_[i][entering]) <= 0) continue;
        Scalar ratio = rhs_[i] / a_[i][entering];
        if (leaving == m || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving == m) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    Scalar inv = 1 / a_[r][c];
    for (auto& v : a_[r]) v *= inv;
    rhs_[r] *= inv;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r || is_zero(a_[i][c])) continue;
      Scalar f = a_[i][c];
      for (std::size_t k = 0; k < cols(); ++k)
        if (!is_zero(a_[r][k])) a_[i][k] -= f * a_[r][k];
      rhs_[i] -= f * rhs_[r];
    }
    basis_[r] = c;
    ++pivots_;
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  const Scalar& entry(std::size_t i, std::size_t j) const { return a_[i][j]; }
  const Scalar& rhs(std::size_t i) const { return rhs_[i]; }

  std::vector<Scalar> solution() const {
    std::vector<Scalar> z(cols(), Scalar(0));
    for (std::size_t i = 0; i < rows(); ++i) z[basis_[i]] = rhs_[i];
    return z;
  }

 private:
  std::vector<std::vector<Scalar>> a_;
  std::vector<Scalar> rhs_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace detail

/// Exact two-phase primal simplex with Bland's anti-cycling rule.
inline LpSolution solve(const LinearProgram& lp) {
  const std::size_t nvars = lp.variable_count();
  std::vector<VariableBounds> bounds = lp.bounds;
  if (bounds.empty()) bounds.assign(nvars, VariableBounds{});
  if (bounds.size() != nvars) throw ShapeError("bounds/objective length mismatch");

  // x_i = offset_i + sum_k map[i][k] * y_k with y >= 0.
  struct Term {
    std::size_t y;
    int sign;
  };
  std::vector<Scalar> offset(nvars, Scalar(0));
  std::vector<std::vector<Term>> terms(nvars);
  std::size_t ny = 0;
  std::vector<LinearConstraint> rows;
  for (std::size_t i = 0; i < nvars; ++i) {
    const auto& b = bounds[i];
    if (b.lower && b.upper && *b.upper < *b.lower) {
      LpSolution s;
      s.status = LpStatus::infeasible;
      return s;
    }
    if (b.lower) {
      offset[i] = *b.lower;
      terms[i].push_back({ny++, +1});
    } else if (b.upper) {
      offset[i] = *b.upper;
      terms[i].push_back({ny++, -1});
    } else {
      terms[i].push_back({ny++, +1});
      terms[i].push_back({ny++, -1});
    }
  }
  auto lift = [&](const std::vector<Scalar>& coeffs, Scalar& constant) {
    std::vector<Scalar> out(ny, Scalar(0));
    for (std::size_t i = 0; i < nvars; ++i) {
      if (is_zero(coeffs[i])) continue;
      constant += coeffs[i] * offset[i];
      for (const Term& t : terms[i]) out[t.y] += t.sign * coeffs[i];
    }
    return out;
  };
  for (const auto& c : lp.constraints) {
    if (c.coeffs.size() != nvars) throw ShapeError("constraint length mismatch");
    Scalar constant(0);
    LinearConstraint lifted{lift(c.coeffs, constant), c.relation, c.rhs};
    lifted.rhs -= constant;
    rows.push_back(std::move(lifted));
  }
  for (std::size_t i = 0; i < nvars; ++i) {
    const auto& b = bounds[i];
    if (b.lower && b.upper) {
      std::vector<Scalar> coeffs(ny, Scalar(0));
      coeffs[terms[i][0].y] = 1;
      rows.push_back({std::move(coeffs), Relation::less_equal, *b.upper - *b.lower});
    }
  }
  for (auto& r : rows) {
    if (sgn(r.rhs) < 0) {
      for (auto& v : r.coeffs) v = -v;
      r.rhs = -r.rhs;
      if (r.relation == Relation::less_equal)
        r.relation = Relation::greater_equal;
      else if (r.relation == Relation::greater_equal)
        r.relation = Relation::less_equal;
    }
  }

  // Column layout: y | slack/surplus | artificial.
  const std::size_t m = rows.size();
  std::size_t nslack = 0, nart = 0;
  for (const auto& r : rows) {
    if (r.relation != Relation::equal) ++nslack;
    if (r.relation != Relation::less_equal) ++nart;
  }
  const std::size_t ncols = ny + nslack + nart;
  std::vector<std::vector<Scalar>> a(m, std::vector<Scalar>(ncols, Scalar(0)));
  std::vector<Scalar> rhs(m);
  std::vector<std::size_t> basis(m);
  std::size_t next_slack = ny, next_art = ny + nslack;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < ny; ++k) a[i][k] = rows[i].coeffs[k];
    rhs[i] = rows[i].rhs;
    switch (rows[i].relation) {
      case Relation::less_equal:
        a[i][next_slack] = 1;
        basis[i] = next_slack++;
        break;
      case Relation::greater_equal:
        a[i][next_slack++] = -1;
        a[i][next_art] = 1;
        basis[i] = next_art++;
        break;
      case Relation::equal:
        a[i][next_art] = 1;
        basis[i] = next_art++;
        break;
    }
  }
  detail::Tableau tab(std::move(a), std::move(rhs), std::move(basis));
  const std::size_t first_art = ny + nslack;

  if (nart > 0) {
    std::vector<Scalar> phase1(ncols, Scalar(0));
    for (std::size_t j = first_art; j < ncols; ++j) phase1[j] = 1;
    tab.minimize(phase1, std::vector<bool>(ncols, true));
    Scalar infeasibility(0);
    for (std::size_t i = 0; i < tab.rows(); ++i)
      if (tab.basis()[i] >= first_art) infeasibility += tab.rhs(i);
    if (sgn(infeasibility) > 0) {
      LpSolution s;
      s.status = LpStatus::infeasible;
      s.pivots = tab.pivots();
      return s;
    }
    // Drive zero-valued artificials out of the basis, dropping redundant rows.
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < first_art) {
        ++i;
        continue;
      }
      std::size_t col = first_art;
      for (std::size_t j = 0; j < first_art; ++j)
        if (!is_zero(tab.entry(i, j))) {
          col = j;
          break;
        }
      if (col == first_art) {
        tab.drop_row(i);
      } else {
        tab.pivot(i, col);
        ++i;
      }
    }
  }

  std::vector<Scalar> cost(ncols, Scalar(0));
  Scalar objective_constant(0);
  std::vector<Scalar> lifted_obj = lift(lp.objective, objective_constant);
  const int flip = lp.sense == Sense::maximize ? -1 : 1;
  for (std::size_t k = 0; k < ny; ++k) cost[k] = flip * lifted_obj[k];
  std::vector<bool> allowed(ncols, true);
  for (std::size_t j = first_art; j < ncols; ++j) allowed[j] = false;

  LpSolution result;
  if (!tab.minimize(cost, allowed)) {
    result.status = LpStatus::unbounded;
    result.pivots = tab.pivots();
    return result;
  }
  std::vector<Scalar> z = tab.solution();
  result.status = LpStatus::optimal;
  result.x.assign(nvars, Scalar(0));
  for (std::size_t i = 0; i < nvars; ++i) {
    result.x[i] = offset[i];
    for (const Term& t : terms[i]) result.x[i] += t.sign * z[t.y];
  }
  result.value = 0;
  for (std::size_t i = 0; i < nvars; ++i) result.value += lp.objective[i] * result.x[i];
  result.pivots = tab.pivots();
  return result;
}

}  // namespace bdwb

#endif  // BDWB_SIMPLEX_HPP
