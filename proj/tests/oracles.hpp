// Brute-force oracles shared by the tests. Nothing here calls into the
// library's solvers.
#ifndef BDWB_TESTS_ORACLES_HPP
#define BDWB_TESTS_ORACLES_HPP

#include <bdwb/rational.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace oracle {

using bdwb::Scalar;
using Dense = std::vector<std::vector<Scalar>>;

// Unique solution of a square system, or nullopt when singular.
inline std::optional<std::vector<Scalar>> solve_square(Dense a, std::vector<Scalar> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      Scalar f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Scalar> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Rank by plain Gaussian elimination.
inline std::size_t rank(Dense a) {
  std::size_t r = 0;
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && sgn(a[p][c]) == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (sgn(a[i][c]) == 0) continue;
      Scalar f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

// Calls `visit` with every k-subset of {0..n-1}.
inline void subsets(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx(k);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      visit(idx);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      idx[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
}

// Vertices of { z : G z <= h } in dimension d (G has d columns).
inline std::vector<std::vector<Scalar>> vertices(const Dense& G, const std::vector<Scalar>& h, std::size_t d) {
  std::vector<std::vector<Scalar>> out;
  subsets(G.size(), d, [&](const std::vector<std::size_t>& rows) {
    Dense a;
    std::vector<Scalar> b;
    for (auto r : rows) {
      a.push_back(G[r]);
      b.push_back(h[r]);
    }
    auto z = solve_square(a, b);
    if (!z) return;
    for (std::size_t r = 0; r < G.size(); ++r) {
      Scalar lhs(0);
      for (std::size_t k = 0; k < d; ++k) lhs += G[r][k] * (*z)[k];
      if (lhs > h[r]) return;
    }
    out.push_back(*z);
  });
  return out;
}

// sup ||M B c||_inf over ||B c||_inf <= 1; B is m x k with independent columns.
inline Scalar opnorm_on_span(const Dense& M, const Dense& B) {
  const std::size_t m = B.size(), k = B[0].size();
  Dense G;
  std::vector<Scalar> h;
  for (std::size_t r = 0; r < m; ++r) {
    G.push_back(B[r]);
    h.push_back(1);
    std::vector<Scalar> neg = B[r];
    for (auto& v : neg) v = -v;
    G.push_back(neg);
    h.push_back(1);
  }
  Scalar best(0);
  for (const auto& c : vertices(G, h, k)) {
    for (std::size_t r = 0; r < M.size(); ++r) {
      Scalar v(0);
      for (std::size_t i = 0; i < m; ++i) {
        Scalar x(0);
        for (std::size_t j = 0; j < k; ++j) x += B[i][j] * c[j];
        v += M[r][i] * x;
      }
      best = std::max(best, Scalar(abs(v)));
    }
  }
  return best;
}

// min_c ||x - B c||_inf, as the least t over vertices of the (c, t) polyhedron.
inline Scalar dist_to_span(const std::vector<Scalar>& x, const Dense& B) {
  const std::size_t m = B.size(), k = B[0].size();
  Dense G;
  std::vector<Scalar> h;
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<Scalar> row(B[r]);
    row.push_back(-1);
    G.push_back(row);  // (Bc)_r - t <= x_r
    h.push_back(x[r]);
    for (std::size_t j = 0; j < k; ++j) row[j] = -row[j];
    G.push_back(row);  // -(Bc)_r - t <= -x_r
    h.push_back(-x[r]);
  }
  std::optional<Scalar> best;
  for (const auto& z : vertices(G, h, k + 1))
    if (!best || z[k] < *best) best = z[k];
  return *best;
}

}  // namespace oracle

#endif
