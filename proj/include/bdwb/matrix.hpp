#ifndef BDWB_MATRIX_HPP
#define BDWB_MATRIX_HPP

#include <bdwb/rational.hpp>
#include <bdwb/sparse.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace bdwb {

using DenseMatrix = std::vector<std::vector<Scalar>>;

/// Sparse exact matrix with explicit row and column index lists. Storage is
/// column-major, each column keyed by row id.
class RationalMatrix {
 public:
  using Column = std::map<Id, Scalar>;

  RationalMatrix() = default;
  RationalMatrix(std::vector<Id> rows, std::vector<Id> cols)
      : rows_(std::move(rows)), cols_(std::move(cols)), columns_(cols_.size()) {
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!row_pos_.emplace(rows_[i], i).second) throw ShapeError("duplicate row id");
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (!col_pos_.emplace(cols_[j], j).second) throw ShapeError("duplicate column id");
  }

  static RationalMatrix identity(const std::vector<Id>& ids) {
    RationalMatrix m(ids, ids);
    for (Id id : ids) m.set(id, id, Scalar(1));
    return m;
  }

  const std::vector<Id>& rows() const { return rows_; }
  const std::vector<Id>& cols() const { return cols_; }
  std::size_t row_count() const { return rows_.size(); }
  std::size_t col_count() const { return cols_.size(); }

  bool has_row(Id r) const { return row_pos_.count(r) != 0; }
  bool has_col(Id c) const { return col_pos_.count(c) != 0; }
  std::size_t row_position(Id r) const { return lookup(row_pos_, r, "row"); }
  std::size_t col_position(Id c) const { return lookup(col_pos_, c, "column"); }

  Scalar at(Id r, Id c) const {
    const Column& col = columns_[col_position(c)];
    row_position(r);
    auto it = col.find(r);
    return it == col.end() ? Scalar(0) : it->second;
  }

  void set(Id r, Id c, const Scalar& value) {
    row_position(r);
    Column& col = columns_[col_position(c)];
    if (is_zero(value))
      col.erase(r);
    else
      col[r] = value;
  }

  void add(Id r, Id c, const Scalar& value) {
    if (is_zero(value)) return;
    row_position(r);
    Column& col = columns_[col_position(c)];
    auto [it, inserted] = col.try_emplace(r, value);
    if (!inserted) {
      it->second += value;
      if (is_zero(it->second)) col.erase(it);
    }
  }

  const Column& column(Id c) const { return columns_[col_position(c)]; }

  template <typename Tag>
  void set_column(Id c, const SparseVector<Tag>& v) {
    Column& col = columns_[col_position(c)];
    col.clear();
    for (const auto& [r, value] : v) {
      row_position(r);
      col.emplace(r, value);
    }
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& col : columns_) n += col.size();
    return n;
  }

  bool is_zero_matrix() const { return nonzeros() == 0; }

  /// Applies the matrix to a vector indexed by column ids. Coordinates of `x`
  /// outside the column list are an index error.
  template <typename Tag>
  SparseVector<Tag> apply(const SparseVector<Tag>& x, std::size_t universe = 0) const {
    SparseVector<Tag> out(universe);
    for (const auto& [c, xc] : x) {
      const Column& col = columns_[col_position(c)];
      for (const auto& [r, value] : col) out.add(r, value * xc);
    }
    return out;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_.size(); ++j)
      for (const auto& [r, value] : columns_[j]) t.columns_[t.col_pos_.at(r)].emplace(cols_[j], value);
    return t;
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(rows_.size(), std::vector<Scalar>(cols_.size(), Scalar(0)));
    for (std::size_t j = 0; j < cols_.size(); ++j)
      for (const auto& [r, value] : columns_[j]) d[row_pos_.at(r)][j] = value;
    return d;
  }

  /// Restriction to a subset of columns (in the given order).
  RationalMatrix select_columns(const std::vector<Id>& keep) const {
    RationalMatrix out(rows_, keep);
    for (std::size_t j = 0; j < keep.size(); ++j) out.columns_[j] = column(keep[j]);
    return out;
  }

  /// Restriction to a subset of rows; entries in dropped rows are discarded.
  RationalMatrix select_rows(const std::vector<Id>& keep) const {
    RationalMatrix out(keep, cols_);
    for (std::size_t j = 0; j < cols_.size(); ++j)
      for (const auto& [r, value] : columns_[j])
        if (out.has_row(r)) out.columns_[j].emplace(r, value);
    return out;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.columns_ == b.columns_;
  }

  RationalMatrix& operator+=(const RationalMatrix& other) { return accumulate(other, Scalar(1)); }
  RationalMatrix& operator-=(const RationalMatrix& other) { return accumulate(other, Scalar(-1)); }
  RationalMatrix& operator*=(const Scalar& s) {
    for (auto& col : columns_) {
      if (is_zero(s)) {
        col.clear();
      } else {
        for (auto& entry : col) entry.second *= s;
      }
    }
    return *this;
  }

  /// this += factor * other; shapes must agree as id lists.
  RationalMatrix& accumulate(const RationalMatrix& other, const Scalar& factor) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw ShapeError("matrix shape mismatch in sum");
    for (std::size_t j = 0; j < cols_.size(); ++j)
      for (const auto& [r, value] : other.columns_[j]) add(r, cols_[j], factor * value);
    return *this;
  }

  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) { return a += b; }
  friend RationalMatrix operator-(RationalMatrix a, const RationalMatrix& b) { return a -= b; }
  friend RationalMatrix operator*(const Scalar& s, RationalMatrix a) { return a *= s; }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw ShapeError("inner dimensions of product disagree");
    RationalMatrix out(a.rows_, b.cols_);
    for (std::size_t j = 0; j < b.cols_.size(); ++j) {
      Column& target = out.columns_[j];
      for (const auto& [k, bkj] : b.columns_[j]) {
        for (const auto& [r, ark] : a.columns_[a.col_pos_.at(k)]) {
          auto [it, inserted] = target.try_emplace(r, ark * bkj);
          if (!inserted) {
            it->second += ark * bkj;
            if (is_zero(it->second)) target.erase(it);
          }
        }
      }
    }
    return out;
  }

 private:
  static std::size_t lookup(const std::unordered_map<Id, std::size_t>& pos, Id id, const char* what) {
    auto it = pos.find(id);
    if (it == pos.end()) throw IndexError(std::string("undeclared ") + what + " id " + std::to_string(id));
    return it->second;
  }

  std::vector<Id> rows_, cols_;
  std::unordered_map<Id, std::size_t> row_pos_, col_pos_;
  std::vector<Column> columns_;
};

/// Exact l1 -> l1 operator norm: maximum absolute column sum.
inline Scalar opnorm_l1(const RationalMatrix& m) {
  Scalar best(0);
  for (Id c : m.cols()) {
    Scalar sum(0);
    for (const auto& entry : m.column(c)) sum += abs(entry.second);
    if (sum > best) best = sum;
  }
  return best;
}

/// Exact l_inf -> l_inf operator norm on the full coordinate space: maximum
/// absolute row sum.
inline Scalar opnorm_linf_full(const RationalMatrix& m) {
  std::map<Id, Scalar> row_sums;
  for (Id c : m.cols())
    for (const auto& [r, value] : m.column(c)) row_sums[r] += abs(value);
  Scalar best(0);
  for (const auto& entry : row_sums)
    if (entry.second > best) best = entry.second;
  return best;
}

/// Inverse of a lower unitriangular matrix (square, identical row/column
/// lists, unit diagonal, off-diagonal support strictly below the diagonal in
/// list order).
inline RationalMatrix unitriangular_invert(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw ShapeError("unitriangular_invert needs identical row and column lists");
  const auto& ids = m.cols();
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const auto& col = m.column(ids[j]);
    auto diag = col.find(ids[j]);
    if (diag == col.end() || diag->second != 1)
      throw ShapeError("diagonal entry at id " + std::to_string(ids[j]) + " is not 1");
    for (const auto& entry : col)
      if (m.row_position(entry.first) < j)
        throw ShapeError("entry above the diagonal at (" + std::to_string(entry.first) + ", " +
                         std::to_string(ids[j]) + ")");
  }
  RationalMatrix inv(ids, ids);
  const std::size_t n = ids.size();
  std::vector<Scalar> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(x.begin(), x.end(), Scalar(0));
    x[j] = 1;
    // Forward substitution for L x = e_j, one column of L at a time.
    for (std::size_t k = j; k < n; ++k) {
      if (is_zero(x[k])) continue;
      for (const auto& [r, value] : m.column(ids[k])) {
        std::size_t i = m.row_position(r);
        if (i != k) x[i] -= value * x[k];
      }
    }
    for (std::size_t i = j; i < n; ++i)
      if (!is_zero(x[i])) inv.set(ids[i], ids[j], x[i]);
  }
  return inv;
}

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
inline std::vector<std::size_t> row_reduce(DenseMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(a[p][c])) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Scalar inv = 1 / a[r][c];
    for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(a[i][c])) continue;
      Scalar f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(DenseMatrix a) { return row_reduce(a).size(); }

inline std::size_t rank(const RationalMatrix& m) { return rank(m.to_dense()); }

/// Rank of a family of vectors, each a column over the union of supports.
template <typename Tag>
std::size_t rank_of(const std::vector<SparseVector<Tag>>& vectors) {
  std::map<Id, std::size_t> coord;
  for (const auto& v : vectors)
    for (const auto& entry : v) coord.emplace(entry.first, 0);
  std::size_t i = 0;
  for (auto& entry : coord) entry.second = i++;
  DenseMatrix a(coord.size(), std::vector<Scalar>(vectors.size(), Scalar(0)));
  for (std::size_t j = 0; j < vectors.size(); ++j)
    for (const auto& [id, value] : vectors[j]) a[coord[id]][j] = value;
  return rank(std::move(a));
}

/// Either a solution of A x = b, or a certificate y with y^T A = 0 and
/// y^T b = 1 proving inconsistency.
struct LinearSolveResult {
  std::optional<std::vector<Scalar>> solution;
  std::optional<std::vector<Scalar>> infeasibility_certificate;
  bool consistent() const { return solution.has_value(); }
};

inline LinearSolveResult solve_or_certify(const DenseMatrix& a, const std::vector<Scalar>& b) {
  const std::size_t rows = a.size();
  if (b.size() != rows) throw ShapeError("right-hand side length mismatch");
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  // Augment with [A | b | I] so the row operations are tracked.
  DenseMatrix aug(rows, std::vector<Scalar>(cols + 1 + rows, Scalar(0)));
  for (std::size_t i = 0; i < rows; ++i) {
    if (a[i].size() != cols) throw ShapeError("ragged matrix");
    for (std::size_t k = 0; k < cols; ++k) aug[i][k] = a[i][k];
    aug[i][cols] = b[i];
    aug[i][cols + 1 + i] = 1;
  }
  // Pivot only within the A block.
  std::size_t r = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && is_zero(aug[p][c])) ++p;
    if (p == rows) continue;
    std::swap(aug[p], aug[r]);
    Scalar inv = 1 / aug[r][c];
    for (auto& v : aug[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(aug[i][c])) continue;
      Scalar f = aug[i][c];
      for (std::size_t k = 0; k < aug[i].size(); ++k) aug[i][k] -= f * aug[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  LinearSolveResult result;
  for (std::size_t i = r; i < rows; ++i) {
    if (!is_zero(aug[i][cols])) {
      std::vector<Scalar> y(rows);
      for (std::size_t k = 0; k < rows; ++k) y[k] = aug[i][cols + 1 + k] / aug[i][cols];
      result.infeasibility_certificate = std::move(y);
      return result;
    }
  }
  std::vector<Scalar> x(cols, Scalar(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
  result.solution = std::move(x);
  return result;
}

}  // namespace bdwb

#endif  // BDWB_MATRIX_HPP
