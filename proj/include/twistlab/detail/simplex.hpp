#ifndef TWISTLAB_DETAIL_SIMPLEX_HPP
#define TWISTLAB_DETAIL_SIMPLEX_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace twistlab::detail {

/// Dense primal simplex for  max c.y  s.t.  A y <= b,  y >= 0,  b >= 0.
/// Bland's rule, so it cannot cycle. Sizes here are tiny (the Schreier-dual
/// polytope on <= 16 atoms), a tableau is plenty.
struct LpResult {
  double value = 0.0;
  std::vector<double> y;
};

inline LpResult simplex_maximize(const std::vector<double>& c,
                                 const std::vector<std::vector<double>>& A,
                                 const std::vector<double>& b) {
  const std::size_t n = c.size();
  const std::size_t m = A.size();
  for (double bi : b)
    if (bi < 0.0) throw std::invalid_argument("simplex: requires b >= 0");

  // Tableau rows: m constraint rows + objective row; columns: n structural
  // variables, m slacks, rhs.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<double>> T(m + 1, std::vector<double>(cols, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw std::invalid_argument("simplex: ragged A");
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1.0;
    T[i][cols - 1] = b[i];
  }
  for (std::size_t j = 0; j < n; ++j) T[m][j] = -c[j];

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  const double eps = 1e-11;
  const std::size_t max_pivots = 50 * (n + m + 4);
  for (std::size_t iter = 0; iter < max_pivots; ++iter) {
    // Entering column: Bland (first with negative reduced cost).
    std::size_t pivot_col = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j) {
      if (T[m][j] < -eps) { pivot_col = j; break; }
    }
    if (pivot_col == cols) break;  // optimal

    // Leaving row: minimum ratio, ties by smallest basis index (Bland).
    std::size_t pivot_row = m;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][pivot_col] > eps) {
        double ratio = T[i][cols - 1] / T[i][pivot_col];
        if (ratio < best_ratio - eps ||
            (ratio < best_ratio + eps && (pivot_row == m || basis[i] < basis[pivot_row]))) {
          best_ratio = ratio;
          pivot_row = i;
        }
      }
    }
    if (pivot_row == m)
      throw std::runtime_error("simplex: unbounded program");

    const double p = T[pivot_row][pivot_col];
    for (double& v : T[pivot_row]) v /= p;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == pivot_row) continue;
      const double f = T[i][pivot_col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) T[i][j] -= f * T[pivot_row][j];
    }
    basis[pivot_row] = pivot_col;
  }

  LpResult res;
  res.y.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.y[basis[i]] = T[i][cols - 1];
  res.value = T[m][cols - 1];
  return res;
}

}  // namespace twistlab::detail

#endif  // TWISTLAB_DETAIL_SIMPLEX_HPP
