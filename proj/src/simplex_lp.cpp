#include "simplex_lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpt::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-9;
constexpr int kMaxPivots = 20000;

struct Tableau {
  Eigen::MatrixXd body;      // m x (ncols + 1), last column = rhs
  Eigen::VectorXd cost_row;  // ncols reduced costs (maximization)
  std::vector<int> basis;    // basis[i] = column basic in row i
  int iterations = 0;

  int rows() const { return static_cast<int>(body.rows()); }
  int cols() const { return static_cast<int>(cost_row.size()); }

  void pivot(int prow, int pcol) {
    body.row(prow) /= body(prow, pcol);
    for (int i = 0; i < rows(); ++i) {
      if (i == prow) continue;
      const double f = body(i, pcol);
      if (f != 0.0) body.row(i) -= f * body.row(prow);
    }
    const double cf = cost_row(pcol);
    if (cf != 0.0) {
      cost_row -= cf * body.row(prow).head(cols());
    }
    basis[prow] = pcol;
    ++iterations;
  }

  // Bland's rule: smallest improving column, smallest basic index on ties.
  // `usable(j)` masks out retired (artificial) columns.
  bool step(const std::vector<bool>& usable) {
    int pcol = -1;
    for (int j = 0; j < cols(); ++j) {
      if (usable[j] && cost_row(j) > kCostTol) {
        pcol = j;
        break;
      }
    }
    if (pcol < 0) return false;  // optimal
    int prow = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows(); ++i) {
      const double a = body(i, pcol);
      if (a <= kPivotTol) continue;
      const double ratio = body(i, cols()) / a;
      if (ratio < best_ratio - 1e-12 ||
          (ratio < best_ratio + 1e-12 &&
           (prow < 0 || basis[i] < basis[prow]))) {
        best_ratio = ratio;
        prow = i;
      }
    }
    if (prow < 0) {
      throw std::runtime_error("simplex: unbounded objective");
    }
    pivot(prow, pcol);
    return true;
  }
};

}  // namespace

Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                const Eigen::VectorXd& b,
                const std::vector<bool>& row_is_eq) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n ||
      static_cast<int>(row_is_eq.size()) != m) {
    throw std::invalid_argument("simplex: dimension mismatch");
  }
  if (m > 0 && b.minCoeff() < 0.0) {
    throw std::invalid_argument("simplex: rhs must be non-negative");
  }

  int n_slack = 0;
  for (bool eq : row_is_eq) n_slack += eq ? 0 : 1;
  const int n_art = m - n_slack;  // one artificial per equality row
  const int total = n + n_slack + n_art;

  Tableau t;
  t.body = Eigen::MatrixXd::Zero(m, total + 1);
  t.body.block(0, 0, m, n) = A;
  t.body.col(total) = b;
  t.basis.assign(m, -1);
  std::vector<bool> usable(total, true);
  std::vector<bool> is_art(total, false);

  int slack_col = n, art_col = n + n_slack;
  for (int i = 0; i < m; ++i) {
    if (row_is_eq[i]) {
      t.body(i, art_col) = 1.0;
      is_art[art_col] = true;
      t.basis[i] = art_col++;
    } else {
      t.body(i, slack_col) = 1.0;
      t.basis[i] = slack_col++;
    }
  }

  Result res;
  res.x = Eigen::VectorXd::Zero(n);

  if (n_art > 0) {
    // Phase 1: maximize -sum(artificials); price out the basic artificials.
    t.cost_row = Eigen::VectorXd::Zero(total);
    for (int j = n + n_slack; j < total; ++j) t.cost_row(j) = -1.0;
    for (int i = 0; i < m; ++i) {
      if (is_art[t.basis[i]]) {
        t.cost_row += t.body.row(i).head(total);
      }
    }
    while (t.step(usable) && t.iterations < kMaxPivots) {
    }
    double phase1 = 0.0;
    for (int i = 0; i < m; ++i) {
      if (is_art[t.basis[i]]) phase1 += t.body(i, total);
    }
    if (phase1 > 1e-7 * std::max(1.0, b.lpNorm<Eigen::Infinity>())) {
      res.feasible = false;
      res.iterations = t.iterations;
      return res;
    }
    // Drive basic artificials out (or ignore them on an all-zero row).
    for (int i = 0; i < m; ++i) {
      if (!is_art[t.basis[i]]) continue;
      int j = 0;
      for (; j < n + n_slack; ++j) {
        if (std::abs(t.body(i, j)) > kPivotTol) break;
      }
      if (j < n + n_slack) t.pivot(i, j);
    }
    for (int j = 0; j < total; ++j) {
      if (is_art[j]) usable[j] = false;
    }
  }

  // Phase 2: rebuild reduced costs for the real objective over current basis.
  t.cost_row = Eigen::VectorXd::Zero(total);
  t.cost_row.head(n) = c;
  for (int i = 0; i < m; ++i) {
    const int bj = t.basis[i];
    const double cb = bj < n ? c(bj) : 0.0;
    if (cb != 0.0) t.cost_row -= cb * t.body.row(i).head(total);
  }
  while (t.step(usable) && t.iterations < kMaxPivots) {
  }

  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n) res.x(t.basis[i]) = t.body(i, total);
  }
  res.objective = c.dot(res.x);
  res.iterations = t.iterations;
  res.optimal = t.iterations < kMaxPivots;
  return res;
}

}  // namespace wpt::lp
