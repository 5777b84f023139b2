#include "dws/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "dws/errors.hpp"

namespace dws {

namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = std::size_t{1} << 16;
constexpr std::size_t kRowBlock = 64;

void check_len(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw InputError(std::string(what) + ": length " + std::to_string(got) +
                     " does not match " + std::to_string(want));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> col_major)
    : rows_(rows), cols_(cols), data_(std::move(col_major)) {
  check_len(data_.size(), rows * cols, "DenseMatrix data");
}

DenseMatrix DenseMatrix::from_row_major(std::size_t rows, std::size_t cols,
                                        std::span<const double> row_major) {
  check_len(row_major.size(), rows * cols, "DenseMatrix row-major data");
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = row_major[i * cols + j];
  return m;
}

DenseMatrix DenseMatrix::columns(std::span<const std::size_t> idx) const {
  DenseMatrix out(rows_, idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) {
    if (idx[c] >= cols_)
      throw InputError("column index " + std::to_string(idx[c]) + " out of range");
    auto src = col(idx[c]);
    std::copy(src.begin(), src.end(), out.col(c).begin());
  }
  return out;
}

Vec matvec(const DenseMatrix& a, std::span<const double> x) {
  check_len(x.size(), a.cols(), "matvec x");
  require_finite(x, "matvec x");
  const std::size_t k = a.rows(), n = a.cols();
  Vec y(k, 0.0);
  const auto nblocks = static_cast<std::int64_t>((k + kRowBlock - 1) / kRowBlock);
#pragma omp parallel for schedule(static) if (k * n >= kParallelWork)
  for (std::int64_t blk = 0; blk < nblocks; ++blk) {
    const std::size_t i0 = static_cast<std::size_t>(blk) * kRowBlock;
    const std::size_t i1 = std::min(k, i0 + kRowBlock);
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = x[j];
      const double* cj = a.col(j).data();
      for (std::size_t i = i0; i < i1; ++i) y[i] += cj[i] * xj;
    }
  }
  return y;
}

Vec matvec_t(const DenseMatrix& a, std::span<const double> y) {
  check_len(y.size(), a.rows(), "matvec_t y");
  const std::size_t k = a.rows(), n = a.cols();
  Vec out(n, 0.0);
  const auto nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (k * n >= kParallelWork)
  for (std::int64_t j = 0; j < nn; ++j) {
    const double* cj = a.col(static_cast<std::size_t>(j)).data();
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += cj[i] * y[i];
    out[static_cast<std::size_t>(j)] = s;
  }
  return out;
}

Vec matvec_support(const DenseMatrix& a, std::span<const double> x,
                   std::span<const std::size_t> supp) {
  check_len(x.size(), a.cols(), "matvec_support x");
  for (auto j : supp)
    if (j >= a.cols()) throw InputError("support index " + std::to_string(j) + " out of range");
  const std::size_t k = a.rows();
  Vec y(k, 0.0);
  const auto nblocks = static_cast<std::int64_t>((k + kRowBlock - 1) / kRowBlock);
#pragma omp parallel for schedule(static) if (k * supp.size() >= kParallelWork)
  for (std::int64_t blk = 0; blk < nblocks; ++blk) {
    const std::size_t i0 = static_cast<std::size_t>(blk) * kRowBlock;
    const std::size_t i1 = std::min(k, i0 + kRowBlock);
    for (auto j : supp) {
      const double xj = x[j];
      const double* cj = a.col(j).data();
      for (std::size_t i = i0; i < i1; ++i) y[i] += cj[i] * xj;
    }
  }
  return y;
}

Vec gradient(const DenseMatrix& a, std::span<const double> atb, std::span<const double> x,
             std::span<const std::size_t> supp) {
  check_len(atb.size(), a.cols(), "gradient atb");
  require_finite(x, "gradient x");
  Vec ax = matvec_support(a, x, supp);
  Vec g = matvec_t(a, ax);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] -= atb[j];
  return g;
}

double objective_from_residual(std::span<const double> residual, double eta,
                               std::span<const double> x) {
  double rr = 0.0;
  for (double r : residual) rr += r * r;
  return 0.5 * rr + eta * norm1(x);
}

double objective(const DenseMatrix& a, std::span<const double> b, double eta,
                 std::span<const double> x) {
  check_len(b.size(), a.rows(), "objective b");
  check_len(x.size(), a.cols(), "objective x");
  require_finite(x, "objective x");
  Vec r = matvec_support(a, x, support(x));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return objective_from_residual(r, eta, x);
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_len(b.size(), a.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

IndexList support(std::span<const double> x) {
  IndexList s;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) s.push_back(i);
  return s;
}

Vec gather(std::span<const double> x, std::span<const std::size_t> idx) {
  Vec out(idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) {
    if (idx[c] >= x.size()) throw InputError("gather index out of range");
    out[c] = x[idx[c]];
  }
  return out;
}

Vec scatter(std::span<const double> xw, std::span<const std::size_t> idx, std::size_t n) {
  check_len(xw.size(), idx.size(), "scatter");
  Vec out(n, 0.0);
  for (std::size_t c = 0; c < idx.size(); ++c) {
    if (idx[c] >= n) throw InputError("scatter index out of range");
    out[idx[c]] = xw[c];
  }
  return out;
}

void require_finite(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw InputError(std::string(what) + ": non-finite entry at " + std::to_string(i));
}

}  // namespace dws
