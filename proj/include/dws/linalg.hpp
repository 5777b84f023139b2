#pragma once

// Dense kernels shared by every solver. The parallel versions in namespace
// dws split work so that each output entry is accumulated in the same order
// as the serial reference in dws::serial, so both produce identical bits for
// any thread count.

#include <cstddef>
#include <span>
#include <vector>

namespace dws {

using Vec = std::vector<double>;
using IndexList = std::vector<std::size_t>;

/// k x n matrix of doubles, column-major.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> col_major);

  /// Builds from row-major data (the on-disk order).
  static DenseMatrix from_row_major(std::size_t rows, std::size_t cols,
                                    std::span<const double> row_major);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }

  std::span<const double> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }

  std::span<const double> data() const noexcept { return data_; }

  /// Submatrix of the listed columns, in list order. Throws InputError on an
  /// index >= cols().
  DenseMatrix columns(std::span<const std::size_t> idx) const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// -- parallel kernels ---------------------------------------------------------

/// A x.
Vec matvec(const DenseMatrix& a, std::span<const double> x);

/// A^t y.
Vec matvec_t(const DenseMatrix& a, std::span<const double> y);

/// A x using only the columns in `supp`; entries of x off `supp` are ignored.
Vec matvec_support(const DenseMatrix& a, std::span<const double> x,
                   std::span<const std::size_t> supp);

/// grad f(x) = A^t (A x) - A^t b with A x formed from the `supp` columns only.
/// `atb` is the precomputed A^t b. Cost O(k |supp| + k n).
Vec gradient(const DenseMatrix& a, std::span<const double> atb,
             std::span<const double> x, std::span<const std::size_t> supp);

/// 1/2 ||A x - b||^2 + eta ||x||_1.
double objective(const DenseMatrix& a, std::span<const double> b, double eta,
                 std::span<const double> x);

/// 1/2 ||r||^2 + eta ||x||_1 for an already formed residual r = A x - b.
double objective_from_residual(std::span<const double> residual, double eta,
                               std::span<const double> x);

// -- small vector helpers -----------------------------------------------------

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm1(std::span<const double> a);
double norm_inf(std::span<const double> a);

/// Indices of nonzero entries, ascending.
IndexList support(std::span<const double> x);

/// x restricted to `idx`, in list order.
Vec gather(std::span<const double> x, std::span<const std::size_t> idx);

/// Length-n vector holding `xw` at positions `idx`, zero elsewhere.
Vec scatter(std::span<const double> xw, std::span<const std::size_t> idx, std::size_t n);

/// Throws InputError if any entry is NaN or infinite.
void require_finite(std::span<const double> v, const char* what);

/// Serial reference kernels. Kept for testing and benchmarking the parallel
/// versions above.
namespace serial {
Vec matvec(const DenseMatrix& a, std::span<const double> x);
Vec matvec_t(const DenseMatrix& a, std::span<const double> y);
Vec matvec_support(const DenseMatrix& a, std::span<const double> x,
                   std::span<const std::size_t> supp);
Vec gradient(const DenseMatrix& a, std::span<const double> atb,
             std::span<const double> x, std::span<const std::size_t> supp);
}  // namespace serial

}  // namespace dws
