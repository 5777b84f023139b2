#include <string>

#include "dws/errors.hpp"
#include "dws/linalg.hpp"

namespace dws::serial {

Vec matvec(const DenseMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw InputError("matvec x: dimension mismatch");
  Vec y(a.rows(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += a(i, j) * x[j];
  return y;
}

Vec matvec_t(const DenseMatrix& a, std::span<const double> y) {
  if (y.size() != a.rows()) throw InputError("matvec_t y: dimension mismatch");
  Vec out(a.cols(), 0.0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * y[i];
    out[j] = s;
  }
  return out;
}

Vec matvec_support(const DenseMatrix& a, std::span<const double> x,
                   std::span<const std::size_t> supp) {
  if (x.size() != a.cols()) throw InputError("matvec_support x: dimension mismatch");
  Vec y(a.rows(), 0.0);
  for (auto j : supp) {
    if (j >= a.cols()) throw InputError("support index " + std::to_string(j) + " out of range");
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] += a(i, j) * x[j];
  }
  return y;
}

Vec gradient(const DenseMatrix& a, std::span<const double> atb, std::span<const double> x,
             std::span<const std::size_t> supp) {
  if (atb.size() != a.cols()) throw InputError("gradient atb: dimension mismatch");
  Vec g = serial::matvec_t(a, serial::matvec_support(a, x, supp));
  for (std::size_t j = 0; j < g.size(); ++j) g[j] -= atb[j];
  return g;
}

}  // namespace dws::serial
