#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "dws/linalg.hpp"

namespace dws {

/// Parameters for a random compressed-sensing instance. Either `k` is set
/// explicitly or it is derived as ceil(c * s * ln(n / s)).
struct GeneratorConfig {
  std::size_t n = 0;
  std::size_t s = 0;
  std::optional<std::size_t> k;
  double c = 2.0;
  double eta_alpha = 0.1;
  double noise_sigma2 = 1e-4;
  std::uint64_t seed = 0;
  bool normalize_b = false;

  std::size_t resolved_k() const;
  void validate() const;  // throws InputError
};

/// ceil(c * s * ln(n / s)).
std::size_t k_from_rule(std::size_t n, std::size_t s, double c);

struct Instance {
  DenseMatrix a;               // k x n
  Vec b;                       // k
  double eta = 0.0;
  double eta_alpha = 0.0;      // 0 for hand-built instances
  std::optional<Vec> z_true;   // n, entries in {-1, 0, +1}
  std::size_t s = 0;           // nonzeros of z_true (0 when absent)
  std::uint64_t seed = 0;

  std::size_t k() const noexcept { return a.rows(); }
  std::size_t n() const noexcept { return a.cols(); }
  Vec atb() const { return matvec_t(a, b); }

  bool operator==(const Instance&) const = default;
};

/// Hand-built instance; checks dimensions, finiteness and eta > 0.
Instance make_instance(DenseMatrix a, Vec b, double eta);

/// Gaussian matrix with orthonormalized rows, +-1 spikes on s random
/// coordinates, b = A z + N(0, sigma2) noise, eta = alpha ||A^t b||_inf
/// taken from the noisy (and, if requested, normalized) b.
///
/// Stream layout: k*n gaussians for A in row-major order, then s draws for
/// a partial Fisher-Yates shuffle choosing the support, s uniforms for the
/// signs (u < 1/2 gives -1), then k gaussians of noise. If orthonormalization
/// hits a numerically dependent row the whole draw is repeated from seed
/// seed ^ mix(attempt), up to 3 times.
Instance generate(const GeneratorConfig& cfg);

/// Largest |(A A^t - I)_ij|.
double orthonormality_defect(const DenseMatrix& a);

// CSI1 on-disk format, all little-endian:
//   "CSI1" | u32 version=1 | u64 k | u64 n | u64 s | f64 eta | f64 eta_alpha |
//   u64 seed | u8 has_z | f64 A[k*n] row-major | f64 b[k] | f64 z[n] if has_z
inline constexpr std::uint32_t kCsiVersion = 1;

void write_instance(const std::filesystem::path& path, const Instance& inst);
/// Throws FormatError (with byte offset) on bad magic, version or truncation.
Instance read_instance(const std::filesystem::path& path);

// Solution files: u64 length | f64 x[length], little-endian.
void write_solution(const std::filesystem::path& path, std::span<const double> x);
Vec read_solution(const std::filesystem::path& path);

}  // namespace dws
