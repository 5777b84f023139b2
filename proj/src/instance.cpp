#include "dws/instance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include "dws/errors.hpp"
#include "dws/rng.hpp"

namespace dws {

namespace {

constexpr int kMaxRetries = 3;
// A row whose norm drops below this fraction during Gram-Schmidt is treated
// as linearly dependent on the rows before it.
constexpr double kDependentRow = 1e-8;

// Modified Gram-Schmidt with one reorthogonalization pass on the rows of a
// row-major k x n buffer. Returns false on a dependent row.
bool orthonormalize_rows(std::vector<double>& m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < k; ++i) {
    double* ri = m.data() + i * n;
    double before = 0.0;
    for (std::size_t c = 0; c < n; ++c) before += ri[c] * ri[c];
    before = std::sqrt(before);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        const double* rj = m.data() + j * n;
        double p = 0.0;
        for (std::size_t c = 0; c < n; ++c) p += ri[c] * rj[c];
        for (std::size_t c = 0; c < n; ++c) ri[c] -= p * rj[c];
      }
    }
    double after = 0.0;
    for (std::size_t c = 0; c < n; ++c) after += ri[c] * ri[c];
    after = std::sqrt(after);
    if (!(after > kDependentRow * before)) return false;
    for (std::size_t c = 0; c < n; ++c) ri[c] /= after;
  }
  return true;
}

// -- little-endian encoding ----------------------------------------------------

template <class T>
void put(std::string& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}

  template <class T>
  T get(const char* what) {
    if (data_.size() - pos_ < sizeof(T)) throw FormatError(std::string("truncated ") + what, pos_);
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
    T v;
    std::memcpy(&v, bytes, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  Vec get_doubles(std::size_t count, const char* what) {
    if ((data_.size() - pos_) / sizeof(double) < count)
      throw FormatError(std::string("truncated ") + what, pos_);
    Vec v(count);
    for (auto& x : v) x = get<double>(what);
    return v;
  }

  std::size_t pos() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  const std::string& data() const noexcept { return data_; }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("write failed for " + path.string());
}

}  // namespace

std::size_t k_from_rule(std::size_t n, std::size_t s, double c) {
  if (s == 0 || n <= s) throw InputError("k rule needs 0 < s < n");
  return static_cast<std::size_t>(
      std::ceil(c * static_cast<double>(s) * std::log(static_cast<double>(n) / static_cast<double>(s))));
}

std::size_t GeneratorConfig::resolved_k() const { return k ? *k : k_from_rule(n, s, c); }

void GeneratorConfig::validate() const {
  if (s == 0) throw InputError("s must be positive");
  if (!k && !(c > 0.0)) throw InputError("k multiplier c must be positive");
  const std::size_t kk = resolved_k();
  if (kk > n)
    throw InputError("k = " + std::to_string(kk) + " exceeds n = " + std::to_string(n) +
                     "; rows cannot be orthonormalized");
  if (!(s < kk)) throw InputError("need s < k");
  if (!(eta_alpha > 0.0 && eta_alpha < 1.0)) throw InputError("eta_alpha must lie in (0, 1)");
  if (!(noise_sigma2 >= 0.0) || !std::isfinite(noise_sigma2))
    throw InputError("noise variance must be finite and >= 0");
}

Instance make_instance(DenseMatrix a, Vec b, double eta) {
  if (b.size() != a.rows()) throw InputError("b length does not match rows of A");
  require_finite(a.data(), "A");
  require_finite(b, "b");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InputError("eta must be positive and finite");
  Instance inst;
  inst.a = std::move(a);
  inst.b = std::move(b);
  inst.eta = eta;
  return inst;
}

Instance generate(const GeneratorConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n, s = cfg.s, k = cfg.resolved_k();

  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    const std::uint64_t stream =
        attempt == 0 ? cfg.seed : cfg.seed ^ CounterRng::mix(static_cast<std::uint64_t>(attempt));
    CounterRng rng(stream);

    std::vector<double> rows(k * n);
    for (auto& v : rows) v = rng.gaussian();
    if (!orthonormalize_rows(rows, k, n)) continue;

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < s; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(perm[i], perm[j]);
    }
    Vec z(n, 0.0);
    for (std::size_t i = 0; i < s; ++i) z[perm[i]] = rng.uniform01() < 0.5 ? -1.0 : 1.0;

    Instance inst;
    inst.a = DenseMatrix::from_row_major(k, n, rows);
    inst.b = matvec(inst.a, z);
    const double sigma = std::sqrt(cfg.noise_sigma2);
    for (auto& bi : inst.b) bi += sigma * rng.gaussian();
    if (cfg.normalize_b) {
      const double nb = norm2(inst.b);
      if (!(nb > 0.0)) throw NumericalError("cannot normalize a zero observation vector");
      for (auto& bi : inst.b) bi /= nb;
    }
    inst.eta_alpha = cfg.eta_alpha;
    inst.eta = cfg.eta_alpha * norm_inf(inst.atb());
    inst.z_true = std::move(z);
    inst.s = s;
    inst.seed = cfg.seed;
    return inst;
  }
  throw NumericalError("row orthonormalization failed after " + std::to_string(kMaxRetries) +
                       " regenerations");
}

double orthonormality_defect(const DenseMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.rows(); ++j) {
      double g = 0.0;
      for (std::size_t c = 0; c < a.cols(); ++c) g += a(i, c) * a(j, c);
      worst = std::max(worst, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

void write_instance(const std::filesystem::path& path, const Instance& inst) {
  std::string out;
  out.reserve(64 + 8 * (inst.k() * inst.n() + inst.k() + inst.n()));
  out.append("CSI1", 4);
  put<std::uint32_t>(out, kCsiVersion);
  put<std::uint64_t>(out, inst.k());
  put<std::uint64_t>(out, inst.n());
  put<std::uint64_t>(out, inst.s);
  put<double>(out, inst.eta);
  put<double>(out, inst.eta_alpha);
  put<std::uint64_t>(out, inst.seed);
  put<std::uint8_t>(out, inst.z_true ? 1 : 0);
  for (std::size_t i = 0; i < inst.k(); ++i)
    for (std::size_t j = 0; j < inst.n(); ++j) put<double>(out, inst.a(i, j));
  for (double v : inst.b) put<double>(out, v);
  if (inst.z_true)
    for (double v : *inst.z_true) put<double>(out, v);
  dump(path, out);
}

Instance read_instance(const std::filesystem::path& path) {
  Reader in(slurp(path));
  constexpr std::size_t kHeader = 4 + 4 + 8 * 3 + 8 * 2 + 8 + 1;
  if (in.remaining() < 4) throw FormatError("truncated header", 0);
  if (in.data().compare(0, 4, "CSI1") != 0) throw FormatError("bad magic, expected CSI1", 0);
  if (in.remaining() < kHeader) throw FormatError("truncated header", in.remaining());
  in.get<std::uint32_t>("magic");
  const auto version_at = in.pos();
  const auto version = in.get<std::uint32_t>("version");
  if (version != kCsiVersion)
    throw FormatError("unsupported CSI version " + std::to_string(version), version_at);
  const auto k = in.get<std::uint64_t>("k");
  const auto n = in.get<std::uint64_t>("n");
  const auto s = in.get<std::uint64_t>("s");
  const auto eta = in.get<double>("eta");
  const auto eta_alpha = in.get<double>("eta_alpha");
  const auto seed = in.get<std::uint64_t>("seed");
  const auto flag_at = in.pos();
  const auto has_z = in.get<std::uint8_t>("has_z");
  if (has_z > 1) throw FormatError("has_z flag must be 0 or 1", flag_at);
  if (n != 0 && k > in.remaining() / 8 / n) throw FormatError("truncated matrix payload", in.pos());

  Instance inst;
  inst.a = DenseMatrix::from_row_major(k, n, in.get_doubles(k * n, "matrix payload"));
  inst.b = in.get_doubles(k, "observation payload");
  if (has_z) inst.z_true = in.get_doubles(n, "signal payload");
  if (in.remaining() != 0) throw FormatError("trailing bytes after payload", in.pos());
  inst.eta = eta;
  inst.eta_alpha = eta_alpha;
  inst.s = s;
  inst.seed = seed;
  return inst;
}

void write_solution(const std::filesystem::path& path, std::span<const double> x) {
  std::string out;
  put<std::uint64_t>(out, x.size());
  for (double v : x) put<double>(out, v);
  dump(path, out);
}

Vec read_solution(const std::filesystem::path& path) {
  Reader in(slurp(path));
  const auto len = in.get<std::uint64_t>("length prefix");
  if (len > in.remaining() / 8) throw FormatError("truncated solution payload", in.pos());
  Vec x = in.get_doubles(len, "solution payload");
  if (in.remaining() != 0) throw FormatError("trailing bytes after solution", in.pos());
  return x;
}

}  // namespace dws
