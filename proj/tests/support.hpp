#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "dws/linalg.hpp"
#include "dws/rng.hpp"

namespace testing {

inline dws::DenseMatrix random_matrix(std::size_t k, std::size_t n, std::uint64_t seed) {
  dws::CounterRng rng(seed);
  dws::DenseMatrix a(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.gaussian();
  return a;
}

inline dws::Vec random_vec(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  dws::CounterRng rng(seed);
  dws::Vec v(n);
  for (auto& x : v) x = scale * rng.gaussian();
  return v;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("dws_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
