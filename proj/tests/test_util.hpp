#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "sps/spin.hpp"

namespace testutil {

inline double max_abs(const sps::ComplexMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

inline double rms(const sps::ComplexMatrix& a) {
  return a.size() ? std::sqrt(a.cwiseAbs2().sum() / static_cast<double>(a.size())) : 0.0;
}

inline constexpr double kPi = std::numbers::pi;

}  // namespace testutil

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

namespace testutil {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("sps_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// XORs one byte of a file in place.
inline void flip_byte(const std::filesystem::path& p, std::uintmax_t offset) {
  std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(static_cast<std::streamoff>(offset));
  char c;
  f.get(c);
  f.seekp(static_cast<std::streamoff>(offset));
  f.put(static_cast<char>(c ^ 0x5A));
}

}  // namespace testutil
