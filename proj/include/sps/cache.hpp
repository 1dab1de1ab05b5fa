#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sps/angular.hpp"
#include "sps/fourier.hpp"
#include "sps/parity.hpp"

namespace sps {

/// Record or manifest fails its checksum or header check.
class CorruptCacheError : public Error {
 public:
  using Error::Error;
};

/// Cache lacks a record or was never completed.
class IncompleteCacheError : public Error {
 public:
  using Error::Error;
};

/// Cache belongs to a different (d, s) than requested.
class IncompatibleCacheError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while reading or writing a cache.
class CacheIoError : public Error {
 public:
  using Error::Error;
};

/// Precomputed store of every K_ell for one (d, s), plus the companion record
/// (J_y eigenvectors U, diag M_s, J_y eigenvalues).
///
/// On-disk layout: `manifest.json` and one binary file per record. A record is
///   "SWKL" | u32 version | u32 d | i32 ell | f64 s | payload | u32 CRC-32(payload)
/// all little-endian, payload = row-major interleaved (re, im) f64 values. The
/// companion record uses ell = INT32_MIN and stores U (d x d complex), then
/// diag M_s (d reals), then the J_y eigenvalues (d reals).
class KCache {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;
  static constexpr std::int32_t kCompanionEll = INT32_MIN;
  static constexpr std::size_t kRecordHeaderBytes = 24;
  static constexpr std::size_t kRecordTrailerBytes = 4;

  struct Manifest {
    std::uint32_t version = kFormatVersion;
    int d = 0;
    std::string s_text;  ///< s as a round-trippable decimal string
    bool complete = false;
    std::map<int, std::uint32_t> k_checksums;  ///< ell -> CRC-32 of the K_ell payload
    std::optional<std::uint32_t> companion_checksum;

    double s() const;
  };

  /// Opens an existing cache directory; throws IncompleteCacheError when the
  /// manifest is missing, CorruptCacheError when it cannot be parsed.
  static KCache open(const std::filesystem::path& dir);

  const std::filesystem::path& directory() const { return dir_; }
  const Manifest& manifest() const { return manifest_; }
  SpinDimension dim() const { return SpinDimension::from_dim(manifest_.d); }
  double s() const { return manifest_.s(); }

  /// Reads and validates K_ell. Throws CorruptCacheError naming ell on any
  /// checksum or header mismatch, IncompleteCacheError if the record is absent.
  ComplexMatrix read_k(int ell) const;

  struct Companion {
    ComplexMatrix vectors;
    RealVector parity_diag;
    RealVector eigenvalues;
  };
  Companion read_companion() const;

  std::filesystem::path k_path(int ell) const;
  std::filesystem::path companion_path() const;
  std::filesystem::path manifest_path() const;

  /// Total K payload bytes, (2d - 1) d^2 16.
  static std::uint64_t k_payload_bytes(int d) {
    return static_cast<std::uint64_t>(2 * d - 1) * static_cast<std::uint64_t>(d) * d * 16u;
  }
  /// Companion payload bytes, 16 d (d + 1).
  static std::uint64_t companion_payload_bytes(int d) { return 16ull * d * (d + 1); }

  static void write_manifest(const std::filesystem::path& dir, const Manifest& manifest);

 private:
  KCache(std::filesystem::path dir, Manifest manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {}
  /// Whole verified record; the payload starts at kRecordHeaderBytes.
  std::vector<unsigned char> read_record(const std::filesystem::path& path, std::int32_t ell,
                                         std::size_t payload_bytes, std::optional<std::uint32_t> expected_crc) const;

  std::filesystem::path dir_;
  Manifest manifest_;
};

struct PrecomputeReport {
  std::uint64_t k_payload_bytes = 0;
  std::uint64_t companion_payload_bytes = 0;
  int records_written = 0;
  int records_verified = 0;
  /// True when the cache was already complete and every record verified.
  bool already_valid = false;
};

/// Writes all 4J + 1 K_ell records plus the companion record.
///
/// Idempotent: a complete cache for the same (d, s) is verified record by
/// record and only records failing verification are rewritten. The manifest
/// is marked incomplete until every record is on disk. Throws
/// IncompatibleCacheError if the directory holds a cache for another (d, s)
/// and CacheIoError (naming ell) on write failures.
PrecomputeReport precompute_cache(const EigenBasis& basis, const ParityOperator& parity,
                                  const std::filesystem::path& dir);

/// Convenience overload building the eigenbasis and parity operator.
PrecomputeReport precompute_cache(SpinDimension dim, double s, const std::filesystem::path& dir,
                                  bool allow_extended_s = false);

/// Method D: sums Result 1 with stored K_ell, streaming one record at a time.
///
/// `ell_order`, when non-empty, must be a permutation of -2J..2J and fixes the
/// read order. Throws DimensionMismatch for a rho of another size, plus the
/// cache errors of KCache::read_k.
FourierTable fourier_coefficients_method_d(const ComplexMatrix& rho, const KCache& cache,
                                           std::span<const int> ell_order = {});

/// Formats s so that parsing it back yields the same double.
std::string format_s(double s);

}  // namespace sps
