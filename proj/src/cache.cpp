#include "sps/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "sps/binary.hpp"

namespace sps {

namespace fs = std::filesystem;
using RowMajorComplex = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace {

constexpr char kMagic[4] = {'S', 'W', 'K', 'L'};
constexpr const char* kManifestName = "manifest.json";
constexpr const char* kCompanionName = "companion.bin";

std::string ell_label(std::int32_t ell) {
  return ell == KCache::kCompanionEll ? std::string("companion") : "ell = " + std::to_string(ell);
}

std::vector<unsigned char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw CacheIoError("cannot open " + path.string());
  std::vector<unsigned char> bytes(static_cast<std::size_t>(in.tellg()));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw CacheIoError("read failed for " + path.string());
  return bytes;
}

void write_file_atomically(const fs::path& path, std::span<const unsigned char> bytes, const std::string& what) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheIoError("cannot create " + tmp.string() + " (" + what + ")");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw CacheIoError("write failed for " + tmp.string() + " (" + what + ")");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CacheIoError("cannot move " + tmp.string() + " into place (" + what + "): " + ec.message());
}

// Header, payload and trailing CRC of one record.
std::vector<unsigned char> encode_record(int d, std::int32_t ell, double s, const binary::Writer& payload,
                                         std::uint32_t& crc_out) {
  binary::Writer w;
  w.put_bytes(std::span(reinterpret_cast<const unsigned char*>(kMagic), 4));
  w.put<std::uint32_t>(KCache::kFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(d));
  w.put<std::int32_t>(ell);
  w.put<double>(s);
  w.put_bytes(payload.bytes());
  crc_out = binary::crc32(payload.bytes());
  w.put<std::uint32_t>(crc_out);
  return w.bytes();
}

binary::Writer k_payload(const ComplexMatrix& k) {
  const RowMajorComplex rows = k;
  binary::Writer w;
  w.put_complex(std::span(rows.data(), static_cast<std::size_t>(rows.size())));
  return w;
}

binary::Writer companion_payload(const EigenBasis& basis, const ParityOperator& parity) {
  const RowMajorComplex rows = basis.vectors;
  binary::Writer w;
  w.put_complex(std::span(rows.data(), static_cast<std::size_t>(rows.size())));
  for (int i = 0; i < parity.diag.size(); ++i) w.put<double>(parity.diag(i));
  for (int i = 0; i < basis.eigenvalues.size(); ++i) w.put<double>(basis.eigenvalues(i));
  return w;
}

// Checks a record on disk against its own CRC and the manifest; no exceptions.
bool record_is_valid(const KCache& cache, const fs::path& path, std::int32_t ell, std::size_t payload_bytes,
                     std::optional<std::uint32_t> expected_crc) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return false;
  try {
    const auto bytes = read_file(path);
    if (bytes.size() != KCache::kRecordHeaderBytes + payload_bytes + KCache::kRecordTrailerBytes) return false;
    binary::Reader r(bytes);
    auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic)) return false;
    if (r.get<std::uint32_t>() != KCache::kFormatVersion) return false;
    if (static_cast<int>(r.get<std::uint32_t>()) != cache.manifest().d) return false;
    if (r.get<std::int32_t>() != ell) return false;
    if (r.get<double>() != cache.s()) return false;
    const std::uint32_t crc = binary::crc32(r.take(payload_bytes));
    if (r.get<std::uint32_t>() != crc) return false;
    return !expected_crc || *expected_crc == crc;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::string format_s(double s) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, s);
    if (std::strtod(buf, nullptr) == s) break;
  }
  return buf;
}

double KCache::Manifest::s() const {
  char* end = nullptr;
  const double value = std::strtod(s_text.c_str(), &end);
  if (s_text.empty() || end != s_text.c_str() + s_text.size()) {
    throw CorruptCacheError("manifest: unparseable s '" + s_text + "'");
  }
  return value;
}

fs::path KCache::k_path(int ell) const {
  char name[32];
  std::snprintf(name, sizeof name, "k_%+06d.bin", ell);
  return dir_ / name;
}

fs::path KCache::companion_path() const { return dir_ / kCompanionName; }
fs::path KCache::manifest_path() const { return dir_ / kManifestName; }

void KCache::write_manifest(const fs::path& dir, const Manifest& manifest) {
  nlohmann::json records = nlohmann::json::array();
  KCache view(dir, manifest);
  for (const auto& [ell, crc] : manifest.k_checksums) {
    records.push_back({{"ell", ell}, {"file", view.k_path(ell).filename().string()}, {"crc32", crc}});
  }
  nlohmann::json j = {{"format", "sps-kcache"},
                      {"version", manifest.version},
                      {"d", manifest.d},
                      {"s", manifest.s_text},
                      {"complete", manifest.complete},
                      {"k_payload_bytes", k_payload_bytes(manifest.d)},
                      {"records", records}};
  if (manifest.companion_checksum) {
    j["companion"] = {{"file", kCompanionName}, {"crc32", *manifest.companion_checksum}};
  }
  const std::string text = j.dump(2) + "\n";
  write_file_atomically(dir / kManifestName, std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()),
                        "manifest");
}

KCache KCache::open(const fs::path& dir) {
  const fs::path path = dir / kManifestName;
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw IncompleteCacheError("no cache manifest at " + path.string());
  }
  Manifest m;
  try {
    const auto bytes = read_file(path);
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    if (j.at("format").get<std::string>() != "sps-kcache") throw CorruptCacheError("manifest: unknown format tag");
    m.version = j.at("version").get<std::uint32_t>();
    m.d = j.at("d").get<int>();
    m.s_text = j.at("s").get<std::string>();
    m.complete = j.at("complete").get<bool>();
    for (const auto& rec : j.at("records")) {
      m.k_checksums[rec.at("ell").get<int>()] = rec.at("crc32").get<std::uint32_t>();
    }
    if (j.contains("companion")) m.companion_checksum = j["companion"].at("crc32").get<std::uint32_t>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptCacheError("manifest " + path.string() + " is malformed: " + e.what());
  }
  if (m.version != kFormatVersion) {
    throw IncompatibleCacheError("cache format version " + std::to_string(m.version) + " is not supported");
  }
  if (m.d < 2) throw CorruptCacheError("manifest: invalid d = " + std::to_string(m.d));
  (void)m.s();
  return KCache(dir, std::move(m));
}

std::vector<unsigned char> KCache::read_record(const fs::path& path, std::int32_t ell, std::size_t payload_bytes,
                                               std::optional<std::uint32_t> expected_crc) const {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    throw IncompleteCacheError("cache record missing for " + ell_label(ell) + ": " + path.string());
  }
  auto bytes = read_file(path);
  const std::string where = " in record " + ell_label(ell) + " (" + path.string() + ")";
  if (bytes.size() != kRecordHeaderBytes + payload_bytes + kRecordTrailerBytes) {
    throw CorruptCacheError("unexpected size" + where);
  }
  binary::Reader r(bytes);
  auto magic = r.take(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) throw CorruptCacheError("bad magic" + where);
  if (r.get<std::uint32_t>() != kFormatVersion) throw CorruptCacheError("bad format version" + where);
  if (static_cast<int>(r.get<std::uint32_t>()) != manifest_.d) throw CorruptCacheError("header d mismatch" + where);
  if (r.get<std::int32_t>() != ell) throw CorruptCacheError("header ell mismatch" + where);
  if (r.get<double>() != s()) throw CorruptCacheError("header s mismatch" + where);
  const auto payload = r.take(payload_bytes);
  const std::uint32_t crc = binary::crc32(payload);
  const std::uint32_t stored = r.get<std::uint32_t>();
  if (crc != stored || (expected_crc && *expected_crc != crc)) {
    throw CorruptCacheError("checksum mismatch" + where);
  }
  return bytes;
}

ComplexMatrix KCache::read_k(int ell) const {
  const int d = manifest_.d;
  const auto it = manifest_.k_checksums.find(ell);
  if (it == manifest_.k_checksums.end()) {
    throw IncompleteCacheError("manifest lists no record for ell = " + std::to_string(ell));
  }
  const auto record = read_record(k_path(ell), ell, static_cast<std::size_t>(d) * d * 16, it->second);
  RowMajorComplex rows(d, d);
  binary::Reader r{std::span<const unsigned char>(record).subspan(kRecordHeaderBytes)};
  r.get_complex(std::span(rows.data(), static_cast<std::size_t>(rows.size())));
  return rows;
}

KCache::Companion KCache::read_companion() const {
  const int d = manifest_.d;
  const auto record = read_record(companion_path(), kCompanionEll, companion_payload_bytes(d),
                                  manifest_.companion_checksum);
  binary::Reader r{std::span<const unsigned char>(record).subspan(kRecordHeaderBytes)};
  RowMajorComplex rows(d, d);
  r.get_complex(std::span(rows.data(), static_cast<std::size_t>(rows.size())));
  Companion c{rows, RealVector(d), RealVector(d)};
  for (int i = 0; i < d; ++i) c.parity_diag(i) = r.get<double>();
  for (int i = 0; i < d; ++i) c.eigenvalues(i) = r.get<double>();
  return c;
}

PrecomputeReport precompute_cache(const EigenBasis& basis, const ParityOperator& parity, const fs::path& dir) {
  if (!(basis.dim == parity.dim)) throw DimensionMismatch("precompute_cache: basis and parity disagree on d");
  const int d = basis.dim.dim();
  const int limit = basis.dim.two_j();

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CacheIoError("cannot create cache directory " + dir.string() + ": " + ec.message());

  KCache::Manifest manifest;
  manifest.d = d;
  manifest.s_text = format_s(parity.s);

  PrecomputeReport report;
  report.k_payload_bytes = KCache::k_payload_bytes(d);
  report.companion_payload_bytes = KCache::companion_payload_bytes(d);

  // Existing cache: keep its checksums for records that still verify.
  std::optional<KCache> existing;
  if (fs::exists(dir / kManifestName, ec)) {
    try {
      existing = KCache::open(dir);
    } catch (const CorruptCacheError&) {
      existing.reset();
    }
    if (existing && (existing->manifest().d != d || existing->s() != parity.s)) {
      throw IncompatibleCacheError("directory " + dir.string() + " holds a cache for d = " +
                                   std::to_string(existing->manifest().d) + ", s = " + existing->manifest().s_text);
    }
  }

  // Pass 1: verify what is already there.
  std::vector<int> pending;
  bool companion_ok = false;
  if (existing) {
    for (int ell = -limit; ell <= limit; ++ell) {
      const auto it = existing->manifest().k_checksums.find(ell);
      if (it != existing->manifest().k_checksums.end() &&
          record_is_valid(*existing, existing->k_path(ell), ell, static_cast<std::size_t>(d) * d * 16, it->second)) {
        manifest.k_checksums[ell] = it->second;
        ++report.records_verified;
      } else {
        pending.push_back(ell);
      }
    }
    companion_ok = existing->manifest().companion_checksum &&
                   record_is_valid(*existing, existing->companion_path(), KCache::kCompanionEll,
                                   KCache::companion_payload_bytes(d), existing->manifest().companion_checksum);
    if (companion_ok) {
      manifest.companion_checksum = existing->manifest().companion_checksum;
      ++report.records_verified;
    }
  } else {
    for (int ell = -limit; ell <= limit; ++ell) pending.push_back(ell);
  }

  if (pending.empty() && companion_ok && existing->manifest().complete) {
    report.already_valid = true;
    return report;
  }

  manifest.complete = false;
  KCache::write_manifest(dir, manifest);
  const KCache view = KCache::open(dir);

  if (!companion_ok) {
    std::uint32_t crc = 0;
    const auto bytes = encode_record(d, KCache::kCompanionEll, parity.s, companion_payload(basis, parity), crc);
    write_file_atomically(view.companion_path(), bytes, "companion record");
    manifest.companion_checksum = crc;
    ++report.records_written;
  }

  const TransformedParity mtilde = transform_parity(parity, basis);
  for (const int ell : pending) {
    const KMatrix k = compute_k(basis, mtilde, ell);
    std::uint32_t crc = 0;
    const auto bytes = encode_record(d, ell, parity.s, k_payload(k.matrix), crc);
    write_file_atomically(view.k_path(ell), bytes, "record ell = " + std::to_string(ell));
    manifest.k_checksums[ell] = crc;
    ++report.records_written;
  }

  manifest.complete = true;
  KCache::write_manifest(dir, manifest);
  return report;
}

PrecomputeReport precompute_cache(SpinDimension dim, double s, const fs::path& dir, bool allow_extended_s) {
  return precompute_cache(jy_eigenbasis(dim), build_parity(dim, s, allow_extended_s), dir);
}

FourierTable fourier_coefficients_method_d(const ComplexMatrix& rho, const KCache& cache,
                                           std::span<const int> ell_order) {
  const SpinDimension dim = cache.dim();
  require_square(rho, dim, "fourier_coefficients_method_d");
  if (!cache.manifest().complete) {
    throw IncompleteCacheError("cache at " + cache.directory().string() + " is marked incomplete");
  }
  const int limit = dim.two_j();
  std::vector<int> order;
  if (ell_order.empty()) {
    order.resize(static_cast<std::size_t>(2 * limit + 1));
    std::iota(order.begin(), order.end(), -limit);
  } else {
    order.assign(ell_order.begin(), ell_order.end());
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expected(static_cast<std::size_t>(2 * limit + 1));
    std::iota(expected.begin(), expected.end(), -limit);
    if (sorted != expected) throw DomainError("fourier_coefficients_method_d: ell_order is not a permutation of -2J..2J");
  }

  FourierTable table(dim, cache.s());
  for (const int ell : order) {
    const ComplexMatrix k = cache.read_k(ell);
    accumulate_fourier_row(rho, k, ell, table);
  }
  return table;
}

}  // namespace sps
