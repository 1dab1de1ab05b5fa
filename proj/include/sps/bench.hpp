#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sps/spin.hpp"

namespace sps {

struct BenchOptions {
  std::vector<int> dims;
  std::string methods = "CD";  ///< any of 'B', 'C', 'D'
  int repetitions = 3;
  double s = 0.0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Where Method D looks for caches (one subdirectory per (d, s)).
  std::filesystem::path cache_root;
  /// Build missing Method D caches instead of skipping the row.
  bool precompute_missing = false;
};

struct BenchRow {
  char method = 'C';
  int d = 0;
  bool skipped = false;
  std::string note;
  /// Median wall time of the coefficient stage, seconds.
  double seconds = 0.0;
  std::vector<double> samples;
  /// Median FFT sampling time on the minimal power-of-two grid (C and D only).
  double fft_seconds = 0.0;
  /// Process peak resident set after the row, kB (monotone across rows).
  long peak_rss_kb = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// Least-squares slope of log(seconds) against log(d), per method, over the
  /// rows that ran. Absent with fewer than two rows.
  std::map<char, double> slopes;

  void write_csv(std::ostream& out) const;
};

/// Cache directory for (d, s) under a root: `d<d>_s<s>`.
std::filesystem::path cache_dir_for(const std::filesystem::path& root, int d, double s);

/// Coefficient-stage timings: B = c_jm table, C = on-the-fly K_ell,
/// D = cached K_ell. Pointwise evaluation and FFT are excluded.
BenchReport run_bench(const BenchOptions& options);

/// Slope of the least-squares line through (log x, log y).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Peak resident set size of this process in kB.
long peak_rss_kb();

}  // namespace sps
