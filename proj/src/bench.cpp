#include "sps/bench.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sps/angular.hpp"
#include "sps/cache.hpp"
#include "sps/cgc.hpp"
#include "sps/fourier.hpp"
#include "sps/parity.hpp"
#include "sps/sampling.hpp"
#include "sps/states.hpp"

namespace sps {

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_once(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

// Keeps results observable so the timed work is not optimized away.
volatile double g_sink = 0.0;

int fft_grid_size(SpinDimension dim) {
  int n = 1;
  while (n < minimal_grid_size(dim)) n *= 2;
  return std::max(n, 4);
}

}  // namespace

std::filesystem::path cache_dir_for(const std::filesystem::path& root, int d, double s) {
  return root / ("d" + std::to_string(d) + "_s" + format_s(s));
}

long peak_rss_kb() {
  rusage u{};
  getrusage(RUSAGE_SELF, &u);
  return u.ru_maxrss;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope needs two or more points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BenchReport run_bench(const BenchOptions& options) {
  if (options.repetitions < 1) throw DomainError("bench: repetitions must be positive");
  BenchReport report;
  for (char method : options.methods) {
    if (method != 'B' && method != 'C' && method != 'D') {
      throw DomainError(std::string("bench: unknown method '") + method + "'");
    }
    for (int d : options.dims) {
      const SpinDimension dim = SpinDimension::from_dim(d);
      const ComplexMatrix rho = random_density(dim, options.seed);
      BenchRow row;
      row.method = method;
      row.d = d;

      std::optional<FourierTable> table;
      if (method == 'B') {
        for (int r = 0; r < options.repetitions; ++r) {
          row.samples.push_back(time_once([&] {
            const CoefficientTable c = expansion_coefficients(rho);
            g_sink = g_sink + c(0, 0).real();
          }));
        }
      } else if (method == 'C') {
        const ParityOperator parity = build_parity(dim, options.s);
        MethodCOptions copt;
        copt.threads = options.threads;
        for (int r = 0; r < options.repetitions; ++r) {
          row.samples.push_back(time_once([&] {
            // The eigenbasis is part of the on-the-fly method.
            const EigenBasis basis = jy_eigenbasis(dim);
            table.emplace(fourier_coefficients_method_c(rho, parity, basis, copt));
          }));
        }
      } else {
        const auto dir = cache_dir_for(options.cache_root, d, options.s);
        std::optional<KCache> cache;
        try {
          if (options.precompute_missing) precompute_cache(dim, options.s, dir);
          cache.emplace(KCache::open(dir));
          if (!cache->manifest().complete) throw IncompleteCacheError("cache incomplete");
        } catch (const Error& e) {
          row.skipped = true;
          row.note = std::string("no usable cache at ") + dir.string() + ": " + e.what();
        }
        if (cache) {
          for (int r = 0; r < options.repetitions; ++r) {
            row.samples.push_back(time_once([&] { table.emplace(fourier_coefficients_method_d(rho, *cache)); }));
          }
        }
      }

      if (!row.skipped) {
        row.seconds = median(row.samples);
        if (table) {
          const int n = fft_grid_size(dim);
          std::vector<double> fft;
          for (int r = 0; r < options.repetitions; ++r) {
            fft.push_back(time_once([&] {
              const PhaseSpaceGrid g = sample_fft(*table, n);
              g_sink = g_sink + g.values(0, 0).real();
            }));
          }
          row.fft_seconds = median(fft);
        }
      }
      row.peak_rss_kb = peak_rss_kb();
      report.rows.push_back(std::move(row));
    }
  }

  std::map<char, std::pair<std::vector<double>, std::vector<double>>> fits;
  for (const auto& r : report.rows) {
    if (r.skipped) continue;
    fits[r.method].first.push_back(r.d);
    fits[r.method].second.push_back(r.seconds);
  }
  for (const auto& [m, xy] : fits) {
    if (xy.first.size() >= 2) report.slopes[m] = loglog_slope(xy.first, xy.second);
  }
  return report;
}

void BenchReport::write_csv(std::ostream& out) const {
  out << "method,d,status,median_s,fft_s,peak_rss_kb,samples_s\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.method << ',' << r.d << ',' << (r.skipped ? "skipped" : "ok") << ',';
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,", r.seconds, r.fft_seconds);
    out << buf << r.peak_rss_kb << ',';
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.6g", i ? ";" : "", r.samples[i]);
      out << buf;
    }
    out << '\n';
  }
  for (const auto& [m, slope] : slopes) {
    std::snprintf(buf, sizeof buf, "%.4f", slope);
    out << "# slope " << m << ' ' << buf << '\n';
  }
}

}  // namespace sps
