// sps: spherical phase-space grids from the command line.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "sps/angular.hpp"
#include "sps/bench.hpp"
#include "sps/cache.hpp"
#include "sps/cgc.hpp"
#include "sps/fourier.hpp"
#include "sps/io.hpp"
#include "sps/sampling.hpp"
#include "sps/states.hpp"

namespace fs = std::filesystem;
using namespace sps;

namespace {

constexpr int kMaxDim = 4001;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct SOptions {
  std::optional<double> s;
  std::string kind;
  bool allow_extended = false;

  double value() const {
    if (s && !kind.empty()) throw UsageError("--s and --kind are mutually exclusive");
    if (kind == "wigner") return 0.0;
    if (kind == "husimi") return -1.0;
    if (kind == "glauber") return 1.0;
    if (!kind.empty()) throw UsageError("unknown --kind '" + kind + "' (wigner, husimi, glauber)");
    return s.value_or(0.0);
  }
};

void add_s_options(CLI::App* cmd, SOptions& o) {
  cmd->add_option("--s", o.s, "phase-space parameter s (0 Wigner, -1 Husimi Q, 1 Glauber P)");
  cmd->add_option("--kind", o.kind, "named s: wigner | husimi | glauber");
  cmd->add_flag("--allow-extended-s", o.allow_extended, "accept s outside [-1, 1]");
}

std::optional<fs::path> env_cache_root() {
  if (const char* root = std::getenv("SPS_CACHE_ROOT"); root && *root) return fs::path(root);
  return std::nullopt;
}

fs::path resolve_cache(const std::string& given, int d, double s) {
  if (!given.empty()) return given;
  if (auto root = env_cache_root()) return cache_dir_for(*root, d, s);
  throw UsageError("no cache directory: pass --cache or set SPS_CACHE_ROOT");
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, std::string> out;
  for (const auto& p : raw) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + p + "'");
    out[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return out;
}

double param_double(const std::map<std::string, std::string>& params, const std::string& key,
                    std::optional<double> fallback = std::nullopt) {
  const auto it = params.find(key);
  if (it == params.end()) {
    if (fallback) return *fallback;
    throw UsageError("missing --param " + key + "=...");
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != it->second.size() || !std::isfinite(v)) throw UsageError("--param " + key + ": not a number");
  return v;
}

struct StateInput {
  std::string state;
  std::string input;
  int dim = 0;
  std::vector<std::string> params;
};

void add_state_options(CLI::App* cmd, StateInput& in) {
  auto* st = cmd->add_option("--state", in.state, "ghz | dicke | squeezed | coherent | mixed | random")
                 ->check(CLI::IsMember({"ghz", "dicke", "squeezed", "coherent", "mixed", "random"}));
  auto* file = cmd->add_option("--input", in.input, "density matrix file (SWPG matrix container or row,col,re,im CSV)")
                   ->check(CLI::ExistingFile);
  st->excludes(file);
  cmd->add_option("--dim", in.dim, "Hilbert-space dimension d = 2J + 1")->check(CLI::Range(2, kMaxDim));
  cmd->add_option("--param", in.params, "state parameter key=value: m (dicke), xi (squeezed), theta/phi (coherent), seed (random)");
}

struct LoadedState {
  ComplexMatrix rho;
  std::string description;
};

LoadedState load_state(const StateInput& in) {
  const auto params = parse_params(in.params);
  if (!in.input.empty()) {
    ComplexMatrix rho = read_matrix_file(in.input);
    if (in.dim != 0 && in.dim != rho.rows()) {
      throw UsageError("--dim " + std::to_string(in.dim) + " does not match the " + std::to_string(rho.rows()) +
                       "-dimensional input matrix");
    }
    if (rho.rows() > kMaxDim) throw UsageError("input matrix exceeds d = 4001");
    return {std::move(rho), "input " + in.input};
  }
  if (in.state.empty()) throw UsageError("one of --state or --input is required");
  if (in.dim == 0) throw UsageError("--dim is required with --state");
  const auto dim = SpinDimension::from_dim(in.dim);
  std::ostringstream desc;
  desc << in.state << " d=" << in.dim;
  if (in.state == "ghz") return {ghz(dim), desc.str()};
  if (in.state == "mixed") return {mixed(dim), desc.str()};
  if (in.state == "dicke") {
    const double m = param_double(params, "m", dim.j());
    const double two_m = 2.0 * m;
    if (two_m != std::round(two_m) || !dim.contains_two_m(static_cast<int>(two_m))) {
      throw UsageError("dicke: m must be one of -J, -J+1, ..., J");
    }
    desc << " m=" << m;
    return {dicke(dim, static_cast<int>(two_m)), desc.str()};
  }
  if (in.state == "squeezed") {
    const double xi = param_double(params, "xi");
    desc << " xi=" << xi;
    return {squeezed(dim, xi), desc.str()};
  }
  if (in.state == "coherent") {
    const double th = param_double(params, "theta", 0.0), ph = param_double(params, "phi", 0.0);
    desc << " theta=" << th << " phi=" << ph;
    return {coherent(dim, th, ph), desc.str()};
  }
  const double seed = param_double(params, "seed");
  if (seed < 0 || seed != std::floor(seed)) throw UsageError("random: seed must be a nonnegative integer");
  desc << " seed=" << static_cast<std::uint64_t>(seed);
  return {random_density(dim, static_cast<std::uint64_t>(seed)), desc.str()};
}

struct OutputOptions {
  std::string format = "bin";
  std::string out;
  std::vector<double> window;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "bin | csv")->check(CLI::IsMember({"bin", "csv"}));
  cmd->add_option("--out", o.out, "output path (csv defaults to stdout)");
  cmd->add_option("--window", o.window, "theta_max phi_lo phi_hi: write only this part of the grid (csv)")
      ->expected(3)
      ->delimiter(',');
}

void write_output(const PhaseSpaceGrid& grid, const std::string& description, const OutputOptions& o,
                  const std::string& path) {
  if (!o.window.empty()) {
    if (o.format != "csv") throw UsageError("--window output is csv only");
    const GridWindow w = window_extract(grid, o.window[0], o.window[1], o.window[2]);
    if (path.empty()) {
      write_window_csv(std::cout, w);
    } else {
      std::ofstream f(path);
      if (!f) throw Error("cannot open " + path);
      write_window_csv(f, w);
    }
    return;
  }
  if (o.format == "bin") {
    if (path.empty()) throw UsageError("--out is required for binary output");
    write_grid_file(path, GridFile::from_grid(grid, description));
  } else if (path.empty()) {
    write_grid_csv(std::cout, grid);
  } else {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path);
    write_grid_csv(f, grid);
    if (!f) throw Error("write failed: " + path);
  }
}

struct ComputeArgs {
  StateInput state;
  SOptions s;
  int n = 0;
  std::string method = "c";
  std::string cache;
  unsigned threads = 1;
  OutputOptions output;
  std::string variable = "theta";
};

FourierTable coefficients_for(const ComplexMatrix& rho, double s, const ComputeArgs& a) {
  const auto dim = dimension_of(rho);
  if (a.method == "d") {
    const fs::path dir = resolve_cache(a.cache, dim.dim(), s);
    const KCache cache = KCache::open(dir);
    if (cache.manifest().d != dim.dim() || cache.s() != s) {
      throw IncompatibleCacheError("cache at " + dir.string() + " is for d = " + std::to_string(cache.manifest().d) +
                                   ", s = " + cache.manifest().s_text + "; requested d = " + std::to_string(dim.dim()) +
                                   ", s = " + format_s(s));
    }
    return fourier_coefficients_method_d(rho, cache);
  }
  MethodCOptions opts;
  opts.threads = a.threads;
  return fourier_coefficients_method_c(rho, build_parity(dim, s, a.s.allow_extended), jy_eigenbasis(dim), opts);
}

int run_compute(const ComputeArgs& a) {
  const double s = a.s.value();
  const LoadedState st = load_state(a.state);
  const auto dim = dimension_of(st.rho);
  const int n = a.n ? a.n : default_grid_size(dim);
  validate_grid_size(dim, n);
  const std::string description = st.description + " s=" + format_s(s) + " method=" + a.method;

  const PhaseSpaceGrid grid = [&] {
    if (a.method == "c" || a.method == "d") {
      return sample_fft(coefficients_for(st.rho, s, a), n, a.method == "c" ? MethodTag::method_c : MethodTag::method_d);
    }
    if (a.method == "b") {
      const CoefficientTable c = expansion_coefficients(st.rho);
      return sample_pointwise(dim, s, n, MethodTag::method_b,
                              [&](double t, double p) { return method_b_eval(c, s, t, p, a.s.allow_extended); });
    }
    const EigenBasis basis = jy_eigenbasis(dim);
    const ParityOperator parity = build_parity(dim, s, a.s.allow_extended);
    return sample_pointwise(dim, s, n, MethodTag::direct,
                            [&](double t, double p) { return direct_eval(st.rho, parity, basis, t, p); });
  }();
  write_output(grid, description, a.output, a.output.out);
  return 0;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
  if (path.empty()) return path;
  const fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

int run_deriv(const ComputeArgs& a) {
  const double s = a.s.value();
  const LoadedState st = load_state(a.state);
  const auto dim = dimension_of(st.rho);
  const int n = a.n ? a.n : default_grid_size(dim);
  validate_grid_size(dim, n);
  const FourierTable table = coefficients_for(st.rho, s, a);
  const MethodTag tag = a.method == "c" ? MethodTag::method_c : MethodTag::method_d;
  const std::string base = st.description + " s=" + format_s(s) + " method=" + a.method;

  if (a.variable == "grad" && a.output.out.empty()) throw UsageError("--variable grad needs --out (two files are written)");
  for (const auto* v : {"theta", "phi"}) {
    if (a.variable != v && a.variable != "grad") continue;
    const AngleVariable var = std::string(v) == "theta" ? AngleVariable::theta : AngleVariable::phi;
    const PhaseSpaceGrid g = sample_fft(derivative_coefficients(table, var), n, tag);
    const std::string path = a.variable == "grad" ? with_suffix(a.output.out, std::string("_d") + v) : a.output.out;
    write_output(g, base + " d/d" + v, a.output, path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical phase-space functions (Wigner, Husimi Q, Glauber P) of spin states on equiangular grids"};
  app.require_subcommand(1);

  // precompute
  int pre_dim = 0;
  SOptions pre_s;
  std::string pre_out;
  auto* pre = app.add_subcommand("precompute", "write the K_ell cache for one (d, s)");
  pre->add_option("--dim", pre_dim, "Hilbert-space dimension d = 2J + 1")->required()->check(CLI::Range(2, kMaxDim));
  add_s_options(pre, pre_s);
  pre->add_option("--out", pre_out, "cache directory (default: $SPS_CACHE_ROOT/d<d>_s<s>)");

  // compute
  ComputeArgs comp;
  auto* compute = app.add_subcommand("compute", "sample a phase-space function on the equiangular grid");
  add_state_options(compute, comp.state);
  add_s_options(compute, comp.s);
  compute->add_option("--n", comp.n, "grid size (even, >= 4J + 2; default max(512, next power of two))");
  compute->add_option("--method", comp.method, "c | d | b | direct")->check(CLI::IsMember({"c", "d", "b", "direct"}));
  compute->add_option("--cache", comp.cache, "cache directory for --method d");
  compute->add_option("--threads", comp.threads, "threads for the ell loop of method c")->check(CLI::Range(1u, 256u));
  add_output_options(compute, comp.output);

  // deriv
  ComputeArgs der;
  auto* deriv = app.add_subcommand("deriv", "sample d/dtheta, d/dphi or both from the Fourier coefficients");
  add_state_options(deriv, der.state);
  add_s_options(deriv, der.s);
  deriv->add_option("--n", der.n, "grid size");
  deriv->add_option("--method", der.method, "c | d")->check(CLI::IsMember({"c", "d"}));
  deriv->add_option("--cache", der.cache, "cache directory for --method d");
  deriv->add_option("--threads", der.threads, "threads for the ell loop of method c")->check(CLI::Range(1u, 256u));
  deriv->add_option("--variable", der.variable, "theta | phi | grad")->check(CLI::IsMember({"theta", "phi", "grad"}));
  add_output_options(deriv, der.output);

  // bench
  BenchOptions bopt;
  std::string bench_methods = "CD", bench_out, bench_root;
  auto* bench = app.add_subcommand("bench", "time the coefficient stage of methods B, C, D");
  bench->add_option("--dims", bopt.dims, "dimensions to time")->required()->delimiter(',')->check(CLI::Range(2, kMaxDim));
  bench->add_option("--methods", bench_methods, "subset of BCD");
  bench->add_option("--reps", bopt.repetitions, "repetitions per row (median reported)")->check(CLI::Range(1, 1000));
  bench->add_option("--s", bopt.s, "phase-space parameter");
  bench->add_option("--seed", bopt.seed, "seed of the random test state");
  bench->add_option("--threads", bopt.threads, "threads for method C")->check(CLI::Range(1u, 256u));
  bench->add_option("--cache-root", bench_root, "root of per-(d, s) caches (default $SPS_CACHE_ROOT)");
  bench->add_flag("--precompute", bopt.precompute_missing, "build missing method D caches");
  bench->add_option("--out", bench_out, "CSV report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*pre) {
      const double s = pre_s.value();
      const auto dim = SpinDimension::from_dim(pre_dim);
      const fs::path dir = pre_out.empty() ? resolve_cache("", pre_dim, s) : fs::path(pre_out);
      const PrecomputeReport r = precompute_cache(dim, s, dir, pre_s.allow_extended);
      std::printf("cache %s: d=%d s=%s\n", dir.string().c_str(), pre_dim, format_s(s).c_str());
      std::printf("K payload %llu bytes (%.4g kB), companion %llu bytes\n",
                  static_cast<unsigned long long>(r.k_payload_bytes), r.k_payload_bytes / 1000.0,
                  static_cast<unsigned long long>(r.companion_payload_bytes));
      if (r.already_valid) {
        std::printf("verified %d records, nothing rewritten\n", r.records_verified);
      } else {
        std::printf("wrote %d records, verified %d\n", r.records_written, r.records_verified);
      }
      return 0;
    }
    if (*compute) return run_compute(comp);
    if (*deriv) return run_deriv(der);
    if (*bench) {
      for (char& c : bench_methods) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      bopt.methods = bench_methods;
      if (!bench_root.empty()) {
        bopt.cache_root = bench_root;
      } else if (auto root = env_cache_root()) {
        bopt.cache_root = *root;
      } else if (bench_methods.find('D') != std::string::npos) {
        throw UsageError("method D needs --cache-root or SPS_CACHE_ROOT");
      }
      const BenchReport report = run_bench(bopt);
      if (bench_out.empty()) {
        report.write_csv(std::cout);
      } else {
        std::ofstream f(bench_out);
        if (!f) throw Error("cannot open " + bench_out);
        report.write_csv(f);
      }
      for (const auto& row : report.rows) {
        if (row.skipped) std::fprintf(stderr, "skipped %c d=%d: %s\n", row.method, row.d, row.note.c_str());
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "sps: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sps: %s\n", e.what());
    return 1;
  }
  return 0;
}
