#include "sps/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "sps/binary.hpp"

namespace sps {

namespace {

constexpr char kMagic[4] = {'S', 'W', 'P', 'G'};

bool known_tag(std::uint8_t t) {
  switch (static_cast<MethodTag>(t)) {
    case MethodTag::method_b:
    case MethodTag::method_c:
    case MethodTag::method_d:
    case MethodTag::direct:
    case MethodTag::matrix:
      return true;
  }
  return false;
}

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view field, int line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size()) {
    throw FormatError("matrix csv line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

GridFile GridFile::from_grid(const PhaseSpaceGrid& grid, std::string description) {
  GridFile f;
  f.dim = grid.dim;
  f.s = grid.s;
  f.n = grid.n;
  f.method = grid.method;
  f.description = std::move(description);
  f.values = grid.values;
  return f;
}

GridFile GridFile::from_matrix(const ComplexMatrix& rho, std::string description) {
  GridFile f;
  f.dim = dimension_of(rho);
  f.n = f.dim.dim();
  f.method = MethodTag::matrix;
  f.description = std::move(description);
  f.values = rho;
  return f;
}

PhaseSpaceGrid GridFile::to_grid() const {
  if (method == MethodTag::matrix) throw FormatError("file holds a matrix, not a grid");
  return PhaseSpaceGrid{dim, s, n, method, values};
}

std::vector<unsigned char> GridFile::encode() const {
  if (values.rows() != n || values.cols() != n) throw DimensionMismatch("GridFile: values are not n x n");
  if (description.size() > 0xFFFF) throw FormatError("GridFile: description longer than 65535 bytes");

  // Payload row-major over (k, l).
  using RowMajor = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor rows = values;
  binary::Writer payload;
  payload.put_complex({rows.data(), static_cast<std::size_t>(rows.size())});

  binary::Writer w;
  w.put_bytes({reinterpret_cast<const unsigned char*>(kMagic), 4});
  w.put<std::uint32_t>(kFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(dim.dim()));
  w.put<double>(s);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(n));
  w.put<std::uint8_t>(static_cast<std::uint8_t>(method));
  w.put<std::uint16_t>(static_cast<std::uint16_t>(description.size()));
  w.put_string(description);
  w.put_bytes(payload.bytes());
  w.put<std::uint32_t>(binary::crc32(payload.bytes()));
  return w.bytes();
}

GridFile GridFile::decode(std::span<const unsigned char> bytes) {
  try {
    binary::Reader r(bytes);
    auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic)) throw FormatError("not a grid file (bad magic)");
    const auto version = r.get<std::uint32_t>();
    if (version != kFormatVersion) throw FormatError("unsupported grid file version " + std::to_string(version));

    GridFile f;
    const auto d = r.get<std::uint32_t>();
    if (d < 2) throw FormatError("grid file: invalid d");
    f.dim = SpinDimension::from_dim(static_cast<int>(d));
    f.s = r.get<double>();
    f.n = static_cast<int>(r.get<std::uint32_t>());
    const auto tag = r.get<std::uint8_t>();
    if (!known_tag(tag)) throw FormatError("grid file: unknown method tag");
    f.method = static_cast<MethodTag>(tag);
    const auto len = r.get<std::uint16_t>();
    auto desc = r.take(len);
    f.description.assign(desc.begin(), desc.end());

    const std::size_t count = static_cast<std::size_t>(f.n) * static_cast<std::size_t>(f.n);
    if (r.remaining() != count * 16 + 4) throw FormatError("grid file: payload size does not match n");
    auto payload = r.take(count * 16);
    const auto stored = r.get<std::uint32_t>();
    if (binary::crc32(payload) != stored) throw FormatError("grid file: payload checksum mismatch");

    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(f.n, f.n);
    binary::Reader(payload).get_complex({rows.data(), count});
    f.values = rows;
    return f;
  } catch (const std::out_of_range&) {
    throw FormatError("grid file truncated");
  }
}

void write_grid_file(const std::filesystem::path& path, const GridFile& file) {
  const auto bytes = file.encode();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

GridFile read_grid_file(const std::filesystem::path& path) { return GridFile::decode(slurp(path)); }

void write_grid_csv(std::ostream& out, const PhaseSpaceGrid& grid) {
  out << "theta,phi,re,im\n";
  for (int k = 0; k < grid.n; ++k) {
    for (int l = 0; l < grid.n; ++l) {
      const Complex v = grid.values(k, l);
      out << fmt17(grid.theta(k)) << ',' << fmt17(grid.phi(l)) << ',' << fmt17(v.real()) << ','
          << fmt17(v.imag()) << '\n';
    }
  }
}

void write_window_csv(std::ostream& out, const GridWindow& window) {
  out << "theta,phi,re,im\n";
  for (std::size_t r = 0; r < window.rows.size(); ++r) {
    for (std::size_t c = 0; c < window.cols.size(); ++c) {
      const Complex v = window.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      out << fmt17(window.thetas[r]) << ',' << fmt17(window.phis[c]) << ',' << fmt17(v.real()) << ','
          << fmt17(v.imag()) << '\n';
    }
  }
}

ComplexMatrix read_matrix_csv(std::istream& in, int dim) {
  struct Entry {
    int row, col;
    Complex v;
  };
  std::vector<Entry> entries;
  std::string line;
  int lineno = 0;
  int max_index = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("row", 0) == 0) continue;  // header
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 4) throw FormatError("matrix csv line " + std::to_string(lineno) + ": expected 4 fields");
    const double row = parse_double(fields[0], lineno);
    const double col = parse_double(fields[1], lineno);
    if (row < 0 || col < 0 || row != std::floor(row) || col != std::floor(col)) {
      throw FormatError("matrix csv line " + std::to_string(lineno) + ": bad index");
    }
    Entry e{static_cast<int>(row), static_cast<int>(col),
            Complex(parse_double(fields[2], lineno), parse_double(fields[3], lineno))};
    max_index = std::max({max_index, e.row, e.col});
    entries.push_back(e);
  }
  const int d = dim > 0 ? dim : max_index + 1;
  if (d < 2) throw FormatError("matrix csv: dimension below 2");
  if (max_index >= d) throw FormatError("matrix csv: index exceeds the given dimension");
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (const auto& e : entries) rho(e.row, e.col) = e.v;
  return rho;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& rho) {
  out << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      out << r << ',' << c << ',' << fmt17(rho(r, c).real()) << ',' << fmt17(rho(r, c).imag()) << '\n';
    }
  }
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
  if (bytes.size() >= 4 && std::equal(kMagic, kMagic + 4, bytes.begin())) {
    GridFile f = GridFile::decode(bytes);
    if (f.method != MethodTag::matrix) throw FormatError(path.string() + " holds a grid, not a matrix");
    return f.values;
  }
  std::istringstream in(std::string(bytes.begin(), bytes.end()));
  return read_matrix_csv(in);
}

}  // namespace sps
