#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sps/sampling.hpp"

namespace sps {

/// Malformed or corrupted grid/matrix file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Binary container for grids and matrices:
///   "SWPG" | u32 version | u32 d | f64 s | u32 n | u8 method | u16 len | description
///   | n x n interleaved (re, im) f64, row-major | u32 CRC-32(payload)
/// all little-endian. A matrix file stores n = d and method 'm'.
struct GridFile {
  static constexpr std::uint32_t kFormatVersion = 1;

  SpinDimension dim = SpinDimension::from_two_j(1);
  double s = 0.0;
  int n = 0;
  MethodTag method = MethodTag::method_c;
  std::string description;
  ComplexMatrix values;

  static GridFile from_grid(const PhaseSpaceGrid& grid, std::string description);
  static GridFile from_matrix(const ComplexMatrix& rho, std::string description);
  PhaseSpaceGrid to_grid() const;

  std::vector<unsigned char> encode() const;
  static GridFile decode(std::span<const unsigned char> bytes);
};

void write_grid_file(const std::filesystem::path& path, const GridFile& file);
GridFile read_grid_file(const std::filesystem::path& path);

/// `theta,phi,re,im` rows with 17 significant digits.
void write_grid_csv(std::ostream& out, const PhaseSpaceGrid& grid);
void write_window_csv(std::ostream& out, const GridWindow& window);

/// `row,col,re,im` rows; entries not listed are zero. The dimension is the
/// largest index + 1 unless `dim` is given.
ComplexMatrix read_matrix_csv(std::istream& in, int dim = 0);
void write_matrix_csv(std::ostream& out, const ComplexMatrix& rho);

/// Loads a matrix from either the binary container or CSV, by content.
ComplexMatrix read_matrix_file(const std::filesystem::path& path);

}  // namespace sps
