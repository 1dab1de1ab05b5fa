#pragma once

// Little-endian encoding helpers shared by the cache and grid file codecs.

#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <zlib.h>

namespace sps::binary {

template <typename T>
T byteswap_if_big(T value) {
  if constexpr (std::endian::native == std::endian::little) {
    return value;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }
}

class Writer {
 public:
  template <typename T>
  void put(T value) {
    value = byteswap_if_big(value);
    const auto* p = reinterpret_cast<const unsigned char*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }

  void put_bytes(std::span<const unsigned char> data) { bytes_.insert(bytes_.end(), data.begin(), data.end()); }
  void put_string(const std::string& s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }

  /// Interleaved (re, im) doubles.
  void put_complex(std::span<const std::complex<double>> values) {
    if constexpr (std::endian::native == std::endian::little) {
      const auto* p = reinterpret_cast<const unsigned char*>(values.data());
      bytes_.insert(bytes_.end(), p, p + values.size() * sizeof(std::complex<double>));
    } else {
      for (const auto& v : values) {
        put(v.real());
        put(v.imag());
      }
    }
  }

  std::size_t size() const { return bytes_.size(); }
  const std::vector<unsigned char>& bytes() const { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  bool can_read(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  template <typename T>
  T get() {
    T value;
    std::memcpy(&value, take(sizeof(T)).data(), sizeof(T));
    return byteswap_if_big(value);
  }

  std::span<const unsigned char> take(std::size_t n) {
    if (!can_read(n)) throw std::out_of_range("binary reader: truncated input");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  void get_complex(std::span<std::complex<double>> out) {
    auto raw = take(out.size() * sizeof(std::complex<double>));
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(out.data(), raw.data(), raw.size());
    } else {
      Reader inner(raw);
      for (auto& v : out) {
        const double re = inner.get<double>();
        const double im = inner.get<double>();
        v = {re, im};
      }
    }
  }

 private:
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

inline std::uint32_t crc32(std::span<const unsigned char> data) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  constexpr std::size_t kChunk = std::size_t{1} << 30;
  for (std::size_t off = 0; off < data.size(); off += kChunk) {
    const std::size_t len = std::min(kChunk, data.size() - off);
    crc = ::crc32(crc, data.data() + off, static_cast<uInt>(len));
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace sps::binary
