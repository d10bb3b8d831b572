#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vews/error.hpp"

namespace vews::detail {

inline std::string base64_encode(const unsigned char* data, std::size_t len) {
  static const char* table = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((len + 2) / 3 * 4);
  for (std::size_t i = 0; i < len; i += 3) {
    std::uint32_t v = data[i] << 16;
    if (i + 1 < len) v |= data[i + 1] << 8;
    if (i + 2 < len) v |= data[i + 2];
    out += table[(v >> 18) & 63];
    out += table[(v >> 12) & 63];
    out += i + 1 < len ? table[(v >> 6) & 63] : '=';
    out += i + 2 < len ? table[v & 63] : '=';
  }
  return out;
}

inline std::vector<unsigned char> base64_decode(const std::string& text) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<unsigned char> out;
  out.reserve(text.size() / 4 * 3);
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=') break;
    const int v = value_of(c);
    if (v < 0) throw DataError("invalid base64 payload");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
    }
  }
  return out;
}

/// Doubles serialized as raw IEEE-754 little-endian bytes, so reloading is
/// bit-exact.
inline std::string encode_doubles(const double* data, std::size_t count) {
  return base64_encode(reinterpret_cast<const unsigned char*>(data), count * sizeof(double));
}

inline std::string encode_matrix(const Eigen::MatrixXd& m) {
  return encode_doubles(m.data(), static_cast<std::size_t>(m.size()));
}

inline std::string encode_vector(const Eigen::VectorXd& v) {
  return encode_doubles(v.data(), static_cast<std::size_t>(v.size()));
}

inline void decode_doubles(const std::string& text, double* out, std::size_t count) {
  const auto bytes = base64_decode(text);
  if (bytes.size() != count * sizeof(double)) {
    throw DataError("parameter payload has wrong size");
  }
  std::memcpy(out, bytes.data(), bytes.size());
}

inline Eigen::MatrixXd decode_matrix(const std::string& text, Eigen::Index rows,
                                     Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  decode_doubles(text, m.data(), static_cast<std::size_t>(m.size()));
  return m;
}

inline Eigen::VectorXd decode_vector(const std::string& text, Eigen::Index size) {
  Eigen::VectorXd v(size);
  decode_doubles(text, v.data(), static_cast<std::size_t>(v.size()));
  return v;
}

}  // namespace vews::detail
