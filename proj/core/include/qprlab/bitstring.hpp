#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qprlab/errors.hpp"

namespace qprlab {

// Bit sequence with MSB-first packing. Fixed-width fields are appended and
// read in order; the serialized form is `len:<bits>;hex:<nibbles>` with
// unused low bits of the final byte set to zero.
class Bitstring {
 public:
  Bitstring() = default;

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool get(std::size_t i) const {
    return (bytes_[i >> 3] >> (7 - (i & 7))) & 1;
  }

  void push_back(bool bit) {
    if ((nbits_ & 7) == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(1u << (7 - (nbits_ & 7)));
    ++nbits_;
  }

  void append_field(std::uint64_t value, unsigned width) {
    for (unsigned i = width; i-- > 0;) push_back((value >> i) & 1);
  }

  std::uint64_t read_field(std::size_t pos, unsigned width) const {
    std::uint64_t v = 0;
    for (unsigned i = 0; i < width; ++i) v = (v << 1) | (get(pos + i) ? 1 : 0);
    return v;
  }

  bool operator==(const Bitstring& o) const {
    return nbits_ == o.nbits_ && bytes_ == o.bytes_;
  }
  bool operator!=(const Bitstring& o) const { return !(*this == o); }

  // Lexicographic comparison as a bit sequence (used for canonical ordering).
  bool operator<(const Bitstring& o) const {
    std::size_t n = nbits_ < o.nbits_ ? nbits_ : o.nbits_;
    for (std::size_t i = 0; i < n; ++i) {
      bool a = get(i), b = o.get(i);
      if (a != b) return !a;
    }
    return nbits_ < o.nbits_;
  }

  std::string to_string() const {
    static const char* hexdigits = "0123456789abcdef";
    std::string s = "len:" + std::to_string(nbits_) + ";hex:";
    for (std::uint8_t b : bytes_) {
      s += hexdigits[b >> 4];
      s += hexdigits[b & 0xf];
    }
    return s;
  }

  static Bitstring from_string(const std::string& s) {
    const std::string len_tag = "len:";
    const std::string hex_tag = ";hex:";
    if (s.rfind(len_tag, 0) != 0)
      throw ParseError("bitstring literal must start with 'len:'");
    std::size_t semi = s.find(hex_tag);
    if (semi == std::string::npos)
      throw ParseError("bitstring literal missing ';hex:' section");
    std::size_t nbits = 0;
    try {
      nbits = std::stoull(s.substr(len_tag.size(), semi - len_tag.size()));
    } catch (const std::exception&) {
      throw ParseError("bitstring literal has a malformed length");
    }
    std::string hex = s.substr(semi + hex_tag.size());
    if (hex.size() != 2 * ((nbits + 7) / 8))
      throw ParseError("bitstring hex payload does not match declared length");
    Bitstring out;
    out.nbits_ = nbits;
    out.bytes_.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
      out.bytes_.push_back(static_cast<std::uint8_t>(
          (hex_value(hex[i]) << 4) | hex_value(hex[i + 1])));
    // Reject nonzero padding so the mapping string<->bits is one-to-one.
    for (std::size_t i = nbits; i < 8 * out.bytes_.size(); ++i)
      if ((out.bytes_[i >> 3] >> (7 - (i & 7))) & 1)
        throw ParseError("bitstring has nonzero padding bits");
    return out;
  }

 private:
  static unsigned hex_value(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw ParseError("invalid hex digit in bitstring literal");
  }

  std::size_t nbits_ = 0;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace qprlab
