#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cbrn/pattern.hpp"

// Byte-mode QR encoder fixed at version 3, error-correction level L. That
// symbol is 29x29 modules, which renders to exactly 116x116 pixels at four
// pixels per module without a quiet zone.
namespace cbrn::qr {

inline constexpr int kVersion = 3;
inline constexpr std::size_t kSize = 4 * kVersion + 17;  // 29
inline constexpr std::size_t kDataCodewords = 55;
inline constexpr std::size_t kEccCodewords = 15;
inline constexpr std::size_t kTotalCodewords = kDataCodewords + kEccCodewords;
// 4-bit mode indicator + 8-bit character count leave 53 bytes of content.
inline constexpr std::size_t kMaxLabelBytes = (kDataCodewords * 8 - 12) / 8;
inline constexpr std::size_t kAlignmentCenter = 22;
inline constexpr std::size_t kDefaultScale = 4;

// GF(2^8) with the QR field polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D).
class Gf256 {
 public:
  static constexpr unsigned kPolynomial = 0x11D;

  static std::uint8_t exp(unsigned power);
  static unsigned log(std::uint8_t value);  // value must be nonzero
  static std::uint8_t mul(std::uint8_t a, std::uint8_t b);
};

struct Codeword {
  std::vector<std::uint8_t> data;
  std::vector<std::uint8_t> ecc;

  std::vector<std::uint8_t> bytes() const;
};

// Monic generator polynomial prod_{i<degree} (x - alpha^i), highest degree
// first, leading 1 omitted.
std::vector<std::uint8_t> rs_generator(std::size_t degree);

// Systematic Reed-Solomon encoding: ecc is the remainder of data(x) * x^ecc_len
// divided by the generator.
Codeword rs_encode(std::span<const std::uint8_t> data, std::size_t ecc_len = kEccCodewords);

// S_i = c(alpha^i) for i in [0, count), with codeword[0] the highest-degree
// coefficient. All zero for a valid codeword.
std::vector<std::uint8_t> rs_syndromes(std::span<const std::uint8_t> codeword, std::size_t count = kEccCodewords);

struct QrMatrix {
  int version = kVersion;
  std::size_t size = kSize;
  char ecc_level = 'L';
  int mask = 0;
  std::vector<std::uint8_t> modules;  // row-major, dark = 1

  bool at(std::size_t row, std::size_t col) const { return modules[row * size + col] != 0; }
  std::size_t dark_count() const;

  friend bool operator==(const QrMatrix&, const QrMatrix&) = default;
};

// 15-bit format word (level L + mask, BCH(15,5) protected, XOR 0x5412).
std::uint16_t format_bits(int mask);

// Data codewords for a byte-mode segment: header, content, terminator,
// alternating 0xEC/0x11 padding.
std::vector<std::uint8_t> data_codewords(std::string_view label);

// Throws kEmptyLabel or kLabelTooLong. With forced_mask unset, the mask with
// the lowest penalty is chosen (lowest index on ties).
QrMatrix encode_label(std::string_view label, std::optional<int> forced_mask = std::nullopt);

// Standard four-rule mask penalty of a finished symbol.
int penalty(const QrMatrix& matrix);

// Each module becomes a scale x scale block. Throws kInvalidConfig for scale 0.
BinaryPattern render(const QrMatrix& matrix, std::size_t scale = kDefaultScale);

}  // namespace cbrn::qr
