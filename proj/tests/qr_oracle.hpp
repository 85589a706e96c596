#pragma once

// Test-only reference for QR symbols. Shares no code with the encoder: field
// arithmetic is shift-and-add, the format code set comes from polynomial long
// division, and codewords are read back out of a finished symbol.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b);
std::uint8_t gf_pow(std::uint8_t base, unsigned exponent);

// c(alpha^i) for i < count, codeword[0] = highest-degree coefficient.
std::vector<std::uint8_t> syndromes(const std::vector<std::uint8_t>& codeword, std::size_t count);

// The 32 valid 15-bit format words (BCH(15,5), generator 0x537, XOR 0x5412).
std::vector<std::uint16_t> valid_format_words();

struct SymbolReport {
  bool finders = true;
  bool separators = true;
  bool timing = true;
  bool alignment = true;
  bool dark_module = true;
  bool format_valid = false;
  bool format_copies_agree = false;
  int ecc_bits = -1;  // 0b01 for level L
  int mask = -1;
  std::vector<std::uint8_t> codewords;  // de-masked, in placement order
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

// Content of a byte-mode segment at the start of the data codewords.
std::string decode_byte_mode(const std::vector<std::uint8_t>& data);

// Inspects a version-3 (29x29) symbol given as row-major dark flags.
SymbolReport inspect_v3(const std::vector<std::uint8_t>& modules);

}  // namespace oracle
