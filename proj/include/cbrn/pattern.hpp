#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbrn {

inline constexpr std::size_t kDefaultSide = 116;
inline constexpr std::size_t kDefaultDim = kDefaultSide * kDefaultSide;  // 13,456

// Row-major dark(1)/light(0) pixel grid.
class BinaryPattern {
 public:
  BinaryPattern() = default;
  BinaryPattern(std::size_t width, std::size_t height);
  BinaryPattern(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(std::size_t row, std::size_t col) const { return bits_[row * width_ + col] != 0; }
  void set(std::size_t row, std::size_t col, bool dark) { bits_[row * width_ + col] = dark ? 1 : 0; }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  std::size_t popcount() const noexcept;

  friend bool operator==(const BinaryPattern&, const BinaryPattern&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> bits_;
};

// Real-valued presentation of a pattern to the Recall Net.
class PatternVector {
 public:
  PatternVector() = default;
  explicit PatternVector(std::size_t dim) : values_(dim, 0.0) {}
  explicit PatternVector(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }
  double& operator[](std::size_t j) { return values_[j]; }

  double squared_norm() const noexcept;

  friend bool operator==(const PatternVector&, const PatternVector&) = default;

 private:
  std::vector<double> values_;
};

enum class Normalization {
  kL2,    // d_j = bit_j / sqrt(popcount), so that sum d_j^2 = 1
  kNone,  // d_j = bit_j
};

std::string_view to_string(Normalization mode);
Normalization parse_normalization(std::string_view text);

// Throws kDegeneratePattern for an all-light pattern.
PatternVector normalize(const BinaryPattern& pattern);

PatternVector to_vector(const BinaryPattern& pattern, Normalization mode);

// Inverse display rule: a pixel is dark when y_j >= max(y) / 2. An all
// non-positive vector reconstructs as an all-light pattern.
BinaryPattern reconstruct(std::span<const double> values, std::size_t width, std::size_t height);

struct Shape {
  std::size_t width = kDefaultSide;
  std::size_t height = kDefaultSide;
};

// Plain PBM (P1).
BinaryPattern parse_pbm(std::string_view text, std::optional<Shape> expected = std::nullopt);
std::string format_pbm(const BinaryPattern& pattern);

BinaryPattern load_pbm(const std::filesystem::path& path, std::optional<Shape> expected = std::nullopt);
void save_pbm(const BinaryPattern& pattern, const std::filesystem::path& path);

}  // namespace cbrn
