#include "cbrn/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "cbrn/error.hpp"

namespace cbrn {

BinaryPattern::BinaryPattern(std::size_t width, std::size_t height)
    : width_(width), height_(height), bits_(width * height, 0) {}

BinaryPattern::BinaryPattern(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (bits_.size() != width_ * height_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pattern has " + std::to_string(bits_.size()) + " bits, expected " +
                    std::to_string(width_ * height_));
  }
  for (auto& b : bits_) {
    if (b > 1) throw Error(ErrorCode::kBadFormat, "pattern bits must be 0 or 1");
  }
}

std::size_t BinaryPattern::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double PatternVector::squared_norm() const noexcept {
  return std::inner_product(values_.begin(), values_.end(), values_.begin(), 0.0);
}

std::string_view to_string(Normalization mode) {
  return mode == Normalization::kL2 ? "l2" : "none";
}

Normalization parse_normalization(std::string_view text) {
  if (text == "l2") return Normalization::kL2;
  if (text == "none") return Normalization::kNone;
  throw Error(ErrorCode::kBadFormat, "unknown normalization mode '" + std::string(text) + "'");
}

PatternVector normalize(const BinaryPattern& pattern) {
  const std::size_t dark = pattern.popcount();
  if (dark == 0) {
    throw Error(ErrorCode::kDegeneratePattern, "cannot normalize an all-light pattern");
  }
  const double value = 1.0 / std::sqrt(static_cast<double>(dark));
  PatternVector out(pattern.size());
  auto bits = pattern.bits();
  for (std::size_t j = 0; j < bits.size(); ++j) {
    out[j] = bits[j] ? value : 0.0;
  }
  return out;
}

PatternVector to_vector(const BinaryPattern& pattern, Normalization mode) {
  if (mode == Normalization::kL2) return normalize(pattern);
  PatternVector out(pattern.size());
  auto bits = pattern.bits();
  for (std::size_t j = 0; j < bits.size(); ++j) out[j] = bits[j];
  return out;
}

BinaryPattern reconstruct(std::span<const double> values, std::size_t width, std::size_t height) {
  if (values.size() != width * height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "vector of length " + std::to_string(values.size()) + " cannot fill " +
                    std::to_string(width) + "x" + std::to_string(height));
  }
  BinaryPattern out(width, height);
  if (values.empty()) return out;
  const double peak = *std::max_element(values.begin(), values.end());
  if (!(peak > 0.0)) return out;
  const double cut = peak / 2.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] >= cut) out.set(j / width, j % width, true);
  }
  return out;
}

namespace {

// Tokenizer for the netpbm header: skips whitespace and '#' comments.
class PbmReader {
 public:
  explicit PbmReader(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view token() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '#') {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::size_t number(const char* what) {
    auto tok = token();
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || value == 0) {
      throw Error(ErrorCode::kBadFormat, std::string("PBM: bad ") + what + " '" + std::string(tok) + "'");
    }
    return value;
  }

  // Plain PBM allows bits with or without separating whitespace.
  int bit() {
    skip_space();
    if (pos_ >= text_.size()) return -1;
    char c = text_[pos_++];
    if (c == '0') return 0;
    if (c == '1') return 1;
    throw Error(ErrorCode::kBadFormat, std::string("PBM: invalid bit token '") + c + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

BinaryPattern parse_pbm(std::string_view text, std::optional<Shape> expected) {
  PbmReader reader(text);
  auto magic = reader.token();
  if (magic != "P1") {
    throw Error(ErrorCode::kBadFormat, "PBM: expected magic P1, got '" + std::string(magic) + "'");
  }
  const std::size_t width = reader.number("width");
  const std::size_t height = reader.number("height");
  if (expected && (expected->width != width || expected->height != height)) {
    throw Error(ErrorCode::kDimensionMismatch,
                "PBM is " + std::to_string(width) + "x" + std::to_string(height) + ", expected " +
                    std::to_string(expected->width) + "x" + std::to_string(expected->height));
  }
  std::vector<std::uint8_t> bits(width * height);
  for (auto& b : bits) {
    int v = reader.bit();
    if (v < 0) throw Error(ErrorCode::kTruncated, "PBM: fewer bits than width*height");
    b = static_cast<std::uint8_t>(v);
  }
  if (reader.bit() >= 0) throw Error(ErrorCode::kBadFormat, "PBM: trailing bits after raster");
  return BinaryPattern(width, height, std::move(bits));
}

std::string format_pbm(const BinaryPattern& pattern) {
  std::string out = "P1\n" + std::to_string(pattern.width()) + " " + std::to_string(pattern.height()) + "\n";
  out.reserve(out.size() + pattern.size() * 2);
  for (std::size_t r = 0; r < pattern.height(); ++r) {
    for (std::size_t c = 0; c < pattern.width(); ++c) {
      if (c) out.push_back(' ');
      out.push_back(pattern.at(r, c) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

BinaryPattern load_pbm(const std::filesystem::path& path, std::optional<Shape> expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pbm(buf.str(), expected);
}

void save_pbm(const BinaryPattern& pattern, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << format_pbm(pattern);
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace cbrn
