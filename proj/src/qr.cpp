#include "cbrn/qr.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "cbrn/error.hpp"

namespace cbrn::qr {

namespace {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<unsigned, 256> log{};
};

constexpr Tables make_tables() {
  Tables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<std::uint8_t>(x);
    t.log[x] = i;
    x <<= 1;
    if (x & 0x100) x ^= Gf256::kPolynomial;
  }
  for (unsigned i = 255; i < t.exp.size(); ++i) t.exp[i] = t.exp[i - 255];
  return t;
}

constexpr Tables kTables = make_tables();

}  // namespace

std::uint8_t Gf256::exp(unsigned power) { return kTables.exp[power % 255]; }

unsigned Gf256::log(std::uint8_t value) { return kTables.log[value]; }

std::uint8_t Gf256::mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

std::vector<std::uint8_t> Codeword::bytes() const {
  std::vector<std::uint8_t> out(data);
  out.insert(out.end(), ecc.begin(), ecc.end());
  return out;
}

std::vector<std::uint8_t> rs_generator(std::size_t degree) {
  // Full coefficient list including the leading 1, highest degree first.
  std::vector<std::uint8_t> poly{1};
  for (std::size_t i = 0; i < degree; ++i) {
    const std::uint8_t root = Gf256::exp(static_cast<unsigned>(i));
    std::vector<std::uint8_t> next(poly.size() + 1, 0);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] ^= poly[k];
      next[k + 1] ^= Gf256::mul(poly[k], root);
    }
    poly = std::move(next);
  }
  poly.erase(poly.begin());
  return poly;
}

Codeword rs_encode(std::span<const std::uint8_t> data, std::size_t ecc_len) {
  const auto gen = rs_generator(ecc_len);
  std::vector<std::uint8_t> rem(ecc_len, 0);
  if (ecc_len > 0) {
    for (std::uint8_t b : data) {
      const std::uint8_t factor = b ^ rem[0];
      for (std::size_t i = 0; i + 1 < ecc_len; ++i) rem[i] = rem[i + 1] ^ Gf256::mul(gen[i], factor);
      rem[ecc_len - 1] = Gf256::mul(gen[ecc_len - 1], factor);
    }
  }
  return Codeword{std::vector<std::uint8_t>(data.begin(), data.end()), std::move(rem)};
}

std::vector<std::uint8_t> rs_syndromes(std::span<const std::uint8_t> codeword, std::size_t count) {
  std::vector<std::uint8_t> out(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t x = Gf256::exp(static_cast<unsigned>(i));
    std::uint8_t acc = 0;
    for (std::uint8_t c : codeword) acc = Gf256::mul(acc, x) ^ c;
    out[i] = acc;
  }
  return out;
}

std::size_t QrMatrix::dark_count() const {
  return static_cast<std::size_t>(std::count(modules.begin(), modules.end(), std::uint8_t{1}));
}

std::uint16_t format_bits(int mask) {
  // Level L is encoded as 01.
  const unsigned data = (0b01u << 3) | static_cast<unsigned>(mask & 7);
  unsigned rem = data;
  for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537u);
  return static_cast<std::uint16_t>(((data << 10) | (rem & 0x3FFu)) ^ 0x5412u);
}

std::vector<std::uint8_t> data_codewords(std::string_view label) {
  if (label.empty()) throw Error(ErrorCode::kEmptyLabel, "label must not be empty");
  if (label.size() > kMaxLabelBytes) {
    throw Error(ErrorCode::kLabelTooLong, "label of " + std::to_string(label.size()) +
                                              " bytes exceeds version-3-L capacity of " +
                                              std::to_string(kMaxLabelBytes));
  }
  std::vector<bool> bits;
  auto append = [&bits](unsigned value, int count) {
    for (int i = count - 1; i >= 0; --i) bits.push_back(((value >> i) & 1u) != 0);
  };
  append(0b0100, 4);  // byte mode
  append(static_cast<unsigned>(label.size()), 8);
  for (char c : label) append(static_cast<unsigned char>(c), 8);

  const std::size_t capacity = kDataCodewords * 8;
  append(0, static_cast<int>(std::min<std::size_t>(4, capacity - bits.size())));
  append(0, static_cast<int>((8 - bits.size() % 8) % 8));

  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < bits.size(); i += 8) {
    std::uint8_t byte = 0;
    for (std::size_t k = 0; k < 8; ++k) byte = static_cast<std::uint8_t>((byte << 1) | bits[i + k]);
    out.push_back(byte);
  }
  for (std::uint8_t pad = 0xEC; out.size() < kDataCodewords; pad ^= 0xEC ^ 0x11) out.push_back(pad);
  return out;
}

namespace {

class Builder {
 public:
  Builder() : dark_(kSize * kSize, 0), function_(kSize * kSize, 0) {
    draw_timing();
    draw_finder(3, 3);
    draw_finder(3, kSize - 4);
    draw_finder(kSize - 4, 3);
    draw_alignment(kAlignmentCenter, kAlignmentCenter);
    draw_format(0);  // reserves the format area
  }

  void place_codewords(std::span<const std::uint8_t> codewords) {
    std::size_t i = 0;
    const std::size_t total_bits = codewords.size() * 8;
    for (int right = static_cast<int>(kSize) - 1; right >= 1; right -= 2) {
      if (right == 6) right = 5;
      const bool upward = ((right + 1) & 2) == 0;
      for (std::size_t vert = 0; vert < kSize; ++vert) {
        for (int k = 0; k < 2; ++k) {
          const std::size_t col = static_cast<std::size_t>(right - k);
          const std::size_t row = upward ? kSize - 1 - vert : vert;
          if (!is_function(row, col) && i < total_bits) {
            set(row, col, ((codewords[i >> 3] >> (7 - (i & 7))) & 1) != 0);
            ++i;
          }
          // Remainder modules stay light.
        }
      }
    }
  }

  void apply_mask(int mask) {
    for (std::size_t r = 0; r < kSize; ++r) {
      for (std::size_t c = 0; c < kSize; ++c) {
        if (!is_function(r, c) && mask_condition(mask, r, c)) dark_[r * kSize + c] ^= 1;
      }
    }
  }

  void draw_format(int mask) {
    const unsigned bits = format_bits(mask);
    auto bit = [bits](int i) { return ((bits >> i) & 1u) != 0; };
    for (int i = 0; i <= 5; ++i) set_function(i, 8, bit(i));
    set_function(7, 8, bit(6));
    set_function(8, 8, bit(7));
    set_function(8, 7, bit(8));
    for (int i = 9; i < 15; ++i) set_function(8, 14 - i, bit(i));
    for (int i = 0; i < 8; ++i) set_function(8, kSize - 1 - i, bit(i));
    for (int i = 8; i < 15; ++i) set_function(kSize - 15 + i, 8, bit(i));
    set_function(kSize - 8, 8, true);
  }

  QrMatrix finish(int mask) const {
    QrMatrix m;
    m.mask = mask;
    m.modules = dark_;
    return m;
  }

  static bool mask_condition(int mask, std::size_t i, std::size_t j) {
    switch (mask) {
      case 0: return (i + j) % 2 == 0;
      case 1: return i % 2 == 0;
      case 2: return j % 3 == 0;
      case 3: return (i + j) % 3 == 0;
      case 4: return (i / 2 + j / 3) % 2 == 0;
      case 5: return (i * j) % 2 + (i * j) % 3 == 0;
      case 6: return ((i * j) % 2 + (i * j) % 3) % 2 == 0;
      case 7: return ((i + j) % 2 + (i * j) % 3) % 2 == 0;
      default: throw Error(ErrorCode::kInvalidConfig, "mask must be in 0..7");
    }
  }

 private:
  bool is_function(std::size_t r, std::size_t c) const { return function_[r * kSize + c] != 0; }
  void set(std::size_t r, std::size_t c, bool dark) { dark_[r * kSize + c] = dark ? 1 : 0; }
  void set_function(std::size_t r, std::size_t c, bool dark) {
    set(r, c, dark);
    function_[r * kSize + c] = 1;
  }

  void draw_timing() {
    for (std::size_t i = 0; i < kSize; ++i) {
      set_function(6, i, i % 2 == 0);
      set_function(i, 6, i % 2 == 0);
    }
  }

  // 7x7 finder plus its one-module light separator, clipped at the border.
  void draw_finder(int cr, int cc) {
    for (int dr = -4; dr <= 4; ++dr) {
      for (int dc = -4; dc <= 4; ++dc) {
        const int r = cr + dr;
        const int c = cc + dc;
        if (r < 0 || c < 0 || r >= static_cast<int>(kSize) || c >= static_cast<int>(kSize)) continue;
        const int dist = std::max(std::abs(dr), std::abs(dc));
        set_function(static_cast<std::size_t>(r), static_cast<std::size_t>(c), dist != 2 && dist != 4);
      }
    }
  }

  void draw_alignment(std::size_t cr, std::size_t cc) {
    for (int dr = -2; dr <= 2; ++dr) {
      for (int dc = -2; dc <= 2; ++dc) {
        set_function(static_cast<std::size_t>(static_cast<int>(cr) + dr), static_cast<std::size_t>(static_cast<int>(cc) + dc), std::max(std::abs(dr), std::abs(dc)) != 1);
      }
    }
  }

  std::vector<std::uint8_t> dark_;
  std::vector<std::uint8_t> function_;
};

int run_penalty(const std::vector<std::uint8_t>& line) {
  int score = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= line.size(); ++i) {
    if (i < line.size() && line[i] == line[i - 1]) {
      ++run;
      continue;
    }
    if (run >= 5) score += 3 + static_cast<int>(run - 5);
    run = 1;
  }
  return score;
}

// Dark-light-dark(3)-light-dark core with four light modules on at least
// one side; modules beyond the symbol edge count as light.
int finder_like_penalty(const std::vector<std::uint8_t>& line) {
  static constexpr std::array<std::uint8_t, 7> kCore{1, 0, 1, 1, 1, 0, 1};
  const int n = static_cast<int>(line.size());
  auto light_span = [&](int from, int to) {
    for (int i = std::max(from, 0); i < std::min(to, n); ++i) {
      if (line[static_cast<std::size_t>(i)]) return false;
    }
    return true;
  };
  int score = 0;
  for (int x = 0; x + 7 <= n; ++x) {
    if (!std::equal(kCore.begin(), kCore.end(), line.begin() + x)) continue;
    if (light_span(x - 4, x) || light_span(x + 7, x + 11)) score += 40;
  }
  return score;
}

}  // namespace

int penalty(const QrMatrix& m) {
  const std::size_t n = m.size;
  int score = 0;
  std::vector<std::uint8_t> line(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) line[c] = m.modules[r * n + c];
    score += run_penalty(line) + finder_like_penalty(line);
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = 0; r < n; ++r) line[r] = m.modules[r * n + c];
    score += run_penalty(line) + finder_like_penalty(line);
  }
  for (std::size_t r = 0; r + 1 < n; ++r) {
    for (std::size_t c = 0; c + 1 < n; ++c) {
      const auto v = m.modules[r * n + c];
      if (v == m.modules[r * n + c + 1] && v == m.modules[(r + 1) * n + c] && v == m.modules[(r + 1) * n + c + 1]) {
        score += 3;
      }
    }
  }
  const long total = static_cast<long>(n * n);
  const long dark = static_cast<long>(m.dark_count());
  score += 10 * static_cast<int>(std::labs(20 * dark - 10 * total) / total);
  return score;
}

QrMatrix encode_label(std::string_view label, std::optional<int> forced_mask) {
  const auto data = data_codewords(label);
  const auto codewords = rs_encode(data, kEccCodewords).bytes();

  Builder base;
  base.place_codewords(codewords);

  auto build = [&base](int mask) {
    Builder b = base;
    b.apply_mask(mask);
    b.draw_format(mask);
    return b.finish(mask);
  };

  if (forced_mask) {
    if (*forced_mask < 0 || *forced_mask > 7) throw Error(ErrorCode::kInvalidConfig, "mask must be in 0..7");
    return build(*forced_mask);
  }
  QrMatrix best;
  int best_score = std::numeric_limits<int>::max();
  for (int mask = 0; mask < 8; ++mask) {
    QrMatrix candidate = build(mask);
    const int score = penalty(candidate);
    if (score < best_score) {
      best_score = score;
      best = std::move(candidate);
    }
  }
  return best;
}

BinaryPattern render(const QrMatrix& matrix, std::size_t scale) {
  if (scale == 0) throw Error(ErrorCode::kInvalidConfig, "scale must be at least 1");
  const std::size_t side = matrix.size * scale;
  BinaryPattern out(side, side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      if (matrix.at(r / scale, c / scale)) out.set(r, c, true);
    }
  }
  return out;
}

}  // namespace cbrn::qr
