#include "cbrn/pipeline.hpp"

#include <random>

#include "cbrn/error.hpp"
#include "cbrn/qr.hpp"

namespace cbrn {

namespace {

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

Shape QrPatternProvider::shape() const { return {qr::kSize * scale_, qr::kSize * scale_}; }

BinaryPattern QrPatternProvider::make(std::string_view, std::string_view label) const {
  return qr::render(qr::encode_label(label), scale_);
}

BinaryPattern SeededPatternProvider::make(std::string_view group, std::string_view label) const {
  std::uint64_t key = fnv1a(label, fnv1a("\x1f", fnv1a(group)));
  std::mt19937_64 rng(seed_ ^ key);
  BinaryPattern out(shape_.width, shape_.height);
  std::uint64_t word = 0;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (j % 64 == 0) word = rng();
    if ((word >> (j % 64)) & 1u) out.set(j / shape_.width, j % shape_.width, true);
  }
  if (out.popcount() == 0 && out.size() > 0) out.set(0, 0, true);
  return out;
}

std::unique_ptr<PatternProvider> make_provider(std::string_view kind, std::uint64_t seed, Shape shape) {
  if (kind == "qr") {
    if (shape.width != shape.height || shape.width % qr::kSize != 0) {
      throw Error(ErrorCode::kInvalidConfig, "QR patterns need a square side that is a multiple of " +
                                                 std::to_string(qr::kSize));
    }
    return std::make_unique<QrPatternProvider>(shape.width / qr::kSize);
  }
  if (kind == "random") return std::make_unique<SeededPatternProvider>(seed, shape);
  throw Error(ErrorCode::kInvalidConfig, "unknown pattern provider '" + std::string(kind) + "'");
}

PatternVector present(const SystemConfig& config, const BinaryPattern& pattern) {
  if (pattern.width() != config.width || pattern.height() != config.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pattern is " + std::to_string(pattern.width()) + "x" + std::to_string(pattern.height()) +
                    ", model expects " + std::to_string(config.width) + "x" + std::to_string(config.height));
  }
  return to_vector(pattern, config.normalization);
}

std::vector<TrainRecord> train_catalog(MemorySystem& system, const PatternProvider& provider) {
  const auto& groups = system.catalog().groups();
  std::vector<TrainRecord> records;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i = 0; i < groups[g].labels.size(); ++i) {
      const auto& label = groups[g].labels[i];
      const PatternVector d = present(system.config(), provider.make(groups[g].name, label));
      records.push_back({{g, i}, groups[g].name, label, store_pattern(system, {g, i}, d)});
    }
  }
  return records;
}

BinaryPattern stored_bitmap(const MemorySystem& system, NeuronRef neuron) {
  neuron = system.ref(neuron.ball, neuron.neuron);
  const auto y = recall_forward(system.recall(neuron.ball), neuron.neuron);
  return reconstruct(y.values(), system.config().width, system.config().height);
}

}  // namespace cbrn
