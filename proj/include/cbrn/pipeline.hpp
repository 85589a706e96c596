#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cbrn/memory.hpp"
#include "cbrn/pattern.hpp"

namespace cbrn {

// Source of the bit pattern that stands for a catalog label.
class PatternProvider {
 public:
  virtual ~PatternProvider() = default;
  virtual Shape shape() const = 0;
  virtual BinaryPattern make(std::string_view group, std::string_view label) const = 0;
};

// Label -> QR symbol rendered at `scale` pixels per module.
class QrPatternProvider final : public PatternProvider {
 public:
  explicit QrPatternProvider(std::size_t scale = 4) : scale_(scale) {}
  Shape shape() const override;
  BinaryPattern make(std::string_view group, std::string_view label) const override;

 private:
  std::size_t scale_;
};

// Deterministic ~50% density noise keyed on (seed, group, label). Lets the
// memory model be exercised without depending on the QR encoder.
class SeededPatternProvider final : public PatternProvider {
 public:
  SeededPatternProvider(std::uint64_t seed, Shape shape) : seed_(seed), shape_(shape) {}
  Shape shape() const override { return shape_; }
  BinaryPattern make(std::string_view group, std::string_view label) const override;

 private:
  std::uint64_t seed_;
  Shape shape_;
};

std::unique_ptr<PatternProvider> make_provider(std::string_view kind, std::uint64_t seed, Shape shape);

// Converts a pattern to the Recall Net presentation configured for `system`.
PatternVector present(const SystemConfig& config, const BinaryPattern& pattern);

struct TrainRecord {
  NeuronRef neuron;
  std::string group;
  std::string label;
  StoreReport report;
};

// Stores every catalog label in its group's Cue Ball, group by group.
std::vector<TrainRecord> train_catalog(MemorySystem& system, const PatternProvider& provider);

// Stored pattern of a neuron, thresholded back to a bitmap.
BinaryPattern stored_bitmap(const MemorySystem& system, NeuronRef neuron);

}  // namespace cbrn
