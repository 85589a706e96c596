#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbrn/catalog.hpp"
#include "cbrn/pattern.hpp"

namespace cbrn {

struct SystemConfig {
  std::size_t width = kDefaultSide;
  std::size_t height = kDefaultSide;
  double eps_w = 1.0;      // recall-weight learning rate
  double eps_v = 1.0;      // cue-weight learning rate
  double lambda_cb = 1.0;  // cross-ball learning rate
  double theta = 100.0;    // learning value: target pre-threshold output
  double threshold = 72.0; // firing threshold D
  int epochs = 1;
  Normalization normalization = Normalization::kL2;

  std::size_t dim() const noexcept { return width * height; }
  Shape shape() const noexcept { return {width, height}; }

  // Throws kInvalidConfig unless rates > 0, theta > threshold > 0, epochs >= 1
  // and the pattern area is non-empty.
  void validate() const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

// Recall-to-cue weights of one attribute group: row i holds v_{i.}.
class CueBall {
 public:
  CueBall() = default;
  CueBall(std::string name, std::size_t neurons, std::size_t dim);

  const std::string& name() const noexcept { return name_; }
  std::size_t neurons() const noexcept { return neurons_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> weights() const noexcept { return v_; }
  std::span<const double> row(std::size_t i) const;
  std::span<double> row(std::size_t i);

  friend bool operator==(const CueBall&, const CueBall&) = default;

 private:
  std::string name_;
  std::size_t neurons_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> v_;
};

// Cue-to-recall weights of one attribute group: row i holds w_{.i}, the
// pattern stored by cue neuron i.
class RecallBank {
 public:
  RecallBank() = default;
  RecallBank(std::size_t neurons, std::size_t dim);

  std::size_t neurons() const noexcept { return neurons_; }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> row(std::size_t i) const;
  std::span<double> row(std::size_t i);

  friend bool operator==(const RecallBank&, const RecallBank&) = default;

 private:
  std::size_t neurons_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> w_;
};

struct NeuronRef {
  std::size_t ball = 0;
  std::size_t neuron = 0;

  friend auto operator<=>(const NeuronRef&, const NeuronRef&) = default;
};

// Directed cue-to-cue connection; untrained pairs are implicitly zero.
struct LinkKey {
  NeuronRef from;
  NeuronRef to;

  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

class CrossLinks {
 public:
  double weight(const LinkKey& key) const;
  double& at(const LinkKey& key) { return u_[key]; }
  const std::map<LinkKey, double>& entries() const noexcept { return u_; }
  std::size_t size() const noexcept { return u_.size(); }

  friend bool operator==(const CrossLinks&, const CrossLinks&) = default;

 private:
  std::map<LinkKey, double> u_;
};

// Cue Balls, their Recall Net connections and the cross-ball links. One Cue
// Ball per catalog group, one cue neuron per label; all weights start at 0.
class MemorySystem {
 public:
  MemorySystem(SystemConfig config, AttributeCatalog catalog);

  const SystemConfig& config() const noexcept { return config_; }
  const AttributeCatalog& catalog() const noexcept { return catalog_; }

  std::size_t ball_count() const noexcept { return cue_.size(); }
  std::size_t ball_index(std::string_view name) const;
  NeuronRef ref(std::size_t ball, std::size_t neuron) const;  // range-checked

  const CueBall& cue(std::size_t ball) const { return cue_.at(ball); }
  CueBall& cue(std::size_t ball) { return cue_.at(ball); }
  const RecallBank& recall(std::size_t ball) const { return recall_.at(ball); }
  RecallBank& recall(std::size_t ball) { return recall_.at(ball); }
  const CrossLinks& links() const noexcept { return links_; }
  CrossLinks& links() noexcept { return links_; }

  friend bool operator==(const MemorySystem&, const MemorySystem&) = default;

 private:
  SystemConfig config_;
  AttributeCatalog catalog_;
  std::vector<CueBall> cue_;
  std::vector<RecallBank> recall_;
  CrossLinks links_;
};

// Per-epoch diagnostics of a delta-rule update. errors[t] is the error before
// step t; final_error is measured after the last step.
struct LearnReport {
  std::vector<double> errors;
  std::vector<double> max_abs_deltas;
  double final_error = 0.0;
};

struct CueResponse {
  std::vector<double> q;
  std::vector<std::size_t> fired;
  std::size_t argmax = 0;  // lowest index among maxima
};

struct CrossResponse {
  std::vector<double> q;
  std::vector<std::size_t> fired;
  std::size_t argmax = 0;
};

struct CrossDirectionReport {
  LinkKey link;
  double z = 0.0;  // thresholded output of the source neuron
  LearnReport learn;
  double weight = 0.0;
};

struct CrossLearnReport {
  CrossDirectionReport forward;   // a -> b
  CrossDirectionReport backward;  // b -> a
};

struct StoreReport {
  LearnReport recall;
  LearnReport cue;
};

struct Association {
  PatternVector recalled;
  std::size_t from_neuron = 0;
  std::size_t to_neuron = 0;
  double from_q = 0.0;
  double to_q = 0.0;
};

// E = 1/2 sum_j (d_j - y_j)^2
double recall_error(std::span<const double> target, std::span<const double> output);
// e = 1/2 sum_i (theta - q_i)^2, also used for the cross-ball error
double cue_error(double theta, std::span<const double> q);

// y_j = w_{j,neuron} with x_neuron = 1; no sum over other cue neurons.
PatternVector recall_forward(const RecallBank& bank, std::size_t neuron);

// Delta rule on row `neuron` with x fixed at 1: w += eps_w (d - y).
LearnReport learn_recall_weights(RecallBank& bank, std::size_t neuron, const PatternVector& target,
                                 const SystemConfig& config);

// q_i = sum_j v_ij probe_j; fired = {i : q_i >= threshold}.
CueResponse cue_response(const CueBall& ball, const PatternVector& probe, double threshold);

// Delta rule on row `neuron`: v += eps_v (theta - q) y. The reported error is
// the trained neuron's term of e.
LearnReport learn_cue_weights(CueBall& ball, std::size_t neuron, const PatternVector& y, const SystemConfig& config);

// Learns the recall weights of one neuron on `pattern`, then its cue weights
// on the resulting recall output.
StoreReport store_pattern(MemorySystem& system, NeuronRef neuron, const PatternVector& pattern);

// Responses q_l of every neuron in `to_ball` when only `from` outputs z.
CrossResponse cross_response(const MemorySystem& system, NeuronRef from, std::size_t to_ball, double threshold,
                             double z = 1.0);

// Trains u in both directions between a and b. The source output z is
// obtained by presenting the source neuron's stored pattern to its own ball;
// an unrecognized source raises kNoRecognition.
CrossLearnReport learn_cross_weights(MemorySystem& system, NeuronRef a, NeuronRef b);

// Recognize `probe` in from_ball, follow the strongest firing cross link into
// to_ball and recall that neuron's pattern.
Association associate(const MemorySystem& system, std::size_t from_ball, const PatternVector& probe,
                      std::size_t to_ball);

}  // namespace cbrn
