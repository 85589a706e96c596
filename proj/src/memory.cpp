#include "cbrn/memory.hpp"

#include <algorithm>
#include <string>

#include "cbrn/error.hpp"
#include "cbrn/kernels.hpp"

namespace cbrn {

namespace {

namespace k = kernels::parallel;

void check_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + " has dimension " + std::to_string(got) +
                                                   ", expected " + std::to_string(want));
  }
}

void check_neuron(std::size_t neuron, std::size_t count) {
  if (neuron >= count) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "neuron " + std::to_string(neuron) + " out of range (ball has " + std::to_string(count) + ")");
  }
}

template <typename Response>
Response threshold_response(std::vector<double> q, double threshold) {
  Response r;
  r.q = std::move(q);
  for (std::size_t i = 0; i < r.q.size(); ++i) {
    if (r.q[i] >= threshold) r.fired.push_back(i);
    if (r.q[i] > r.q[r.argmax]) r.argmax = i;
  }
  return r;
}

}  // namespace

void SystemConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::kInvalidConfig, msg); };
  if (width == 0 || height == 0) fail("pattern width and height must be positive");
  if (!(eps_w > 0.0) || !(eps_v > 0.0) || !(lambda_cb > 0.0)) fail("learning rates must be positive");
  if (!(threshold > 0.0)) fail("threshold must be positive");
  if (!(theta > threshold)) fail("theta must exceed the threshold");
  if (epochs < 1) fail("epochs must be at least 1");
}

CueBall::CueBall(std::string name, std::size_t neurons, std::size_t dim)
    : name_(std::move(name)), neurons_(neurons), dim_(dim), v_(neurons * dim, 0.0) {}

std::span<const double> CueBall::row(std::size_t i) const {
  check_neuron(i, neurons_);
  return std::span<const double>(v_).subspan(i * dim_, dim_);
}

std::span<double> CueBall::row(std::size_t i) {
  check_neuron(i, neurons_);
  return std::span<double>(v_).subspan(i * dim_, dim_);
}

RecallBank::RecallBank(std::size_t neurons, std::size_t dim) : neurons_(neurons), dim_(dim), w_(neurons * dim, 0.0) {}

std::span<const double> RecallBank::row(std::size_t i) const {
  check_neuron(i, neurons_);
  return std::span<const double>(w_).subspan(i * dim_, dim_);
}

std::span<double> RecallBank::row(std::size_t i) {
  check_neuron(i, neurons_);
  return std::span<double>(w_).subspan(i * dim_, dim_);
}

double CrossLinks::weight(const LinkKey& key) const {
  auto it = u_.find(key);
  return it == u_.end() ? 0.0 : it->second;
}

MemorySystem::MemorySystem(SystemConfig config, AttributeCatalog catalog)
    : config_(config), catalog_(std::move(catalog)) {
  config_.validate();
  for (const auto& group : catalog_.groups()) {
    cue_.emplace_back(group.name, group.labels.size(), config_.dim());
    recall_.emplace_back(group.labels.size(), config_.dim());
  }
}

std::size_t MemorySystem::ball_index(std::string_view name) const {
  auto g = catalog_.find(name);
  if (!g) throw Error(ErrorCode::kUnknownBall, "unknown Cue Ball '" + std::string(name) + "'");
  return *g;
}

NeuronRef MemorySystem::ref(std::size_t ball, std::size_t neuron) const {
  if (ball >= cue_.size()) throw Error(ErrorCode::kUnknownBall, "unknown Cue Ball #" + std::to_string(ball));
  check_neuron(neuron, cue_[ball].neurons());
  return {ball, neuron};
}

double recall_error(std::span<const double> target, std::span<const double> output) {
  check_dim(output.size(), target.size(), "recall output");
  double sum = 0.0;
  for (std::size_t j = 0; j < target.size(); ++j) {
    const double d = target[j] - output[j];
    sum += d * d;
  }
  return 0.5 * sum;
}

double cue_error(double theta, std::span<const double> q) {
  double sum = 0.0;
  for (double v : q) sum += (theta - v) * (theta - v);
  return 0.5 * sum;
}

PatternVector recall_forward(const RecallBank& bank, std::size_t neuron) {
  auto row = bank.row(neuron);
  return PatternVector(std::vector<double>(row.begin(), row.end()));
}

LearnReport learn_recall_weights(RecallBank& bank, std::size_t neuron, const PatternVector& target,
                                 const SystemConfig& config) {
  check_dim(target.dim(), bank.dim(), "target pattern");
  auto row = bank.row(neuron);
  LearnReport report;
  for (int t = 0; t < config.epochs; ++t) {
    // With x_i = 1 the recall output is the weight row itself.
    const auto stats = k::relax(row, target.values(), config.eps_w);
    report.errors.push_back(0.5 * stats.squared_error);
    report.max_abs_deltas.push_back(stats.max_abs_delta);
  }
  report.final_error = recall_error(target.values(), row);
  return report;
}

CueResponse cue_response(const CueBall& ball, const PatternVector& probe, double threshold) {
  check_dim(probe.dim(), ball.dim(), "probe");
  std::vector<double> q(ball.neurons(), 0.0);
  k::matvec(ball.weights(), probe.values(), q);
  return threshold_response<CueResponse>(std::move(q), threshold);
}

LearnReport learn_cue_weights(CueBall& ball, std::size_t neuron, const PatternVector& y, const SystemConfig& config) {
  check_dim(y.dim(), ball.dim(), "recall output");
  auto row = ball.row(neuron);
  LearnReport report;
  for (int t = 0; t < config.epochs; ++t) {
    const double q = k::dot(row, y.values());
    const double err = config.theta - q;
    report.errors.push_back(0.5 * err * err);
    report.max_abs_deltas.push_back(k::axpy(config.eps_v * err, y.values(), row).max_abs_delta);
  }
  const double q = k::dot(row, y.values());
  report.final_error = 0.5 * (config.theta - q) * (config.theta - q);
  return report;
}

StoreReport store_pattern(MemorySystem& system, NeuronRef neuron, const PatternVector& pattern) {
  neuron = system.ref(neuron.ball, neuron.neuron);
  StoreReport report;
  report.recall = learn_recall_weights(system.recall(neuron.ball), neuron.neuron, pattern, system.config());
  const PatternVector y = recall_forward(system.recall(neuron.ball), neuron.neuron);
  report.cue = learn_cue_weights(system.cue(neuron.ball), neuron.neuron, y, system.config());
  return report;
}

CrossResponse cross_response(const MemorySystem& system, NeuronRef from, std::size_t to_ball, double threshold,
                             double z) {
  from = system.ref(from.ball, from.neuron);
  if (to_ball >= system.ball_count()) {
    throw Error(ErrorCode::kUnknownBallPair, "unknown target Cue Ball #" + std::to_string(to_ball));
  }
  if (to_ball == from.ball) {
    throw Error(ErrorCode::kUnknownBallPair, "cue neurons within one Cue Ball are not connected");
  }
  const std::size_t n = system.cue(to_ball).neurons();
  std::vector<double> q(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) q[l] = system.links().weight({from, {to_ball, l}}) * z;
  return threshold_response<CrossResponse>(std::move(q), threshold);
}

namespace {

CrossDirectionReport learn_direction(MemorySystem& system, NeuronRef src, NeuronRef dst) {
  const auto& cfg = system.config();
  const PatternVector stored = recall_forward(system.recall(src.ball), src.neuron);
  const auto response = cue_response(system.cue(src.ball), stored, cfg.threshold);
  const bool fired = std::find(response.fired.begin(), response.fired.end(), src.neuron) != response.fired.end();
  if (!fired) {
    throw Error(ErrorCode::kNoRecognition, "neuron " + std::to_string(src.neuron) + " of Cue Ball '" +
                                               system.cue(src.ball).name() +
                                               "' does not fire on its stored pattern; train the balls first");
  }

  CrossDirectionReport report;
  report.link = {src, dst};
  report.z = 1.0;
  double& u = system.links().at(report.link);
  for (int t = 0; t < cfg.epochs; ++t) {
    const double q = u * report.z;
    const double err = cfg.theta - q;
    report.learn.errors.push_back(0.5 * err * err);
    const double before = u;
    u += cfg.lambda_cb * err * report.z;
    report.learn.max_abs_deltas.push_back(std::abs(u - before));
  }
  report.learn.final_error = 0.5 * (cfg.theta - u * report.z) * (cfg.theta - u * report.z);
  report.weight = u;
  return report;
}

}  // namespace

CrossLearnReport learn_cross_weights(MemorySystem& system, NeuronRef a, NeuronRef b) {
  a = system.ref(a.ball, a.neuron);
  b = system.ref(b.ball, b.neuron);
  if (a.ball == b.ball) {
    throw Error(ErrorCode::kIntraBallLink, "cannot link neurons within Cue Ball '" + system.cue(a.ball).name() + "'");
  }
  CrossLearnReport report;
  report.forward = learn_direction(system, a, b);
  report.backward = learn_direction(system, b, a);
  return report;
}

Association associate(const MemorySystem& system, std::size_t from_ball, const PatternVector& probe,
                      std::size_t to_ball) {
  const double threshold = system.config().threshold;
  if (from_ball >= system.ball_count()) throw Error(ErrorCode::kUnknownBall, "unknown source Cue Ball");
  const auto cue = cue_response(system.cue(from_ball), probe, threshold);
  if (cue.fired.empty()) {
    throw Error(ErrorCode::kNoRecognition, "no cue neuron of '" + system.cue(from_ball).name() +
                                               "' reaches the threshold for this pattern");
  }
  const auto cross = cross_response(system, {from_ball, cue.argmax}, to_ball, threshold);
  if (cross.fired.empty()) {
    throw Error(ErrorCode::kNoAssociation, "neuron " + std::to_string(cue.argmax) + " of '" +
                                               system.cue(from_ball).name() + "' has no trained link into '" +
                                               system.cue(to_ball).name() + "'");
  }
  Association out;
  out.from_neuron = cue.argmax;
  out.from_q = cue.q[cue.argmax];
  out.to_neuron = cross.argmax;
  out.to_q = cross.q[cross.argmax];
  out.recalled = recall_forward(system.recall(to_ball), out.to_neuron);
  return out;
}

}  // namespace cbrn
