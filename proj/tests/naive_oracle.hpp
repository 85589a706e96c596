#pragma once

// Brute-force evaluation of the memory model for small instances. Every
// quantity is computed with explicit loops over all neurons and all links,
// from the update equations directly, without touching the library.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <tuple>
#include <vector>

namespace naive {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // Mat[row][col]

struct Ball {
  Mat w;  // w[j][i]: cue neuron i -> recall neuron j
  Mat v;  // v[i][j]: recall neuron j -> cue neuron i
};

struct Model {
  double theta = 100.0;
  double threshold = 72.0;
  std::vector<Ball> balls;
  // u[b][a][l][k]: neuron k of ball a -> neuron l of ball b (dense, zero if untrained).
  std::vector<std::vector<Mat>> u;
};

inline Model make(std::size_t balls, std::size_t neurons, std::size_t dim, double theta, double threshold) {
  Model m;
  m.theta = theta;
  m.threshold = threshold;
  m.balls.assign(balls, Ball{Mat(dim, Vec(neurons, 0.0)), Mat(neurons, Vec(dim, 0.0))});
  m.u.assign(balls, std::vector<Mat>(balls, Mat(neurons, Vec(neurons, 0.0))));
  return m;
}

// y_j = sum_i w_ji x_i with a one-hot x.
inline Vec recall(const Ball& b, std::size_t neuron) {
  const std::size_t dim = b.w.size(), n = b.v.size();
  Vec x(n, 0.0);
  x[neuron] = 1.0;
  Vec y(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < n; ++i) y[j] += b.w[j][i] * x[i];
  return y;
}

inline Vec cue_q(const Ball& b, const Vec& probe) {
  Vec q(b.v.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < probe.size(); ++j) q[i] += b.v[i][j] * probe[j];
  return q;
}

inline std::vector<std::size_t> fired(const Vec& q, double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] >= threshold) out.push_back(i);
  return out;
}

inline std::size_t argmax(const Vec& q) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q[i] > q[best]) best = i;
  return best;
}

// One-step learning of w then v for neuron i, rates 1, one epoch.
inline void store(Model& m, std::size_t ball, std::size_t i, const Vec& d) {
  Ball& b = m.balls[ball];
  const Vec y0 = recall(b, i);
  for (std::size_t j = 0; j < d.size(); ++j) b.w[j][i] += (d[j] - y0[j]) * 1.0;
  const Vec y = recall(b, i);
  double q = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) q += b.v[i][j] * y[j];
  for (std::size_t j = 0; j < y.size(); ++j) b.v[i][j] += (m.theta - q) * y[j];
}

// Cross responses in ball `to` with the whole source-ball output vector z.
inline Vec cross_q(const Model& m, std::size_t from, const Vec& z, std::size_t to) {
  const Mat& u = m.u[to][from];
  Vec q(u.size(), 0.0);
  for (std::size_t l = 0; l < u.size(); ++l)
    for (std::size_t k = 0; k < z.size(); ++k) q[l] += u[l][k] * z[k];
  return q;
}

inline void link(Model& m, std::size_t a, std::size_t k, std::size_t b, std::size_t l) {
  for (auto [src, sk, dst, dl] : {std::tuple{a, k, b, l}, std::tuple{b, l, a, k}}) {
    const double q = m.u[dst][src][dl][sk] * 1.0;
    m.u[dst][src][dl][sk] += (m.theta - q) * 1.0;
  }
}

struct Path {
  std::size_t k, l;
  Vec recalled;
};

inline std::optional<Path> associate(const Model& m, std::size_t from, const Vec& probe, std::size_t to) {
  const Vec q = cue_q(m.balls[from], probe);
  if (fired(q, m.threshold).empty()) return std::nullopt;
  const std::size_t k = argmax(q);
  Vec z(q.size(), 0.0);
  z[k] = 1.0;
  const Vec qb = cross_q(m, from, z, to);
  if (fired(qb, m.threshold).empty()) return std::nullopt;
  const std::size_t l = argmax(qb);
  return Path{k, l, recall(m.balls[to], l)};
}

}  // namespace naive
