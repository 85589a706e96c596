#include <algorithm>
#include <cmath>

#include "cbrn/kernels.hpp"

namespace cbrn::kernels::serial {

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) sum += a[j] * b[j];
  return sum;
}

void matvec(std::span<const double> rows, std::span<const double> x, std::span<double> out) {
  const std::size_t cols = x.size();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dot(rows.subspan(i * cols, cols), x);
}

StepStats axpy(double alpha, std::span<const double> x, std::span<double> y) {
  StepStats stats;
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double before = y[j];
    y[j] += alpha * x[j];
    stats.max_abs_delta = std::max(stats.max_abs_delta, std::abs(y[j] - before));
  }
  return stats;
}

StepStats relax(std::span<double> w, std::span<const double> target, double rate) {
  StepStats stats;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double before = w[j];
    const double err = target[j] - before;
    stats.squared_error += err * err;
    w[j] += rate * err;
    stats.max_abs_delta = std::max(stats.max_abs_delta, std::abs(w[j] - before));
  }
  return stats;
}

}  // namespace cbrn::kernels::serial
