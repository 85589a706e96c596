#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cbrn/kernels.hpp"

namespace cbrn::kernels {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

double ordered_sum(const std::vector<double>& partial) {
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

}  // namespace

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace parallel {

double dot(std::span<const double> a, std::span<const double> b) {
  const auto blocks = static_cast<long>(block_count(a.size()));
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static)
  for (long blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(a.size(), lo + kBlock);
    double sum = 0.0;
    for (std::size_t j = lo; j < hi; ++j) sum += a[j] * b[j];
    partial[static_cast<std::size_t>(blk)] = sum;
  }
  return ordered_sum(partial);
}

void matvec(std::span<const double> rows, std::span<const double> x, std::span<double> out) {
  const std::size_t cols = x.size();
  const std::size_t per_row = block_count(cols);
  const auto tasks = static_cast<long>(out.size() * per_row);
  std::vector<double> partial(static_cast<std::size_t>(tasks), 0.0);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < tasks; ++t) {
    const std::size_t i = static_cast<std::size_t>(t) / per_row;
    const std::size_t lo = (static_cast<std::size_t>(t) % per_row) * kBlock;
    const std::size_t hi = std::min(cols, lo + kBlock);
    const double* row = rows.data() + i * cols;
    double sum = 0.0;
    for (std::size_t j = lo; j < hi; ++j) sum += row[j] * x[j];
    partial[static_cast<std::size_t>(t)] = sum;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0.0;
    for (std::size_t b = 0; b < per_row; ++b) sum += partial[i * per_row + b];
    out[i] = sum;
  }
}

StepStats axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<long>(y.size());
  double max_delta = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_delta)
  for (long j = 0; j < n; ++j) {
    const double before = y[j];
    y[j] += alpha * x[j];
    max_delta = std::max(max_delta, std::abs(y[j] - before));
  }
  return StepStats{max_delta, 0.0};
}

StepStats relax(std::span<double> w, std::span<const double> target, double rate) {
  const auto blocks = static_cast<long>(block_count(w.size()));
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  double max_delta = 0.0;
#pragma omp parallel for schedule(static) reduction(max : max_delta)
  for (long blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(w.size(), lo + kBlock);
    double sq = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      const double before = w[j];
      const double err = target[j] - before;
      sq += err * err;
      w[j] += rate * err;
      max_delta = std::max(max_delta, std::abs(w[j] - before));
    }
    partial[static_cast<std::size_t>(blk)] = sq;
  }
  return StepStats{max_delta, ordered_sum(partial)};
}

}  // namespace parallel

}  // namespace cbrn::kernels
