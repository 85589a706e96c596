#pragma once

#include <cstddef>
#include <span>

// Dense inner loops of the memory model. `serial` is the plain reference
// implementation kept for testing and benchmarking; `parallel` is what the
// model uses. Parallel reductions accumulate fixed-size blocks and combine the
// block sums in index order, so results do not depend on the thread count.
namespace cbrn::kernels {

inline constexpr std::size_t kBlock = 2048;

struct StepStats {
  double max_abs_delta = 0.0;  // largest |w_new - w_old| actually applied
  double squared_error = 0.0;  // sum (target - w_old)^2 before the step
};

namespace serial {

double dot(std::span<const double> a, std::span<const double> b);

// out[i] = sum_j rows[i * x.size() + j] * x[j]
void matvec(std::span<const double> rows, std::span<const double> x, std::span<double> out);

// y += alpha * x
StepStats axpy(double alpha, std::span<const double> x, std::span<double> y);

// w += rate * (target - w)
StepStats relax(std::span<double> w, std::span<const double> target, double rate);

}  // namespace serial

namespace parallel {

double dot(std::span<const double> a, std::span<const double> b);
void matvec(std::span<const double> rows, std::span<const double> x, std::span<double> out);
StepStats axpy(double alpha, std::span<const double> x, std::span<double> y);
StepStats relax(std::span<double> w, std::span<const double> target, double rate);

}  // namespace parallel

// Number of threads the parallel kernels will use (1 without OpenMP).
int thread_count();

}  // namespace cbrn::kernels
