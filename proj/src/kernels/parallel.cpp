#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "shape_check.hpp"

namespace semiret::kernels {
namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::size_t kParallelWork = 1u << 18;

}  // namespace

namespace parallel {

void gemm(const Matrix& a, Op op_a, const Matrix& b, Op op_b, Matrix& c, bool accumulate) {
  const auto [m, k, n] = detail::check_gemm(a, op_a, b, op_b, c, accumulate);
  const double* pa = a.data();
  const double* pb = b.data();
  double* pc = c.data();
  const long rows = static_cast<long>(m);
  const bool wide = m * k * n >= kParallelWork;

  if (op_a == Op::kNone && op_b == Op::kNone) {
#pragma omp parallel for schedule(static) if (wide)
    for (long i = 0; i < rows; ++i) {
      double* ci = pc + i * n;
      const double* ai = pa + i * k;
      for (std::size_t p = 0; p < k; ++p) {
        const double av = ai[p];
        const double* bp = pb + p * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
      }
    }
  } else if (op_a == Op::kNone && op_b == Op::kTranspose) {
#pragma omp parallel for schedule(static) if (wide)
    for (long i = 0; i < rows; ++i) {
      double* ci = pc + i * n;
      const double* ai = pa + i * k;
      for (std::size_t j = 0; j < n; ++j) {
        const double* bj = pb + j * k;
        double sum = 0.0;
        for (std::size_t p = 0; p < k; ++p) sum += ai[p] * bj[p];
        ci[j] += sum;
      }
    }
  } else if (op_a == Op::kTranspose && op_b == Op::kNone) {
    // A is k x m; each output row i reads column i of A.
#pragma omp parallel for schedule(static) if (wide)
    for (long i = 0; i < rows; ++i) {
      double* ci = pc + i * n;
      for (std::size_t p = 0; p < k; ++p) {
        const double av = pa[p * m + i];
        if (av == 0.0) continue;
        const double* bp = pb + p * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += av * bp[j];
      }
    }
  } else {
#pragma omp parallel for schedule(static) if (wide)
    for (long i = 0; i < rows; ++i) {
      double* ci = pc + i * n;
      for (std::size_t j = 0; j < n; ++j) {
        const double* bj = pb + j * k;
        double sum = 0.0;
        for (std::size_t p = 0; p < k; ++p) sum += pa[p * m + i] * bj[p];
        ci[j] += sum;
      }
    }
  }
}

void dot_scan(std::span<const double> rows, std::size_t dim, std::span<const double> query,
              std::span<double> out) {
  if (query.size() != dim || rows.size() != out.size() * dim) {
    throw InternalError("dot_scan: shape mismatch");
  }
  const long count = static_cast<long>(out.size());
  const bool wide = out.size() * dim >= kParallelWork;
#pragma omp parallel for schedule(static) if (wide)
  for (long i = 0; i < count; ++i) {
    const double* r = rows.data() + i * dim;
    double sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) sum += r[j] * query[j];
    out[i] = sum;
  }
}

}  // namespace parallel

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace semiret::kernels
