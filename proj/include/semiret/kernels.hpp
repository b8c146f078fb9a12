#pragma once

#include <cstddef>
#include <span>

#include "semiret/matrix.hpp"

// Dense kernels in two flavours. `serial` is the plain textbook loop nest kept
// as the reference the tests compare against; `parallel` is the
// cache-friendly OpenMP version the library actually runs. Both compute
// C = op(A) * op(B) (or C += ... when accumulate is set).
namespace semiret::kernels {

enum class Op { kNone, kTranspose };

namespace serial {
void gemm(const Matrix& a, Op op_a, const Matrix& b, Op op_b, Matrix& c, bool accumulate = false);
// out[i] = <rows[i*dim .. i*dim+dim), query>
void dot_scan(std::span<const double> rows, std::size_t dim, std::span<const double> query,
              std::span<double> out);
}  // namespace serial

namespace parallel {
void gemm(const Matrix& a, Op op_a, const Matrix& b, Op op_b, Matrix& c, bool accumulate = false);
void dot_scan(std::span<const double> rows, std::size_t dim, std::span<const double> query,
              std::span<double> out);
}  // namespace parallel

// Threads OpenMP would use for a parallel region (1 when built without OpenMP).
int max_threads();
bool openmp_enabled();

}  // namespace semiret::kernels
