#pragma once

#include <string>

#include "semiret/errors.hpp"
#include "semiret/kernels.hpp"

namespace semiret::kernels::detail {

struct GemmDims {
  std::size_t m, k, n;
};

inline GemmDims check_gemm(const Matrix& a, Op op_a, const Matrix& b, Op op_b, Matrix& c,
                           bool accumulate) {
  const std::size_t m = op_a == Op::kNone ? a.rows() : a.cols();
  const std::size_t k = op_a == Op::kNone ? a.cols() : a.rows();
  const std::size_t kb = op_b == Op::kNone ? b.rows() : b.cols();
  const std::size_t n = op_b == Op::kNone ? b.cols() : b.rows();
  if (k != kb) {
    throw InternalError("gemm: inner dimensions " + std::to_string(k) + " vs " +
                        std::to_string(kb));
  }
  if (accumulate) {
    if (c.rows() != m || c.cols() != n) throw InternalError("gemm: accumulator shape mismatch");
  } else if (c.rows() != m || c.cols() != n) {
    c = Matrix(m, n);
  } else {
    c.set_zero();
  }
  return {m, k, n};
}

}  // namespace semiret::kernels::detail
