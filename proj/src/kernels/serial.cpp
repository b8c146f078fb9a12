#include "shape_check.hpp"

namespace semiret::kernels::serial {

void gemm(const Matrix& a, Op op_a, const Matrix& b, Op op_b, Matrix& c, bool accumulate) {
  const auto [m, k, n] = detail::check_gemm(a, op_a, b, op_b, c, accumulate);
  const auto at = [&](std::size_t i, std::size_t p) {
    return op_a == Op::kNone ? a(i, p) : a(p, i);
  };
  const auto bt = [&](std::size_t p, std::size_t j) {
    return op_b == Op::kNone ? b(p, j) : b(j, p);
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t p = 0; p < k; ++p) sum += at(i, p) * bt(p, j);
      c(i, j) += sum;
    }
  }
}

void dot_scan(std::span<const double> rows, std::size_t dim, std::span<const double> query,
              std::span<double> out) {
  if (query.size() != dim || rows.size() != out.size() * dim) {
    throw InternalError("dot_scan: shape mismatch");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < dim; ++j) sum += rows[i * dim + j] * query[j];
    out[i] = sum;
  }
}

}  // namespace semiret::kernels::serial
