#pragma once

#include <span>

namespace semiret {

enum class Reduction { kMean, kSum };

// -sum[y log s + (1-y) log(1-s)]. Scores must lie strictly inside (0,1).
double cross_entropy_loss(std::span<const double> scores, std::span<const int> labels,
                          Reduction reduction = Reduction::kMean);

// -sum s' log s: only the teacher-weighted positive term.
double distill_loss(std::span<const double> student, std::span<const double> teacher,
                    Reduction reduction = Reduction::kMean);

// alpha * l_cross + (1 - alpha) * l_distill
double combined_loss(double alpha, double l_cross, double l_distill);

// Per-sample derivative of the combined loss w.r.t. the student score, before
// batch averaging.
double combined_loss_grad(double alpha, double score, int label, double teacher);

}  // namespace semiret
