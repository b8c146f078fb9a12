#include "semiret/losses.hpp"

#include <cmath>
#include <string>

#include "semiret/errors.hpp"

namespace semiret {
namespace {

void check_open_unit(double s, const char* what) {
  if (!(s > 0.0 && s < 1.0)) {
    throw InputError(std::string(what) + ": score " + std::to_string(s) + " outside (0,1)");
  }
}

double reduce(double sum, std::size_t n, Reduction reduction) {
  if (reduction == Reduction::kSum || n == 0) return sum;
  return sum / static_cast<double>(n);
}

}  // namespace

double cross_entropy_loss(std::span<const double> scores, std::span<const int> labels,
                          Reduction reduction) {
  if (scores.size() != labels.size()) throw InputError("cross_entropy_loss: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    check_open_unit(scores[i], "cross_entropy_loss");
    if (labels[i] != 0 && labels[i] != 1) throw InputError("cross_entropy_loss: label not in {0,1}");
    sum -= labels[i] == 1 ? std::log(scores[i]) : std::log1p(-scores[i]);
  }
  return reduce(sum, scores.size(), reduction);
}

double distill_loss(std::span<const double> student, std::span<const double> teacher,
                    Reduction reduction) {
  if (student.size() != teacher.size()) throw InputError("distill_loss: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < student.size(); ++i) {
    check_open_unit(student[i], "distill_loss");
    if (!(teacher[i] >= 0.0 && teacher[i] < 1.0)) {
      throw InputError("distill_loss: teacher score outside [0,1)");
    }
    if (teacher[i] != 0.0) sum -= teacher[i] * std::log(student[i]);
  }
  return reduce(sum, student.size(), reduction);
}

double combined_loss(double alpha, double l_cross, double l_distill) {
  return alpha * l_cross + (1.0 - alpha) * l_distill;
}

double combined_loss_grad(double alpha, double score, int label, double teacher) {
  const double d_cross = label == 1 ? -1.0 / score : 1.0 / (1.0 - score);
  const double d_distill = -teacher / score;
  return alpha * d_cross + (1.0 - alpha) * d_distill;
}

}  // namespace semiret
