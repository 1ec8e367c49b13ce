#include "mnmt/gradcheck.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mnmt/errors.hpp"

namespace mnmt {

GradCheckResult finite_diff_check(
    const std::function<double(bool with_grad)>& loss_fn, ParamRegistry& reg,
    double epsilon) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-4)) {
    throw std::invalid_argument("finite_diff_check: epsilon outside [1e-7, 1e-4]");
  }

  reg.zero_grads();
  const double base = loss_fn(true);
  if (!std::isfinite(base)) throw NumericFailure("finite_diff_check: loss is not finite");

  // Snapshot analytic gradients before the perturbation loop touches values.
  std::vector<std::vector<double>> analytic;
  analytic.reserve(reg.count());
  for (const auto& p : reg.entries()) {
    analytic.emplace_back(p->grad.values().begin(), p->grad.values().end());
  }

  GradCheckResult result;
  std::size_t pi = 0;
  for (const auto& p : reg.entries()) {
    double* values = p->value.data();
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + epsilon;
      const double f_plus = loss_fn(false);
      values[i] = saved - epsilon;
      const double f_minus = loss_fn(false);
      values[i] = saved;
      if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
        throw NumericFailure("finite_diff_check: perturbed loss is not finite at " +
                             p->name);
      }
      const double g_num = (f_plus - f_minus) / (2.0 * epsilon);
      const double g_ana = analytic[pi][i];
      const double denom = std::max(std::abs(g_ana) + std::abs(g_num), 1e-8);
      const double rel = std::abs(g_ana - g_num) / denom;
      if (rel > result.max_rel_err) {
        result.max_rel_err = rel;
        result.worst_param = p->name;
        result.worst_index = i;
      }
    }
    ++pi;
  }
  return result;
}

}  // namespace mnmt
