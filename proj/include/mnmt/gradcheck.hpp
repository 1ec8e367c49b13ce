#pragma once

#include <functional>
#include <string>

#include "mnmt/registry.hpp"

namespace mnmt {

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
};

// Central-difference check of analytic gradients over every entry of every
// registered parameter. loss_fn(true) must return the loss and accumulate
// analytic gradients into the registry (grads are zeroed first here);
// loss_fn(false) must evaluate the loss only. loss_fn has to be
// deterministic (fix all dropout masks and rng draws).
//
// Relative error per entry: |ga - gn| / max(|ga| + |gn|, 1e-8).
GradCheckResult finite_diff_check(
    const std::function<double(bool with_grad)>& loss_fn, ParamRegistry& reg,
    double epsilon);

}  // namespace mnmt
