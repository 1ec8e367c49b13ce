#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mnmt/rng.hpp"
#include "mnmt/tensor.hpp"

namespace mnmt {

enum class InitScheme { gaussian, orthogonal, zero };

struct Param {
  std::string name;
  Tensor value;
  Tensor grad;  // same shape, zero between steps
  InitScheme init = InitScheme::gaussian;
  bool trainable = true;
};

// Named registry of every trainable matrix/vector. Insertion order is the
// canonical iteration order everywhere (checkpoints, optimizer state,
// gradient checks), so it must be deterministic across runs.
class ParamRegistry {
 public:
  Param& add(std::string name, std::vector<std::size_t> shape, InitScheme init,
             Rng& rng, double stddev = 0.01);
  Param& add(std::string name, Tensor value, bool trainable,
             InitScheme tag = InitScheme::gaussian);

  Param& get(std::string_view name);
  const Param& get(std::string_view name) const;
  Param* find(std::string_view name);

  const std::vector<std::unique_ptr<Param>>& entries() const { return params_; }
  std::size_t count() const { return params_.size(); }
  std::size_t total_parameters() const;

  void zero_grads();

 private:
  Param& insert(std::unique_ptr<Param> p);
  std::vector<std::unique_ptr<Param>> params_;
};

}  // namespace mnmt
