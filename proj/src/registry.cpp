#include "mnmt/registry.hpp"

#include <stdexcept>

#include "mnmt/ops.hpp"

namespace mnmt {

Param& ParamRegistry::insert(std::unique_ptr<Param> p) {
  if (find(p->name) != nullptr) {
    throw std::invalid_argument("duplicate parameter name: " + p->name);
  }
  params_.push_back(std::move(p));
  return *params_.back();
}

Param& ParamRegistry::add(std::string name, std::vector<std::size_t> shape,
                          InitScheme init, Rng& rng, double stddev) {
  auto p = std::make_unique<Param>();
  p->name = std::move(name);
  p->init = init;
  switch (init) {
    case InitScheme::gaussian:
      p->value = init_gaussian(shape, stddev, rng);
      break;
    case InitScheme::orthogonal: {
      // Stacked recurrent matrices [k·n × n] get one orthogonal block per
      // n×n slice; a plain square matrix is the k == 1 case.
      if (shape.size() != 2 || shape[0] % shape[1] != 0) {
        throw std::invalid_argument(
            "orthogonal init needs shape [k*n, n]: " + p->name);
      }
      const std::size_t n = shape[1];
      const std::size_t blocks = shape[0] / n;
      p->value = Tensor(shape);
      for (std::size_t b = 0; b < blocks; ++b) {
        Tensor q = init_orthogonal({n, n}, rng);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            p->value.at(b * n + i, j) = q.at(i, j);
          }
        }
      }
      break;
    }
    case InitScheme::zero:
      p->value = Tensor(shape);
      break;
  }
  p->grad = Tensor(p->value.shape());
  return insert(std::move(p));
}

Param& ParamRegistry::add(std::string name, Tensor value, bool trainable,
                          InitScheme tag) {
  auto p = std::make_unique<Param>();
  p->name = std::move(name);
  p->init = tag;
  p->grad = Tensor(value.shape());
  p->value = std::move(value);
  p->trainable = trainable;
  return insert(std::move(p));
}

Param* ParamRegistry::find(std::string_view name) {
  for (auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

Param& ParamRegistry::get(std::string_view name) {
  if (Param* p = find(name)) return *p;
  throw std::invalid_argument("unknown parameter: " + std::string(name));
}

const Param& ParamRegistry::get(std::string_view name) const {
  return const_cast<ParamRegistry*>(this)->get(name);
}

std::size_t ParamRegistry::total_parameters() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

void ParamRegistry::zero_grads() {
  for (auto& p : params_) p->grad.fill(0.0);
}

}  // namespace mnmt
