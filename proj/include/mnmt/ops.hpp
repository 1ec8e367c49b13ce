#pragma once

#include <cstdint>
#include <span>

#include "mnmt/rng.hpp"
#include "mnmt/tensor.hpp"

namespace mnmt {

// Entries i.i.d. N(0, stddev²). stddev must be positive.
Tensor init_gaussian(std::vector<std::size_t> shape, double stddev, Rng& rng);

// Random orthogonal matrix: QR of a Gaussian square matrix with the sign of
// diag(R) folded into Q so the result is deterministic given the seed.
Tensor init_orthogonal(std::vector<std::size_t> shape, Rng& rng);

// Numerically stabilized softmax over a rank-1 tensor; masked positions are
// exactly zero in the output. mask may be null (nothing masked); a non-null
// mask needs at least one true entry.
Tensor softmax(const Tensor& v, const std::vector<std::uint8_t>* mask = nullptr);

// Span form used by the model inner loops. mask may be null.
void softmax_masked(const double* energies, const std::uint8_t* mask,
                    double* out, std::size_t n);

// Returns v / ‖v‖₂, or v unchanged when ‖v‖₂ ≤ 1e-12 (degenerate rows stay
// zero instead of turning into NaN).
Tensor l2_normalize(const Tensor& v);
void l2_normalize_span(const double* in, double* out, std::size_t n);

// Elementwise transcendentals (out may alias in).
void sigmoid_span(const double* in, double* out, std::size_t n);
void tanh_span(const double* in, double* out, std::size_t n);

double logsumexp(const double* x, std::size_t n);

}  // namespace mnmt
