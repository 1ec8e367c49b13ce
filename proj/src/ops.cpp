#include "mnmt/ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mnmt/kernels.hpp"

namespace mnmt {

Tensor init_gaussian(std::vector<std::size_t> shape, double stddev, Rng& rng) {
  if (!(stddev > 0.0)) throw std::invalid_argument("init_gaussian: stddev must be > 0");
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.gaussian(stddev);
  return t;
}

Tensor init_orthogonal(std::vector<std::size_t> shape, Rng& rng) {
  if (shape.size() != 2 || shape[0] != shape[1]) {
    throw std::invalid_argument("init_orthogonal: shape must be square [n,n]");
  }
  const std::size_t n = shape[0];
  Tensor a = init_gaussian({n, n}, 1.0, rng);

  // Householder QR; q accumulates the product of reflectors applied to I.
  Tensor q({n, n});
  for (std::size_t i = 0; i < n; ++i) q.at(i, i) = 1.0;
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    double norm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) norm2 += a.at(i, k) * a.at(i, k);
    double alpha = std::sqrt(norm2);
    if (alpha == 0.0) continue;
    if (a.at(k, k) > 0.0) alpha = -alpha;
    for (std::size_t i = k; i < n; ++i) v[i] = a.at(i, k);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    const double scale = 2.0 / vnorm2;
    // a := (I - scale v vᵀ) a  restricted to rows k..n
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * a.at(i, j);
      dot *= scale;
      for (std::size_t i = k; i < n; ++i) a.at(i, j) -= dot * v[i];
    }
    // q := q (I - scale v vᵀ)
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = k; j < n; ++j) dot += q.at(i, j) * v[j];
      dot *= scale;
      for (std::size_t j = k; j < n; ++j) q.at(i, j) -= dot * v[j];
    }
  }
  // Fold sign(diag(R)) into Q's columns so the factorization is unique.
  for (std::size_t j = 0; j < n; ++j) {
    if (a.at(j, j) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) q.at(i, j) = -q.at(i, j);
    }
  }
  return q;
}

void softmax_masked(const double* energies, const std::uint8_t* mask,
                    double* out, std::size_t n) {
  double maxv = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask && !mask[i]) continue;
    if (energies[i] > maxv) maxv = energies[i];
  }
  if (maxv == -std::numeric_limits<double>::infinity()) {
    throw std::invalid_argument("softmax: all positions masked");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask && !mask[i]) {
      out[i] = 0.0;
    } else {
      out[i] = std::exp(energies[i] - maxv);
      sum += out[i];
    }
  }
  kernels::active().scal(1.0 / sum, out, n);
}

Tensor softmax(const Tensor& v, const std::vector<std::uint8_t>* mask) {
  if (v.rank() != 1) throw std::invalid_argument("softmax: rank-1 tensor required");
  if (mask && mask->size() != v.size()) {
    throw std::invalid_argument("softmax: mask length mismatch");
  }
  Tensor out({v.size()});
  softmax_masked(v.data(), mask ? mask->data() : nullptr, out.data(), v.size());
  return out;
}

void l2_normalize_span(const double* in, double* out, std::size_t n) {
  const double norm = std::sqrt(kernels::active().nrm2sq(in, n));
  if (norm <= 1e-12) {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i];
    return;
  }
  const double inv = 1.0 / norm;
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * inv;
}

Tensor l2_normalize(const Tensor& v) {
  if (v.rank() != 1) throw std::invalid_argument("l2_normalize: rank-1 tensor required");
  Tensor out({v.size()});
  l2_normalize_span(v.data(), out.data(), v.size());
  return out;
}

void sigmoid_span(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = in[i];
    if (x >= 0.0) {
      const double e = std::exp(-x);
      out[i] = 1.0 / (1.0 + e);
    } else {
      const double e = std::exp(x);
      out[i] = e / (1.0 + e);
    }
  }
}

void tanh_span(const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::tanh(in[i]);
}

double logsumexp(const double* x, std::size_t n) {
  double maxv = x[0];
  for (std::size_t i = 1; i < n; ++i) maxv = std::max(maxv, x[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += std::exp(x[i] - maxv);
  return maxv + std::log(sum);
}

}  // namespace mnmt
