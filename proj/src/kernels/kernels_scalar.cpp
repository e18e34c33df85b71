// Reference kernels.  These spell out the lane-blocked semantics the vector
// variants must reproduce exactly; see kernels.hpp for the contract.

#include "damt/kernels.hpp"

namespace damt::kernels {

namespace {

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_scalar(const double* x, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * s;
}

double block_sum_scalar(const double* x, std::size_t n) {
  if (n < 4) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
  const std::size_t blocks = n / 4;
  for (std::size_t t = 0; t < blocks; ++t) {
    l0 += x[4 * t];
    l1 += x[4 * t + 1];
    l2 += x[4 * t + 2];
    l3 += x[4 * t + 3];
  }
  double s = (l0 + l1) + (l2 + l3);
  for (std::size_t i = 4 * blocks; i < n; ++i) s += x[i];
  return s;
}

std::size_t argmax_scalar(const double* x, std::size_t n) {
  if (n < 4) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (x[i] > x[best]) best = i;
    }
    return best;
  }
  double val[4] = {x[0], x[1], x[2], x[3]};
  std::size_t idx[4] = {0, 1, 2, 3};
  const std::size_t blocks = n / 4;
  for (std::size_t t = 1; t < blocks; ++t) {
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t i = 4 * t + k;
      if (x[i] > val[k]) {
        val[k] = x[i];
        idx[k] = i;
      }
    }
  }
  double best = val[0];
  std::size_t best_idx = idx[0];
  for (std::size_t k = 1; k < 4; ++k) {
    if (val[k] > best || (val[k] == best && idx[k] < best_idx)) {
      best = val[k];
      best_idx = idx[k];
    }
  }
  for (std::size_t i = 4 * blocks; i < n; ++i) {
    if (x[i] > best) {
      best = x[i];
      best_idx = i;
    }
  }
  return best_idx;
}

}  // namespace

const KernelSet& scalar_kernels() {
  static const KernelSet set{mul_scalar, scale_scalar, block_sum_scalar,
                             argmax_scalar, "scalar"};
  return set;
}

}  // namespace damt::kernels
