// AVX2 variants of the reference kernels.  This translation unit is compiled
// with -mavx2 -mno-fma and must only be entered after a runtime CPU check.
// Per-lane operations are IEEE-identical to the scalar reference, so results
// match bit for bit.

#include "damt/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__)

#include <immintrin.h>

#include <cstdint>

namespace damt::kernels {

namespace {

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_avx2(const double* x, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vs));
  }
  for (; i < n; ++i) out[i] = x[i] * s;
}

double block_sum_avx2(const double* x, std::size_t n) {
  if (n < 4) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  __m256d acc = _mm256_setzero_pd();
  const std::size_t blocks = n / 4;
  for (std::size_t t = 0; t < blocks; ++t) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + 4 * t));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (std::size_t i = 4 * blocks; i < n; ++i) s += x[i];
  return s;
}

std::size_t argmax_avx2(const double* x, std::size_t n) {
  if (n < 4) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (x[i] > x[best]) best = i;
    }
    return best;
  }
  __m256d vbest = _mm256_loadu_pd(x);
  __m256i vidx = _mm256_setr_epi64x(0, 1, 2, 3);
  __m256i vcur = vidx;
  const __m256i vstep = _mm256_set1_epi64x(4);
  const std::size_t blocks = n / 4;
  for (std::size_t t = 1; t < blocks; ++t) {
    vcur = _mm256_add_epi64(vcur, vstep);
    const __m256d vx = _mm256_loadu_pd(x + 4 * t);
    const __m256d gt = _mm256_cmp_pd(vx, vbest, _CMP_GT_OQ);
    vbest = _mm256_blendv_pd(vbest, vx, gt);
    vidx = _mm256_blendv_epi8(vidx, vcur, _mm256_castpd_si256(gt));
  }
  alignas(32) double val[4];
  alignas(32) std::int64_t idx[4];
  _mm256_store_pd(val, vbest);
  _mm256_store_si256(reinterpret_cast<__m256i*>(idx), vidx);
  double best = val[0];
  std::size_t best_idx = static_cast<std::size_t>(idx[0]);
  for (int k = 1; k < 4; ++k) {
    const std::size_t ik = static_cast<std::size_t>(idx[k]);
    if (val[k] > best || (val[k] == best && ik < best_idx)) {
      best = val[k];
      best_idx = ik;
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

const KernelSet& avx2_kernels() {
  static const KernelSet set{mul_avx2, scale_avx2, block_sum_avx2, argmax_avx2,
                             "avx2"};
  return set;
}

}  // namespace damt::kernels

#endif  // __x86_64__ && __AVX2__
