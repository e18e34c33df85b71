#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace damt::kernels {

// Data-parallel inner loops of the aligner E-step / Viterbi pass and the
// statistics sums.  Every function has exactly specified floating-point
// semantics so that all variants produce bit-identical results:
//
//   mul / scale   elementwise IEEE double multiply, no contraction.
//   block_sum     4 lane accumulators: lane k sums x[4t+k] over full blocks
//                 in increasing t; lanes combine as (l0+l1)+(l2+l3); the
//                 tail (n mod 4 trailing elements) is then added
//                 sequentially.  n < 4 degenerates to a sequential sum.
//   argmax        per-lane running max over full blocks with
//                 strictly-greater updates, then lanes merge in order
//                 (greater value wins, equal value keeps the smaller
//                 index), then the tail is folded sequentially with
//                 strictly-greater updates.  Result: index of the maximum,
//                 smallest index on ties.  n must be >= 1.
//
// The scalar implementation is the reference; vector variants must match it
// bit for bit (equivalence-tested), so kernel choice never changes results.

struct KernelSet {
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  void (*scale)(const double* x, double s, double* out, std::size_t n);
  double (*block_sum)(const double* x, std::size_t n);
  std::size_t (*argmax)(const double* x, std::size_t n);
  const char* name;
};

const KernelSet& scalar_kernels();

// Best variant supported by the running CPU; DAMT_KERNELS=scalar|avx2
// overrides (falling back to scalar when the request is unavailable).
const KernelSet& active_kernels();

// All variants usable on this machine, scalar first.
std::vector<const KernelSet*> available_kernels();

}  // namespace damt::kernels
