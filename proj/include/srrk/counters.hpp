#pragma once

#include <cstdint>

namespace srrk {

// Operation counters, the portable surrogate for wall-clock comparisons.
//
// Flop-equivalents follow the real-arithmetic convention of the usual Krylov
// cost model: a length-n inner product or axpy counts 2n regardless of the
// scalar field, forming the upper triangle of an m x m Gram matrix counts
// m(m+1)n, and an m x m Cholesky counts m^3/3.
struct Counters {
  std::int64_t matvecs = 0;
  std::int64_t inner_products = 0;       // length-n inner products
  std::int64_t vector_updates = 0;       // length-n axpy-type updates
  std::int64_t sketch_applies = 0;
  std::int64_t gram_flops = 0;           // Gram-matrix formation only
  std::int64_t correction_flops = 0;     // full least-squares correction (includes gram_flops)
  std::int64_t orth_flops = 0;           // all orthogonalization work (includes correction_flops)
  std::int64_t inner_solver_iters = 0;   // LSQR iterations inside corrections
  double wall_seconds = 0.0;

  Counters& operator+=(const Counters& o) {
    matvecs += o.matvecs;
    inner_products += o.inner_products;
    vector_updates += o.vector_updates;
    sketch_applies += o.sketch_applies;
    gram_flops += o.gram_flops;
    correction_flops += o.correction_flops;
    orth_flops += o.orth_flops;
    inner_solver_iters += o.inner_solver_iters;
    wall_seconds += o.wall_seconds;
    return *this;
  }
};

}  // namespace srrk
