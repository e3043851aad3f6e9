#pragma once

// LAPACKE with std::complex as its complex type.
#include <complex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace sbm::detail {

// Pins OpenBLAS to one thread (parallelism comes from running trials side by
// side) and swaps out a miscomputing dgemm kernel. Call before any LAPACK use.
void prepare_blas();

}  // namespace sbm::detail
