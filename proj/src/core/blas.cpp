#include <cmath>
#include <cstdlib>
#include <mutex>
#include <vector>

#include "lapack.hpp"

extern "C" {
void openblas_set_num_threads(int);
char* openblas_get_corename();
void gotoblas_dynamic_init();
void gotoblas_dynamic_quit();
void dgemm_(const char* ta, const char* tb, const int* m, const int* n, const int* k, const double* alpha,
            const double* a, const int* lda, const double* b, const int* ldb, const double* beta, double* c,
            const int* ldc);
}

namespace sbm::detail {

namespace {

// 200 x 200 x 32 product against a naive loop. OpenBLAS 0.3.20 picks a
// Cooper Lake kernel on some AVX-512 hosts whose dgemm is wrong at this size.
bool gemm_ok() {
    const int m = 200, k = 32;
    std::vector<double> a(m * k), b(k * m), c(m * m, 0.0);
    for (int i = 0; i < m * k; ++i) {
        a[i] = std::sin(0.37 * i + 1.0);
        b[i] = std::cos(0.11 * i - 2.0);
    }
    const double one = 1.0, zero = 0.0;
    dgemm_("N", "N", &m, &m, &k, &one, a.data(), &m, b.data(), &k, &zero, c.data(), &m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            double ref = 0.0;
            for (int p = 0; p < k; ++p) ref += a[i + p * m] * b[p + j * k];
            if (std::abs(c[i + j * m] - ref) > 1e-10) return false;
        }
    return true;
}

}  // namespace

void prepare_blas() {
    static std::once_flag once;
    std::call_once(once, [] {
        openblas_set_num_threads(1);
        if (gemm_ok()) return;
        for (const char* core : {"SkylakeX", "Haswell", "Sandybridge"}) {
            setenv("OPENBLAS_CORETYPE", core, 1);
            gotoblas_dynamic_quit();
            gotoblas_dynamic_init();
            openblas_set_num_threads(1);
            if (gemm_ok()) return;
        }
    });
}

}  // namespace sbm::detail
