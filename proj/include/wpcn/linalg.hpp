#pragma once

#include <complex>
#include <vector>

namespace wpcn {

using cxd = std::complex<double>;
using CVec = std::vector<cxd>;

// Dense row-major complex matrix, just big enough for the beamforming math.
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<cxd> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    cxd& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const cxd& operator()(int r, int c) const {
        return a[static_cast<size_t>(r) * cols + c];
    }
};

double norm2(const CVec& v);                  // squared Euclidean norm
double vec_norm(const CVec& v);
cxd vdot(const CVec& a, const CVec& b);       // sum conj(a_i) * b_i
void normalize(CVec& v);

CVec matvec(const CMat& m, const CVec& x);

// x such that (A)x = b by partial-pivot LU; A is overwritten. Returns false
// when A is numerically singular.
bool solve_inplace(CMat a, CVec b, CVec& x);

// Principal eigenpair of a Hermitian PSD matrix. Power iteration from the
// all-ones vector (tolerance 1e-12 relative residual, at most max_iter
// steps), then Rayleigh-quotient iteration polish if the tolerance was not
// reached. The returned vector has unit norm and its first nonzero entry is
// rotated to the positive real axis so results are reproducible.
struct EigResult {
    double value = 0.0;
    CVec vector;
    int iterations = 0;
    bool converged = false;
};

EigResult principal_eigenpair(const CMat& h, int max_iter = 1000,
                              double tol = 1e-12);

void fix_phase(CVec& v);

}  // namespace wpcn
