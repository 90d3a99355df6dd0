#include "wpcn/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {

double norm2(const CVec& v) {
    double s = 0.0;
    for (const cxd& x : v) s += std::norm(x);
    return s;
}

double vec_norm(const CVec& v) { return std::sqrt(norm2(v)); }

cxd vdot(const CVec& a, const CVec& b) {
    cxd s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

void normalize(CVec& v) {
    const double n = vec_norm(v);
    if (n > 0.0)
        for (cxd& x : v) x /= n;
}

CVec matvec(const CMat& m, const CVec& x) {
    CVec y(m.rows, cxd(0.0, 0.0));
    for (int r = 0; r < m.rows; ++r) {
        cxd s = 0.0;
        for (int c = 0; c < m.cols; ++c) s += m(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

bool solve_inplace(CMat a, CVec b, CVec& x) {
    const int n = a.rows;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) return false;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
            std::swap(b[col], b[pivot]);
        }
        const cxd d = a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const cxd f = a(r, col) / d;
            if (f == cxd(0.0, 0.0)) continue;
            a(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    x.assign(n, cxd(0.0, 0.0));
    for (int r = n - 1; r >= 0; --r) {
        cxd s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
        x[r] = s / a(r, r);
    }
    for (const cxd& v : x)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void fix_phase(CVec& v) {
    for (const cxd& x : v) {
        const double m = std::abs(x);
        if (m > 1e-300) {
            const cxd rot = std::conj(x) / m;
            for (cxd& y : v) y *= rot;
            return;
        }
    }
}

namespace {

double rayleigh(const CMat& h, const CVec& x) {
    return vdot(x, matvec(h, x)).real();
}

double residual(const CMat& h, const CVec& x, double lambda) {
    CVec r = matvec(h, x);
    for (size_t i = 0; i < r.size(); ++i) r[i] -= lambda * x[i];
    return vec_norm(r);
}

}  // namespace

EigResult principal_eigenpair(const CMat& h, int max_iter, double tol) {
    const int m = h.rows;
    EigResult out;
    out.vector.assign(m, cxd(1.0, 0.0));
    normalize(out.vector);

    double frob = 0.0;
    for (const cxd& v : h.a) frob += std::norm(v);
    frob = std::sqrt(frob);
    if (frob == 0.0) {
        // zero matrix: any unit vector is optimal, pick e1
        out.vector.assign(m, cxd(0.0, 0.0));
        out.vector[0] = 1.0;
        out.converged = true;
        return out;
    }

    double lambda = rayleigh(h, out.vector);
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
        CVec y = matvec(h, out.vector);
        double n = vec_norm(y);
        if (n == 0.0) {
            // start vector fell in the null space; restart from the basis
            // vector with the largest diagonal entry
            int best = 0;
            for (int d = 1; d < m; ++d)
                if (h(d, d).real() > h(best, best).real()) best = d;
            y.assign(m, cxd(0.0, 0.0));
            y[best] = 1.0;
            y = matvec(h, y);
            n = vec_norm(y);
            if (n == 0.0) break;
        }
        for (cxd& v : y) v /= n;
        out.vector = std::move(y);
        lambda = rayleigh(h, out.vector);
        if (residual(h, out.vector, lambda) <= tol * std::max(lambda, frob * 1e-6)) {
            out.converged = true;
            break;
        }
    }

    if (!out.converged) {
        // Rayleigh-quotient polish for spectra the fixed power budget cannot
        // separate. Cubic convergence; a handful of solves suffices.
        CVec x = out.vector;
        double lam = rayleigh(h, x);
        for (int it = 0; it < 8; ++it) {
            CMat shifted = h;
            for (int d = 0; d < m; ++d) shifted(d, d) -= lam;
            CVec y;
            if (!solve_inplace(std::move(shifted), x, y)) break;  // exact eigenpair hit
            normalize(y);
            x = std::move(y);
            lam = rayleigh(h, x);
            if (residual(h, x, lam) <= tol * std::max(lam, frob * 1e-6)) break;
        }
        // keep whichever direction carries the larger quadratic form
        if (lam > lambda) {
            out.vector = std::move(x);
            lambda = lam;
        }
        out.converged = residual(h, out.vector, lambda) <=
                        1e-9 * std::max(lambda, frob * 1e-6);
    }

    fix_phase(out.vector);
    out.value = rayleigh(h, out.vector);
    return out;
}

}  // namespace wpcn
