#include "scfg/linalg.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

namespace scfg {

namespace {
std::atomic<std::uint64_t> g_lu_factor_calls{0};

void require_finite(const DenseMatrix& m, const char* who) {
    if (!m.all_finite()) throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
}
}  // namespace

DenseMatrix DenseMatrix::identity(int dim) {
    DenseMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : a_)
        if (!std::isfinite(v)) return false;
    return true;
}

Vector multiply(const DenseMatrix& m, const Vector& x) {
    const int n = m.dim();
    Vector y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += m(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
}

DenseMatrix identity_minus(const DenseMatrix& a) {
    const int n = a.dim();
    DenseMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - a(i, j);
    return m;
}

std::uint64_t lu_factor_invocations() { return g_lu_factor_calls.load(); }

Factorization lu_factor(const DenseMatrix& m, double pivot_tolerance) {
    require_finite(m, "lu_factor");
    g_lu_factor_calls.fetch_add(1);

    const int n = m.dim();
    Factorization f(m);
    DenseMatrix& lu = f.lu_;
    f.pivots_.resize(static_cast<std::size_t>(n));

    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::fabs(lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::fabs(lu(i, k));
            if (v > best) {
                best = v;
                pivot = i;
            }
        }
        if (best <= pivot_tolerance)
            throw SingularMatrixError("singular matrix: no pivot above tolerance at column " + std::to_string(k));
        f.pivots_[static_cast<std::size_t>(k)] = pivot;
        if (pivot != k)
            for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));

        const double d = lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            double factor = lu(i, k) / d;
            lu(i, k) = factor;
            if (factor == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
        }
    }
    return f;
}

Vector Factorization::solve(const Vector& rhs) const {
    const int n = dim();
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("lu_solve: right-hand side has wrong dimension");
    Vector x = rhs;
    for (int k = 0; k < n; ++k) {
        int p = pivots_[static_cast<std::size_t>(k)];
        if (p != k) std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(p)]);
    }
    // forward substitution with the unit lower triangle
    for (int i = 1; i < n; ++i) {
        double acc = x[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) acc -= lu_(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = acc;
    }
    // back substitution with the upper triangle
    for (int i = n - 1; i >= 0; --i) {
        double acc = x[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = acc / lu_(i, i);
    }
    return x;
}

Vector lu_solve(const Factorization& f, const Vector& rhs) { return f.solve(rhs); }

SpectralEstimate spectral_radius_estimate(const DenseMatrix& m, double tol, int max_iter) {
    require_finite(m, "spectral_radius_estimate");
    const int n = m.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m(i, j) < 0.0)
                throw std::invalid_argument("spectral_radius_estimate: negative entry");

    if (n == 0) return {0.0, true, 0};

    // Phase 1: nilpotency is decidable in at most n steps, and because all
    // entries are non-negative the products cannot cancel, so a zero iterate
    // is exact. Nilpotent cases (non-recursive grammars) would otherwise
    // converge only like 1/k under the shifted iteration below.
    int steps = 0;
    {
        Vector y(static_cast<std::size_t>(n), 1.0);
        for (int s = 0; s < n; ++s) {
            y = multiply(m, y);
            ++steps;
            double peak = 0.0;
            for (double v : y) peak = std::max(peak, v);
            if (peak == 0.0) return {0.0, true, steps};
            for (double& v : y) v /= peak;
        }
    }

    // Phase 2: power iteration on I + m. Its dominant eigenvalue is
    // 1 + radius and is strictly dominant for non-negative m, which removes
    // the oscillation a periodic matrix induces on the plain iteration.
    Vector z(static_cast<std::size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    double estimate = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        Vector w = multiply(m, z);
        for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] += z[static_cast<std::size_t>(i)];

        double rayleigh = 0.0;  // z is unit length
        for (int i = 0; i < n; ++i) rayleigh += z[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
        estimate = std::max(0.0, rayleigh - 1.0);

        double residual = 0.0;
        for (int i = 0; i < n; ++i)
            residual = std::max(residual, std::fabs(w[static_cast<std::size_t>(i)] -
                                                    rayleigh * z[static_cast<std::size_t>(i)]));
        if (residual <= tol * std::max(1.0, rayleigh)) return {estimate, true, steps + it};

        double norm = 0.0;
        for (double v : w) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : w) v /= norm;
        z = std::move(w);
    }
    return {estimate, false, steps + max_iter};
}

}  // namespace scfg
