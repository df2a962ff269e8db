#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace scfg {

using Vector = std::vector<double>;

// Square dense matrix, row-major.
class DenseMatrix {
public:
    explicit DenseMatrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, 0.0) {
        if (dim < 0) throw std::invalid_argument("matrix dimension must be non-negative");
    }
    static DenseMatrix identity(int dim);

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    bool all_finite() const;

private:
    int dim_;
    std::vector<double> a_;
};

Vector multiply(const DenseMatrix& m, const Vector& x);

// I - a; shared shorthand for the linear systems solved here.
DenseMatrix identity_minus(const DenseMatrix& a);

class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string& message) : std::runtime_error(message) {}
};

// LU factors with partial pivoting, packed in one matrix: unit lower
// triangle below the diagonal, upper triangle on and above it. pivots()[k]
// is the row swapped into position k at elimination step k.
class Factorization {
public:
    int dim() const { return lu_.dim(); }
    const DenseMatrix& packed() const { return lu_; }
    const std::vector<int>& pivots() const { return pivots_; }
    Vector solve(const Vector& rhs) const;

private:
    friend Factorization lu_factor(const DenseMatrix&, double);
    explicit Factorization(DenseMatrix lu) : lu_(std::move(lu)) {}
    DenseMatrix lu_;
    std::vector<int> pivots_;
};

// Throws SingularMatrixError when the best available pivot falls to
// pivot_tolerance or below (absolute value).
Factorization lu_factor(const DenseMatrix& m, double pivot_tolerance = 1e-12);
Vector lu_solve(const Factorization& f, const Vector& rhs);

// Process-wide count of lu_factor calls; lets callers prove a factorization
// was reused rather than recomputed.
std::uint64_t lu_factor_invocations();

struct SpectralEstimate {
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Spectral radius of a matrix with non-negative entries, by power iteration.
// Nilpotent matrices are detected exactly; otherwise the iteration runs on
// the identity-shifted matrix so that the dominant eigenvalue is unique and
// the estimate cannot oscillate. Non-convergence within max_iter returns the
// best estimate with converged = false.
SpectralEstimate spectral_radius_estimate(const DenseMatrix& m, double tol = 1e-10, int max_iter = 10000);

}  // namespace scfg
