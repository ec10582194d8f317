// quantum.hpp - dense operator and superoperator algebra for finite open systems
//
// Superoperators act on column-stacked density matrices: vec(rho)[i + j*d] = rho(i, j).
// Tensor products are ordered (emitter (x) sensor) everywhere in the project.

#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace shelvesim::quantum {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InvalidState : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The bordered steady-state system is singular: the Liouvillian has more than
// one stationary state.
class DegenerateSteadyState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OperatorMatrix {
public:
    explicit OperatorMatrix(Matrix entries);

    static OperatorMatrix identity(int dim);
    static OperatorMatrix zero(int dim);
    // |row><col| in a dim-dimensional space.
    static OperatorMatrix transition(int dim, int row, int col);
    static OperatorMatrix diagonal(std::span<const double> values);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& entries() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }

    OperatorMatrix adjoint() const;
    // max |A - A^dagger|
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-12) const { return hermiticity_defect() <= tol; }

    OperatorMatrix& operator+=(const OperatorMatrix& rhs);
    OperatorMatrix& operator-=(const OperatorMatrix& rhs);
    OperatorMatrix& operator*=(cplx s);

    friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
    friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
    friend OperatorMatrix operator*(cplx s, OperatorMatrix a) { return a *= s; }
    friend OperatorMatrix operator*(OperatorMatrix a, cplx s) { return a *= s; }
    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);

private:
    Matrix m_;
};

class DensityMatrix {
public:
    // Validates: unit trace and Hermiticity within 1e-10, eigenvalues >= -1e-9.
    explicit DensityMatrix(Matrix entries);

    static DensityMatrix basis_state(int dim, int index);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& entries() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }
    double population(int index) const { return m_(index, index).real(); }
    OperatorMatrix as_operator() const { return OperatorMatrix(m_); }

private:
    Matrix m_;
};

namespace detail {
struct SpectralCache;
struct SpectralSlot;
}  // namespace detail

class SuperOperator {
public:
    SuperOperator(int dim, Matrix entries);

    static SuperOperator zero(int dim);

    int dim() const { return dim_; }
    const Matrix& entries() const { return m_; }

    // L(rho) for an arbitrary (not necessarily physical) operator.
    OperatorMatrix apply(const OperatorMatrix& rho) const;
    // max |vec(I)^dagger L|; zero for a trace-preserving generator.
    double trace_defect() const;

    SuperOperator& operator+=(const SuperOperator& rhs);
    friend SuperOperator operator+(SuperOperator a, const SuperOperator& b) { return a += b; }
    SuperOperator operator*(double s) const;

    // Eigendecomposition of the generator, computed on first use and shared by
    // all copies of this value. Safe to call from concurrent readers.
    const detail::SpectralCache& spectral() const;

private:
    int dim_;
    Matrix m_;
    std::shared_ptr<detail::SpectralSlot> cache_;
};

struct Collapse {
    OperatorMatrix op;
    double rate;
    std::string label;
};

Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, int dim);

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);

SuperOperator dissipator(const OperatorMatrix& c, double rate);

// -i[H, .] + sum_k rate_k D[c_k]. H must be Hermitian to 1e-12.
SuperOperator build_liouvillian(const OperatorMatrix& h, std::span<const Collapse> collapses);

// Steady state in a diagonally rescaled basis: rho = S rho' S with S = diag(scale).
// Solving for rho' keeps hierarchies of very small entries (sensor Fock levels
// at weak coupling) within the working precision of the dense solve.
struct ScaledSteadyState {
    Matrix scaled;
    Eigen::VectorXd scale;
    // ||L' vec(rho')||_inf / ||L'||_inf in the rescaled basis
    double relative_residual = 0.0;
    double rcond = 0.0;

    Matrix unscaled_entries() const;
    DensityMatrix unscaled() const;
};

ScaledSteadyState steady_state_scaled(const SuperOperator& l, const Eigen::VectorXd& scale);
DensityMatrix steady_state(const SuperOperator& l);

enum class PropagationMethod { automatic, eigenbasis, matrix_exponential };

// Eigenbases with a condition number above this switch to scaling-and-squaring.
inline constexpr double kEigenbasisConditionLimit = 1e12;

DensityMatrix propagate(const SuperOperator& l, const DensityMatrix& rho0, double tau,
                        PropagationMethod method = PropagationMethod::automatic);

// Which route `automatic` takes for this generator.
PropagationMethod preferred_propagation(const SuperOperator& l);

// 1 / (smallest nonzero decay rate) of the generator; eigenvalues with
// |lambda| <= zero_tol * ||L|| are treated as stationary.
double slowest_relaxation_time(const SuperOperator& l, double zero_tol = 1e-10);

cplx expectation(const OperatorMatrix& op, const DensityMatrix& rho);
cplx expectation(const OperatorMatrix& op, const Matrix& rho);

namespace detail {
struct SpectralCache {
    Vector eigenvalues;
    Matrix eigenvectors;
    Matrix inverse_eigenvectors;
    double condition = 0.0;
};
}  // namespace detail

}  // namespace shelvesim::quantum
