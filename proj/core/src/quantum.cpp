// quantum.cpp - operator algebra, Liouvillian assembly, steady state and propagation

#include "shelvesim/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace shelvesim::quantum {

namespace detail {
struct SpectralSlot {
    std::once_flag once;
    SpectralCache data;
};
}  // namespace detail

namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kHermitianTol = 1e-10;
constexpr double kPositivityTol = 1e-9;
constexpr double kResidualTol = 1e-9;

void require_square(const Matrix& m, const char* what) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Induced infinity norm (max absolute row sum).
double inf_norm(const Matrix& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Replaces the eigenvectors of each cluster of (numerically) equal eigenvalues
// by an orthonormal basis of the null space of m - lambda. The QR iteration
// returns nearly parallel vectors for exactly degenerate eigenvalues.
void refine_degenerate_clusters(const Matrix& m, Vector& values, Matrix& vectors) {
    const Eigen::Index n = values.size();
    const double tol = 1e-12 * std::max(1.0, inf_norm(m));
    std::vector<bool> done(static_cast<std::size_t>(n), false);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<Eigen::Index> members{i};
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (!done[j] && std::abs(values(j) - values(i)) <= tol) members.push_back(j);
        }
        for (auto k : members) done[k] = true;
        if (members.size() < 2) continue;
        cplx mean = 0.0;
        for (auto k : members) mean += values(k);
        mean /= static_cast<double>(members.size());
        const Matrix shifted = m - mean * Matrix::Identity(n, n);
        Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const auto k = static_cast<Eigen::Index>(members.size());
        // A defective cluster has a smaller null space; keep the solver's vectors.
        if (sv(n - k) > tol) continue;
        for (Eigen::Index c = 0; c < k; ++c) {
            vectors.col(members[c]) = svd.matrixV().col(n - k + c);
            values(members[c]) = mean;
        }
    }
}

Matrix sym_part(const Matrix& m) {
    return 0.5 * (m + m.adjoint());
}

}  // namespace

// ---------------------------------------------------------------------------
// OperatorMatrix

OperatorMatrix::OperatorMatrix(Matrix entries) : m_(std::move(entries)) {
    require_square(m_, "OperatorMatrix");
}

OperatorMatrix OperatorMatrix::identity(int dim) {
    return OperatorMatrix(Matrix::Identity(dim, dim));
}

OperatorMatrix OperatorMatrix::zero(int dim) {
    return OperatorMatrix(Matrix::Zero(dim, dim));
}

OperatorMatrix OperatorMatrix::transition(int dim, int row, int col) {
    if (row < 0 || row >= dim || col < 0 || col >= dim) {
        throw std::out_of_range("OperatorMatrix::transition: index outside [0, dim)");
    }
    Matrix m = Matrix::Zero(dim, dim);
    m(row, col) = 1.0;
    return OperatorMatrix(std::move(m));
}

OperatorMatrix OperatorMatrix::diagonal(std::span<const double> values) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()),
                            static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = values[i];
    }
    return OperatorMatrix(std::move(m));
}

OperatorMatrix OperatorMatrix::adjoint() const {
    return OperatorMatrix(m_.adjoint());
}

double OperatorMatrix::hermiticity_defect() const {
    return max_abs(m_ - m_.adjoint());
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
    if (rhs.dim() != dim()) throw DimensionMismatch("OperatorMatrix +: dimension mismatch");
    m_ += rhs.m_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
    if (rhs.dim() != dim()) throw DimensionMismatch("OperatorMatrix -: dimension mismatch");
    m_ -= rhs.m_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
    m_ *= s;
    return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("OperatorMatrix *: dimension mismatch");
    return OperatorMatrix(a.m_ * b.m_);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries) : m_(std::move(entries)) {
    require_square(m_, "DensityMatrix");
    if (!m_.allFinite()) throw InvalidState("DensityMatrix: non-finite entries");
    const cplx tr = m_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw InvalidState("DensityMatrix: trace " + std::to_string(tr.real()) + "+" +
                           std::to_string(tr.imag()) + "i differs from 1");
    }
    if (max_abs(m_ - m_.adjoint()) > kHermitianTol) {
        throw InvalidState("DensityMatrix: not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym_part(m_), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPositivityTol) {
        throw InvalidState("DensityMatrix: negative eigenvalue " +
                           std::to_string(es.eigenvalues().minCoeff()));
    }
}

DensityMatrix DensityMatrix::basis_state(int dim, int index) {
    return DensityMatrix(OperatorMatrix::transition(dim, index, index).entries());
}

// ---------------------------------------------------------------------------
// SuperOperator

SuperOperator::SuperOperator(int dim, Matrix entries)
    : dim_(dim), m_(std::move(entries)), cache_(std::make_shared<detail::SpectralSlot>()) {
    if (dim <= 0) throw DimensionMismatch("SuperOperator: dimension must be positive");
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    if (m_.rows() != n || m_.cols() != n) {
        throw DimensionMismatch("SuperOperator: expected " + std::to_string(n) + "x" +
                                std::to_string(n) + " entries");
    }
}

SuperOperator SuperOperator::zero(int dim) {
    const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
    return SuperOperator(dim, Matrix::Zero(n, n));
}

OperatorMatrix SuperOperator::apply(const OperatorMatrix& rho) const {
    if (rho.dim() != dim_) throw DimensionMismatch("SuperOperator::apply: dimension mismatch");
    return OperatorMatrix(unvectorize(m_ * vectorize(rho.entries()), dim_));
}

double SuperOperator::trace_defect() const {
    // vec(I)^dagger L picks the diagonal rows i + i*d.
    Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(m_.cols());
    for (int i = 0; i < dim_; ++i) acc += m_.row(i + static_cast<Eigen::Index>(i) * dim_);
    return acc.cwiseAbs().maxCoeff();
}

SuperOperator& SuperOperator::operator+=(const SuperOperator& rhs) {
    if (rhs.dim_ != dim_) throw DimensionMismatch("SuperOperator +: dimension mismatch");
    m_ += rhs.m_;
    cache_ = std::make_shared<detail::SpectralSlot>();
    return *this;
}

SuperOperator SuperOperator::operator*(double s) const {
    return SuperOperator(dim_, m_ * s);
}

const detail::SpectralCache& SuperOperator::spectral() const {
    std::call_once(cache_->once, [this] {
        Eigen::ComplexEigenSolver<Matrix> es(m_, true);
        if (es.info() != Eigen::Success) {
            throw NumericalFailure("SuperOperator: eigendecomposition did not converge");
        }
        auto& c = cache_->data;
        c.eigenvalues = es.eigenvalues();
        c.eigenvectors = es.eigenvectors();
        refine_degenerate_clusters(m_, c.eigenvalues, c.eigenvectors);
        // Stationary and purely oscillating modes: drop round-off growth or decay.
        const double snap = 1e-12 * std::max(1.0, inf_norm(m_));
        for (auto& ev : c.eigenvalues) {
            if (std::abs(ev.real()) <= snap) ev = cplx(0.0, ev.imag());
        }
        Eigen::PartialPivLU<Matrix> lu(c.eigenvectors);
        c.inverse_eigenvectors = lu.inverse();
        Eigen::BDCSVD<Matrix> svd(c.eigenvectors);
        const auto& sv = svd.singularValues();
        const double smin = sv(sv.size() - 1);
        c.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
        if (!c.inverse_eigenvectors.allFinite()) {
            c.condition = std::numeric_limits<double>::infinity();
        }
    });
    return cache_->data;
}

// ---------------------------------------------------------------------------
// Vectorization and assembly

Vector vectorize(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
        throw DimensionMismatch("unvectorize: length is not dim^2");
    }
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

namespace {

Matrix kron_raw(const Matrix& a, const Matrix& b) {
    const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    Matrix out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i) {
        for (Eigen::Index j = 0; j < ac; ++j) {
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
    return OperatorMatrix(kron_raw(a.entries(), b.entries()));
}

SuperOperator dissipator(const OperatorMatrix& c, double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("dissipator: rate must be finite and nonnegative");
    }
    const int d = c.dim();
    const Matrix& cm = c.entries();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix cdc = cm.adjoint() * cm;
    // vec(A X B) = (B^T (x) A) vec(X)
    Matrix l = kron_raw(cm.conjugate(), cm) - 0.5 * kron_raw(id, cdc) -
               0.5 * kron_raw(cdc.transpose(), id);
    return SuperOperator(d, rate * l);
}

SuperOperator build_liouvillian(const OperatorMatrix& h, std::span<const Collapse> collapses) {
    if (!h.is_hermitian(1e-12)) {
        throw std::invalid_argument("build_liouvillian: Hamiltonian is not Hermitian (defect " +
                                    std::to_string(h.hermiticity_defect()) + ")");
    }
    const int d = h.dim();
    for (const auto& c : collapses) {
        if (c.op.dim() != d) {
            throw DimensionMismatch("build_liouvillian: collapse '" + c.label +
                                    "' has dimension " + std::to_string(c.op.dim()) +
                                    ", Hamiltonian has " + std::to_string(d));
        }
    }
    // With K = -iH - 1/2 sum_k r_k c_k^dag c_k the generator is
    // I (x) K + conj(K) (x) I + sum_k r_k conj(c_k) (x) c_k; accumulate it in place.
    Matrix k = cplx(0.0, -1.0) * h.entries();
    for (const auto& c : collapses) {
        if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
            throw std::invalid_argument("build_liouvillian: rate of '" + c.label + "' must be finite and nonnegative");
        }
        k -= (0.5 * c.rate) * (c.op.entries().adjoint() * c.op.entries());
    }
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
    Matrix out = Matrix::Zero(n, n);
    for (int i = 0; i < d; ++i) out.block(i * d, i * d, d, d) += k;
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            const cplx kij = std::conj(k(i, j));
            if (kij == cplx(0.0)) continue;
            for (int m = 0; m < d; ++m) out(i * d + m, j * d + m) += kij;
        }
    }
    for (const auto& c : collapses) {
        if (c.rate == 0.0) continue;
        const Matrix& cm = c.op.entries();
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                const cplx cij = std::conj(cm(i, j));
                if (cij == cplx(0.0)) continue;
                out.block(i * d, j * d, d, d) += (c.rate * cij) * cm;
            }
        }
    }
    return SuperOperator(d, std::move(out));
}

// ---------------------------------------------------------------------------
// Steady state

namespace {

// Real parametrization of Hermitian d x d matrices: one unknown per diagonal
// entry and (Re, Im) per upper-triangular entry, d^2 unknowns in total.
struct HermitianCoordinates {
    enum Kind : unsigned char { diag, re, im };
    struct Slot {
        int i;
        int j;
        Kind kind;
    };
    std::vector<Slot> slots;

    explicit HermitianCoordinates(int d) {
        slots.reserve(static_cast<std::size_t>(d) * d);
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i <= j; ++i) {
                if (i == j) {
                    slots.push_back({i, j, diag});
                } else {
                    slots.push_back({i, j, re});
                    slots.push_back({i, j, im});
                }
            }
        }
    }
};

}  // namespace

Matrix ScaledSteadyState::unscaled_entries() const {
    return scale.asDiagonal() * scaled * scale.asDiagonal();
}

DensityMatrix ScaledSteadyState::unscaled() const {
    return DensityMatrix(sym_part(unscaled_entries()));
}

ScaledSteadyState steady_state_scaled(const SuperOperator& l, const Eigen::VectorXd& scale) {
    const int d = l.dim();
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
    if (scale.size() != d) throw DimensionMismatch("steady_state_scaled: scale length != dim");
    if (!scale.allFinite() || (scale.array() <= 0.0).any()) {
        throw std::invalid_argument("steady_state_scaled: scale entries must be positive");
    }

    // L' = W^{-1} L W, W = diag(s_i s_j) on vec index i + j*d. Formed from scale
    // ratios so that products of tiny scales never underflow.
    const Matrix& le = l.entries();
    Matrix lp = Matrix::Zero(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        const Eigen::Index bi = b % d;
        const Eigen::Index bj = b / d;
        for (Eigen::Index a = 0; a < n; ++a) {
            if (le(a, b) == cplx(0.0)) continue;
            const Eigen::Index ai = a % d;
            const Eigen::Index aj = a / d;
            lp(a, b) = le(a, b) * ((scale(bi) / scale(ai)) * (scale(bj) / scale(aj)));
        }
    }

    const HermitianCoordinates coords(d);
    auto vec_index = [d](int i, int j) { return i + static_cast<Eigen::Index>(j) * d; };

    Eigen::MatrixXd real_system(n, n);
    Vector column(n);
    const cplx iu(0.0, 1.0);
    for (Eigen::Index v = 0; v < n; ++v) {
        const auto& s = coords.slots[static_cast<std::size_t>(v)];
        switch (s.kind) {
            case HermitianCoordinates::diag:
                column = lp.col(vec_index(s.i, s.i));
                break;
            case HermitianCoordinates::re:
                column = lp.col(vec_index(s.i, s.j)) + lp.col(vec_index(s.j, s.i));
                break;
            case HermitianCoordinates::im:
                column = iu * (lp.col(vec_index(s.i, s.j)) - lp.col(vec_index(s.j, s.i)));
                break;
        }
        for (Eigen::Index u = 0; u < n; ++u) {
            const auto& r = coords.slots[static_cast<std::size_t>(u)];
            const cplx value = column(vec_index(r.i, r.j));
            real_system(u, v) = r.kind == HermitianCoordinates::im ? value.imag() : value.real();
        }
    }

    // Replace the equation for rho'_00 by tr(S rho' S) = 1.
    real_system.row(0).setZero();
    for (Eigen::Index v = 0; v < n; ++v) {
        const auto& s = coords.slots[static_cast<std::size_t>(v)];
        if (s.kind == HermitianCoordinates::diag) real_system(0, v) = scale(s.i) * scale(s.i);
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(0) = 1.0;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(real_system);
    const double rcond = lu.rcond();
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    if (!(rcond > 1e-20) || pivots.minCoeff() == 0.0) {
        throw DegenerateSteadyState(
            "steady_state: bordered Liouvillian is singular (rcond " + std::to_string(rcond) +
            "); the stationary manifold is degenerate");
    }
    Eigen::VectorXd x = lu.solve(rhs);

    // Iterative refinement with the residual accumulated in extended precision.
    Eigen::VectorXd residual(n);
    for (int pass = 0; pass < 3; ++pass) {
        for (Eigen::Index u = 0; u < n; ++u) {
            long double acc = rhs(u);
            for (Eigen::Index v = 0; v < n; ++v) {
                acc -= static_cast<long double>(real_system(u, v)) * x(v);
            }
            residual(u) = static_cast<double>(acc);
        }
        const Eigen::VectorXd dx = lu.solve(residual);
        x += dx;
        if (dx.cwiseAbs().maxCoeff() <= 1e-17 * x.cwiseAbs().maxCoeff()) break;
    }
    if (!x.allFinite()) {
        throw DegenerateSteadyState("steady_state: non-finite solution of the bordered system");
    }

    Matrix rho = Matrix::Zero(d, d);
    for (Eigen::Index v = 0; v < n; ++v) {
        const auto& s = coords.slots[static_cast<std::size_t>(v)];
        switch (s.kind) {
            case HermitianCoordinates::diag: rho(s.i, s.i) = x(v); break;
            case HermitianCoordinates::re: rho(s.i, s.j) += x(v); break;
            case HermitianCoordinates::im: rho(s.i, s.j) += iu * x(v); break;
        }
    }
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < j; ++i) rho(j, i) = std::conj(rho(i, j));
    }

    const double lnorm = inf_norm(lp);
    const double res = lnorm > 0.0 ? (lp * vectorize(rho)).cwiseAbs().maxCoeff() / lnorm : 0.0;
    if (!(res <= kResidualTol)) {
        throw NumericalFailure("steady_state: relative residual " + std::to_string(res) +
                               " exceeds 1e-9 after refinement");
    }
    return ScaledSteadyState{std::move(rho), scale, res, rcond};
}

DensityMatrix steady_state(const SuperOperator& l) {
    return steady_state_scaled(l, Eigen::VectorXd::Ones(l.dim())).unscaled();
}

// ---------------------------------------------------------------------------
// Propagation

PropagationMethod preferred_propagation(const SuperOperator& l) {
    return l.spectral().condition > kEigenbasisConditionLimit ? PropagationMethod::matrix_exponential
                                                              : PropagationMethod::eigenbasis;
}

DensityMatrix propagate(const SuperOperator& l, const DensityMatrix& rho0, double tau,
                        PropagationMethod method) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("propagate: tau must be finite and nonnegative");
    }
    if (rho0.dim() != l.dim()) throw DimensionMismatch("propagate: dimension mismatch");
    if (tau == 0.0) return rho0;
    if (method == PropagationMethod::automatic) method = preferred_propagation(l);

    const Vector v0 = vectorize(rho0.entries());
    Vector v;
    if (method == PropagationMethod::eigenbasis) {
        const auto& sp = l.spectral();
        Vector c = sp.inverse_eigenvectors * v0;
        for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(sp.eigenvalues(k) * tau);
        v = sp.eigenvectors * c;
    } else {
        const Matrix generator = l.entries() * tau;
        v = generator.exp() * v0;
    }
    return DensityMatrix(sym_part(unvectorize(v, l.dim())));
}

double slowest_relaxation_time(const SuperOperator& l, double zero_tol) {
    const auto& ev = l.spectral().eigenvalues;
    const double cutoff = zero_tol * std::max(inf_norm(l.entries()), 1.0);
    double rate = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
        const double decay = -ev(k).real();
        if (decay > cutoff) rate = std::min(rate, decay);
    }
    return std::isfinite(rate) ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------

cplx expectation(const OperatorMatrix& op, const Matrix& rho) {
    if (op.dim() != rho.rows() || rho.rows() != rho.cols()) {
        throw DimensionMismatch("expectation: dimension mismatch");
    }
    return op.entries().cwiseProduct(rho.transpose()).sum();
}

cplx expectation(const OperatorMatrix& op, const DensityMatrix& rho) {
    return expectation(op, rho.entries());
}

}  // namespace shelvesim::quantum
