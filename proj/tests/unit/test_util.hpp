// test_util.hpp - helpers shared by the unit suites

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "shelvesim/quantum.hpp"

namespace test_util {

using shelvesim::quantum::cplx;
using shelvesim::quantum::Matrix;

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

inline Matrix random_matrix(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix m(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) m(i, j) = cplx(n(rng), n(rng));
    return m;
}

inline Matrix random_hermitian(int d, std::mt19937_64& rng) {
    const Matrix a = random_matrix(d, rng);
    return 0.5 * (a + a.adjoint());
}

// Random full-rank density matrix.
inline Matrix random_density(int d, std::mt19937_64& rng) {
    const Matrix a = random_matrix(d, rng);
    Matrix r = a * a.adjoint();
    return r / r.trace();
}

// L(rho) evaluated directly from the master equation, independent of any
// vectorisation: -i[H, rho] + sum r (c rho c^dag - 1/2 {c^dag c, rho}).
template <typename Collapses>
Matrix lindblad_rhs(const Matrix& h, const Collapses& cs, const Matrix& rho) {
    Matrix out = cplx(0.0, -1.0) * (h * rho - rho * h);
    for (const auto& c : cs) {
        const Matrix& o = c.op.entries();
        const Matrix cdc = o.adjoint() * o;
        out += c.rate * (o * rho * o.adjoint() - 0.5 * (cdc * rho + rho * cdc));
    }
    return out;
}

}  // namespace test_util
