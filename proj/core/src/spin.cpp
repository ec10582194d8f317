// spin.cpp - Racah formula and angular-momentum matrices

#include "shelvesim/spin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace shelvesim::spin {

using quantum::cplx;
using quantum::Matrix;
using quantum::OperatorMatrix;

HalfInt HalfInt::from_double(double value) {
    const double twice = 2.0 * value;
    const double rounded = std::round(twice);
    if (!std::isfinite(value) || std::abs(twice - rounded) > 1e-9) {
        throw std::invalid_argument("HalfInt: " + std::to_string(value) + " is not a half-integer");
    }
    return HalfInt(static_cast<int>(rounded));
}

std::string HalfInt::str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
}

ThreeJArgs ThreeJArgs::from_doubles(double j1, double j2, double j3, double m1, double m2,
                                    double m3) {
    return {HalfInt::from_double(j1), HalfInt::from_double(j2), HalfInt::from_double(j3),
            HalfInt::from_double(m1), HalfInt::from_double(m2), HalfInt::from_double(m3)};
}

namespace {

constexpr int kMaxFactorial = 170;

const std::array<long double, kMaxFactorial + 1>& factorials() {
    static const auto table = [] {
        std::array<long double, kMaxFactorial + 1> t{};
        t[0] = 1.0L;
        for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * static_cast<long double>(i);
        return t;
    }();
    return table;
}

long double fact(int n) {
    if (n < 0 || n > kMaxFactorial) throw std::out_of_range("wigner3j: factorial argument out of range");
    return factorials()[static_cast<std::size_t>(n)];
}

// All arguments are doubled; `half` converts a doubled sum known to be even.
int half(int twice) { return twice / 2; }

bool triangle(int a, int b, int c) {
    return c >= std::abs(a - b) && c <= a + b && (a + b + c) % 2 == 0;
}

}  // namespace

double wigner3j(const ThreeJArgs& a) {
    const int j1 = a.j1.twice(), j2 = a.j2.twice(), j3 = a.j3.twice();
    const int m1 = a.m1.twice(), m2 = a.m2.twice(), m3 = a.m3.twice();

    if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
    if (m1 + m2 + m3 != 0) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
    if ((j1 + m1) % 2 != 0 || (j2 + m2) % 2 != 0 || (j3 + m3) % 2 != 0) return 0.0;
    if (!triangle(j1, j2, j3)) return 0.0;

    const long double delta = fact(half(j1 + j2 - j3)) * fact(half(j1 - j2 + j3)) *
                              fact(half(-j1 + j2 + j3)) / fact(half(j1 + j2 + j3) + 1);
    const long double norm = fact(half(j1 + m1)) * fact(half(j1 - m1)) * fact(half(j2 + m2)) *
                             fact(half(j2 - m2)) * fact(half(j3 + m3)) * fact(half(j3 - m3));

    const int k_min = std::max({0, half(j2 - j3 - m1), half(j1 - j3 + m2)});
    const int k_max = std::min({half(j1 + j2 - j3), half(j1 - m1), half(j2 + m2)});

    long double sum = 0.0L;
    for (int k = k_min; k <= k_max; ++k) {
        const long double denom = fact(k) * fact(half(j3 - j2 + m1) + k) *
                                  fact(half(j3 - j1 - m2) + k) * fact(half(j1 + j2 - j3) - k) *
                                  fact(half(j1 - m1) - k) * fact(half(j2 + m2) - k);
        sum += (k % 2 == 0 ? 1.0L : -1.0L) / denom;
    }

    const int phase_exp = half(j1 - j2 - m3);
    const long double phase = (phase_exp % 2 == 0) ? 1.0L : -1.0L;
    return static_cast<double>(phase * std::sqrt(delta) * std::sqrt(norm) * sum);
}

AngularMomentum angular_momentum_ops(HalfInt f) {
    if (f.twice() < 0) throw std::invalid_argument("angular_momentum_ops: f must be nonnegative");
    const int dim = f.twice() + 1;
    const double fv = f.value();
    Matrix fz = Matrix::Zero(dim, dim);
    Matrix fp = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        const double m = -fv + k;
        fz(k, k) = m;
        if (k + 1 < dim) fp(k + 1, k) = std::sqrt(fv * (fv + 1.0) - m * (m + 1.0));
    }
    const Matrix fm = fp.adjoint();
    const cplx i(0.0, 1.0);
    return AngularMomentum{OperatorMatrix(0.5 * (fp + fm)), OperatorMatrix((fp - fm) / (2.0 * i)),
                           OperatorMatrix(fz), OperatorMatrix(fp), OperatorMatrix(fm)};
}

OperatorMatrix spherical_component_wigner_eckart(HalfInt f, int q) {
    if (q < -1 || q > 1) throw std::invalid_argument("spherical component q must be -1, 0 or 1");
    const int dim = f.twice() + 1;
    const double fv = f.value();
    const double reduced = std::sqrt(fv * (fv + 1.0) * (2.0 * fv + 1.0));
    Matrix out = Matrix::Zero(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const HalfInt mr = HalfInt::from_twice(-f.twice() + 2 * r);
        for (int c = 0; c < dim; ++c) {
            const HalfInt mc = HalfInt::from_twice(-f.twice() + 2 * c);
            const double w = wigner3j({f, HalfInt::from_twice(2), f, -mr, HalfInt::from_twice(2 * q), mc});
            if (w == 0.0) continue;
            const int phase_exp = (f - mr).twice() / 2;
            out(r, c) = reduced * (phase_exp % 2 == 0 ? 1.0 : -1.0) * w;
        }
    }
    return OperatorMatrix(std::move(out));
}

OperatorMatrix fx_wigner_eckart(HalfInt f) {
    // Fx = (F_{-1} - F_{+1}) / sqrt(2)
    return (1.0 / std::sqrt(2.0)) *
           (spherical_component_wigner_eckart(f, -1) - spherical_component_wigner_eckart(f, 1));
}

}  // namespace shelvesim::spin
