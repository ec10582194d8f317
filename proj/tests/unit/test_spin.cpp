// test_spin.cpp - Wigner 3j symbols and angular-momentum matrices

#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "shelvesim/spin.hpp"
#include "test_util.hpp"

using namespace shelvesim::spin;
using shelvesim::quantum::cplx;
using shelvesim::quantum::Matrix;
using test_util::max_abs;

namespace {

double w3j(double j1, double j2, double j3, double m1, double m2, double m3) {
    return wigner3j(ThreeJArgs::from_doubles(j1, j2, j3, m1, m2, m3));
}

double w3j_twice(const std::array<int, 6>& t) {
    return wigner3j({HalfInt::from_twice(t[0]), HalfInt::from_twice(t[1]), HalfInt::from_twice(t[2]),
                     HalfInt::from_twice(t[3]), HalfInt::from_twice(t[4]), HalfInt::from_twice(t[5])});
}

}  // namespace

TEST_SUITE("spin") {

TEST_CASE("half-integer grid") {
    CHECK(HalfInt::from_double(1.5).twice() == 3);
    CHECK(HalfInt::from_double(-1.0).twice() == -2);
    CHECK(HalfInt::from_double(0.5).str() == "1/2");
    CHECK(HalfInt::from_double(2.0).str() == "2");
    CHECK((2_h + 1_h).twice() == 3);
    CHECK_THROWS_AS(HalfInt::from_double(0.3), std::invalid_argument);
}

TEST_CASE("closed-form values") {
    CHECK(std::abs(w3j(1, 1, 0, 1, -1, 0) - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(w3j(1, 1, 2, 0, 0, 0) - std::sqrt(2.0 / 15.0)) < 1e-15);
    CHECK(w3j(1, 1, 0, 1, 1, 0) == 0.0);
    // (j j 0; m -m 0) = (-1)^(j-m) / sqrt(2j+1)
    for (int tj = 0; tj <= 6; ++tj) {
        for (int tm = -tj; tm <= tj; tm += 2) {
            const double expect = (((tj - tm) / 2) % 2 == 0 ? 1.0 : -1.0) / std::sqrt(tj + 1.0);
            CHECK(std::abs(w3j_twice({tj, tj, 0, tm, -tm, 0}) - expect) < 1e-14);
        }
    }
}

TEST_CASE("tabulated values") {
    struct Row {
        std::array<double, 6> a;
        double value;
    };
    const std::vector<Row> rows{
        {{1, 1, 1, 1, -1, 0}, 0.408248290463863},
        {{0.5, 0.5, 1, 0.5, -0.5, 0}, 0.408248290463863},
        {{1.5, 1, 0.5, 0.5, -1, 0.5}, 0.28867513459481287},
        {{2, 2, 2, 1, -2, 1}, -0.29277002188455997},
        {{3, 2, 1, -1, 1, 0}, 0.2760262237369417},
        {{2.5, 1.5, 2, 1.5, -0.5, -1}, 0.06900655593423542},
        {{0, 1, 1, 0, 1, -1}, 0.5773502691896257},
        {{3, 3, 3, 0, 0, 0}, 0.0},
        {{2, 1, 1, 0, 0, 0}, 0.3651483716701107},
    };
    for (const auto& r : rows) {
        CHECK(std::abs(w3j(r.a[0], r.a[1], r.a[2], r.a[3], r.a[4], r.a[5]) - r.value) < 1e-14);
    }
}

TEST_CASE("selection rules give zero") {
    CHECK(w3j(1, 1, 3, 0, 0, 0) == 0.0);       // triangle
    CHECK(w3j(1, 1, 1, 0, 0, 0) == 0.0);       // odd j sum with all m = 0
    CHECK(w3j(1, 1, 1, 2, -2, 0) == 0.0);      // |m| > j
    CHECK(w3j(0.5, 1, 1, 0.5, 0, -0.5) == 0.0);  // j + m not integral
}

TEST_CASE("column permutation symmetry for j <= 3") {
    int checked = 0;
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 6; ++b)
            for (int c = std::abs(a - b); c <= std::min(a + b, 6); c += 2)
                for (int ma = -a; ma <= a; ma += 2)
                    for (int mb = -b; mb <= b; mb += 2) {
                        const int mc = -ma - mb;
                        if (std::abs(mc) > c) continue;
                        const double v = w3j_twice({a, b, c, ma, mb, mc});
                        const double odd = ((a + b + c) / 2) % 2 == 0 ? 1.0 : -1.0;
                        CHECK(std::abs(w3j_twice({b, c, a, mb, mc, ma}) - v) < 1e-13);
                        CHECK(std::abs(w3j_twice({c, a, b, mc, ma, mb}) - v) < 1e-13);
                        CHECK(std::abs(w3j_twice({b, a, c, mb, ma, mc}) - odd * v) < 1e-13);
                        CHECK(std::abs(w3j_twice({a, c, b, ma, mc, mb}) - odd * v) < 1e-13);
                        CHECK(std::abs(w3j_twice({c, b, a, mc, mb, ma}) - odd * v) < 1e-13);
                        // Sign reversal of all m: (-1)^(j1+j2+j3).
                        CHECK(std::abs(w3j_twice({a, b, c, -ma, -mb, -mc}) - odd * v) < 1e-13);
                        ++checked;
                    }
    CHECK(checked > 500);
}

TEST_CASE("orthogonality for j <= 2") {
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4; ++b)
            for (int c = std::abs(a - b); c <= a + b; c += 2)
                for (int cp = std::abs(a - b); cp <= a + b; cp += 2)
                    for (int mc = -std::min(c, cp); mc <= std::min(c, cp); mc += 2) {
                        double sum = 0.0;
                        for (int ma = -a; ma <= a; ma += 2) {
                            const int mb = -mc - ma;
                            if (std::abs(mb) > b) continue;
                            sum += w3j_twice({a, b, c, ma, mb, mc}) * w3j_twice({a, b, cp, ma, mb, mc});
                        }
                        const double expect = c == cp ? 1.0 : 0.0;
                        CHECK(std::abs((c + 1) * sum - expect) < 1e-12);
                    }
}

TEST_CASE("spin one half") {
    const auto ops = angular_momentum_ops(1_h);
    Matrix px(2, 2);
    px << 0.0, 1.0, 1.0, 0.0;
    CHECK(max_abs(ops.fx.entries() - 0.5 * px) < 1e-15);
}

TEST_CASE("angular momentum algebra") {
    for (int tf = 1; tf <= 6; ++tf) {
        const auto ops = angular_momentum_ops(HalfInt::from_twice(tf));
        const Matrix& x = ops.fx.entries();
        const Matrix& y = ops.fy.entries();
        const Matrix& z = ops.fz.entries();
        CHECK(max_abs(x * y - y * x - cplx(0.0, 1.0) * z) < 1e-12);
        CHECK(max_abs(y * z - z * y - cplx(0.0, 1.0) * x) < 1e-12);
        const double f = 0.5 * tf;
        const Matrix casimir = x * x + y * y + z * z;
        CHECK(max_abs(casimir - f * (f + 1.0) * Matrix::Identity(tf + 1, tf + 1)) < 1e-12);
        // F+ annihilates the highest weight |f, f>, the last basis state.
        CHECK(max_abs(ops.f_plus.entries().col(tf)) == 0.0);
        CHECK(max_abs(ops.f_minus.entries() - ops.f_plus.entries().adjoint()) < 1e-15);
    }
}

TEST_CASE("spin one Fx couples m = 0 with m = +-1") {
    const auto ops = angular_momentum_ops(2_h);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(ops.fx(0, 1) - s) < 1e-15);
    CHECK(std::abs(ops.fx(1, 2) - s) < 1e-15);
    CHECK(ops.fx(0, 2) == cplx(0.0));
    CHECK(std::abs(ops.fz(0, 0) + 1.0) < 1e-15);
}

TEST_CASE("Wigner-Eckart components reproduce the ladder construction") {
    for (int tf = 1; tf <= 4; ++tf) {
        const HalfInt f = HalfInt::from_twice(tf);
        const auto ops = angular_momentum_ops(f);
        const Matrix fp = -(ops.fx.entries() + cplx(0.0, 1.0) * ops.fy.entries()) / std::sqrt(2.0);
        const Matrix fm = (ops.fx.entries() - cplx(0.0, 1.0) * ops.fy.entries()) / std::sqrt(2.0);
        CHECK(max_abs(spherical_component_wigner_eckart(f, 1).entries() - fp) < 1e-12);
        CHECK(max_abs(spherical_component_wigner_eckart(f, -1).entries() - fm) < 1e-12);
        CHECK(max_abs(spherical_component_wigner_eckart(f, 0).entries() - ops.fz.entries()) < 1e-12);
        CHECK(max_abs(fx_wigner_eckart(f).entries() - ops.fx.entries()) < 1e-12);
    }
}

}  // TEST_SUITE
