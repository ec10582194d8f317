// spin.hpp - Wigner 3j symbols and angular-momentum matrices

#pragma once

#include <string>

#include "shelvesim/quantum.hpp"

namespace shelvesim::spin {

// A half-integer stored as twice its value, so 1/2 -> 1 and -1 -> -2.
class HalfInt {
public:
    constexpr HalfInt() = default;
    static constexpr HalfInt from_twice(int twice) { return HalfInt(twice); }
    // Throws if value is not on the half-integer grid.
    static HalfInt from_double(double value);

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return 0.5 * twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }

    constexpr HalfInt operator-() const { return HalfInt(-twice_); }
    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt(a.twice_ + b.twice_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt(a.twice_ - b.twice_); }
    friend constexpr bool operator==(HalfInt, HalfInt) = default;

    std::string str() const;

private:
    constexpr explicit HalfInt(int twice) : twice_(twice) {}
    int twice_ = 0;
};

constexpr HalfInt operator""_h(unsigned long long twice) {
    return HalfInt::from_twice(static_cast<int>(twice));
}

struct ThreeJArgs {
    HalfInt j1, j2, j3;
    HalfInt m1, m2, m3;

    static ThreeJArgs from_doubles(double j1, double j2, double j3, double m1, double m2, double m3);
};

// Racah closed form; selection-rule violations give 0.
double wigner3j(const ThreeJArgs& a);

struct AngularMomentum {
    quantum::OperatorMatrix fx, fy, fz, f_plus, f_minus;
};

// (2f+1)-dimensional matrices in the |f, m> basis ordered m = -f .. +f.
AngularMomentum angular_momentum_ops(HalfInt f);

// <f, m_row | F_q | f, m_col> by the Wigner-Eckart theorem with the reduced
// element <f||F||f> = sqrt(f(f+1)(2f+1)). q in {-1, 0, +1}; F_{+-1} = -+(Fx +- iFy)/sqrt(2).
quantum::OperatorMatrix spherical_component_wigner_eckart(HalfInt f, int q);

// F . e_x assembled from the spherical components above.
quantum::OperatorMatrix fx_wigner_eckart(HalfInt f);

}  // namespace shelvesim::spin
