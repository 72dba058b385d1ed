#pragma once

// Exact-size complex 2x2 linear algebra.

#include <array>
#include <complex>

namespace ptkit {

using cplx = std::complex<double>;
using Vec2 = std::array<cplx, 2>;

struct Mat2 {
    cplx m11{}, m12{}, m21{}, m22{};

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 diag(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
    }
    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
                a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
    }
    friend Mat2 operator*(cplx s, const Mat2& a) { return {s * a.m11, s * a.m12, s * a.m21, s * a.m22}; }
    friend Vec2 operator*(const Mat2& a, const Vec2& v) {
        return {a.m11 * v[0] + a.m12 * v[1], a.m21 * v[0] + a.m22 * v[1]};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

namespace pauli {
inline constexpr Mat2 sx{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 sy{0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0};
inline constexpr Mat2 sz{1.0, 0.0, 0.0, -1.0};
/// sigma_+ = (sx + i sy)/2
inline constexpr Mat2 splus{0.0, 1.0, 0.0, 0.0};
/// sigma_- = (sx - i sy)/2
inline constexpr Mat2 sminus{0.0, 0.0, 1.0, 0.0};
}  // namespace pauli

/// Coefficients of m = c0 I + cx sx + cy sy + cz sz.
struct PauliCoeffs {
    cplx c0, cx, cy, cz;
};

cplx trace(const Mat2& m);
cplx det(const Mat2& m);
/// Throws SingularMatrix when |det| <= 1e-300.
Mat2 inv(const Mat2& m);
Mat2 mul(const Mat2& a, const Mat2& b);
Mat2 adjoint(const Mat2& m);
/// Frobenius norm.
double norm(const Mat2& m);
/// Largest entry modulus.
double max_abs(const Mat2& m);
double norm(const Vec2& v);

PauliCoeffs pauli_decompose(const Mat2& m);
Mat2 pauli_compose(const PauliCoeffs& c);

/// Eigen-decomposition result. Eigenvalues are sorted by (real, imag)
/// ascending; eigenvectors have unit Euclidean norm.
struct Eig2 {
    std::array<cplx, 2> values;
    std::array<Vec2, 2> vectors;
    /// |<v1, v2>| in [0, 1]; 1 means the eigenvectors coalesced.
    double coalescence = 0.0;
    /// coalescence >= 1 - 1e-8
    bool defective = false;
};

inline constexpr double kDefectiveThreshold = 1e-8;

Eig2 eig(const Mat2& m);

}  // namespace ptkit
