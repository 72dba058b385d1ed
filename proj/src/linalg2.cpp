#include "ptkit/linalg2.hpp"

#include "ptkit/error.hpp"

#include <algorithm>
#include <cmath>

namespace ptkit {

cplx trace(const Mat2& m) { return m.m11 + m.m22; }

cplx det(const Mat2& m) { return m.m11 * m.m22 - m.m12 * m.m21; }

Mat2 inv(const Mat2& m) {
    const cplx d = det(m);
    if (!(std::abs(d) > 1e-300)) throw SingularMatrix("matrix is singular (|det| <= 1e-300)");
    const cplx r = 1.0 / d;
    return {r * m.m22, -r * m.m12, -r * m.m21, r * m.m11};
}

Mat2 mul(const Mat2& a, const Mat2& b) { return a * b; }

Mat2 adjoint(const Mat2& m) { return {std::conj(m.m11), std::conj(m.m21), std::conj(m.m12), std::conj(m.m22)}; }

double norm(const Mat2& m) {
    return std::sqrt(std::norm(m.m11) + std::norm(m.m12) + std::norm(m.m21) + std::norm(m.m22));
}

double max_abs(const Mat2& m) {
    return std::max({std::abs(m.m11), std::abs(m.m12), std::abs(m.m21), std::abs(m.m22)});
}

double norm(const Vec2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

PauliCoeffs pauli_decompose(const Mat2& m) {
    const cplx i(0.0, 1.0);
    return {(m.m11 + m.m22) / 2.0, (m.m12 + m.m21) / 2.0, i * (m.m12 - m.m21) / 2.0, (m.m11 - m.m22) / 2.0};
}

Mat2 pauli_compose(const PauliCoeffs& c) {
    const cplx i(0.0, 1.0);
    return {c.c0 + c.cz, c.cx - i * c.cy, c.cx + i * c.cy, c.c0 - c.cz};
}

namespace {

bool less_re_im(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Null vector of (m - lambda I), taken from whichever row has the larger norm.
Vec2 null_vector(const Mat2& m, cplx lambda, double scale, bool& ok) {
    const cplx p1 = m.m11 - lambda, q1 = m.m12;
    const cplx p2 = m.m21, q2 = m.m22 - lambda;
    const double n1 = std::sqrt(std::norm(p1) + std::norm(q1));
    const double n2 = std::sqrt(std::norm(p2) + std::norm(q2));
    ok = std::max(n1, n2) > 1e-14 * scale;
    Vec2 v = n1 >= n2 ? Vec2{-q1, p1} : Vec2{-q2, p2};
    const double nv = norm(v);
    if (nv == 0.0) {
        ok = false;
        return {1.0, 0.0};
    }
    return {v[0] / nv, v[1] / nv};
}

}  // namespace

Eig2 eig(const Mat2& m) {
    const cplx mean = (m.m11 + m.m22) / 2.0;
    const cplx half_diff = (m.m11 - m.m22) / 2.0;
    const cplx disc = std::sqrt(half_diff * half_diff + m.m12 * m.m21);

    // Pick the root that avoids cancellation, recover the other from det.
    cplx big = (std::real(std::conj(mean) * disc) >= 0.0) ? mean + disc : mean - disc;
    cplx small = (big != 0.0) ? det(m) / big : mean - (big - mean);
    if (big == 0.0) small = 0.0;

    Eig2 out;
    out.values = {big, small};
    if (less_re_im(out.values[1], out.values[0])) std::swap(out.values[0], out.values[1]);

    const double scale = std::max(max_abs(m), 1e-300);
    bool ok1 = true, ok2 = true;
    out.vectors[0] = null_vector(m, out.values[0], scale, ok1);
    out.vectors[1] = null_vector(m, out.values[1], scale, ok2);
    if (!ok1 && !ok2) {
        // m is a multiple of the identity: any basis is an eigenbasis.
        out.vectors = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
    } else if (!ok1 || !ok2) {
        const Vec2 good = ok1 ? out.vectors[0] : out.vectors[1];
        out.vectors = {good, good};
    }
    const cplx overlap = std::conj(out.vectors[0][0]) * out.vectors[1][0] +
                         std::conj(out.vectors[0][1]) * out.vectors[1][1];
    out.coalescence = std::min(1.0, std::abs(overlap));
    out.defective = out.coalescence >= 1.0 - kDefectiveThreshold;
    return out;
}

}  // namespace ptkit
