#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace swt {

using cplx = std::complex<double>;

// Dense complex 4x4, row-major. Small enough that everything is by value.
struct Mat4 {
    std::array<cplx, 16> a{};

    cplx& operator()(int i, int j) { return a[4 * i + j]; }
    const cplx& operator()(int i, int j) const { return a[4 * i + j]; }

    static Mat4 identity() {
        Mat4 m;
        for (int i = 0; i < 4; ++i) m(i, i) = 1.0;
        return m;
    }

    Mat4 operator+(const Mat4& o) const {
        Mat4 r;
        for (int k = 0; k < 16; ++k) r.a[k] = a[k] + o.a[k];
        return r;
    }
    Mat4 operator-(const Mat4& o) const {
        Mat4 r;
        for (int k = 0; k < 16; ++k) r.a[k] = a[k] - o.a[k];
        return r;
    }
    Mat4 operator*(const Mat4& o) const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                cplx s = 0.0;
                for (int k = 0; k < 4; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Mat4 operator*(cplx c) const {
        Mat4 r;
        for (int k = 0; k < 16; ++k) r.a[k] = a[k] * c;
        return r;
    }

    Mat4 transpose() const {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r(i, j) = (*this)(j, i);
        return r;
    }
    Mat4 conj() const {
        Mat4 r;
        for (int k = 0; k < 16; ++k) r.a[k] = std::conj(a[k]);
        return r;
    }
    Mat4 adjoint() const { return conj().transpose(); }

    cplx trace() const { return a[0] + a[5] + a[10] + a[15]; }

    double fro_norm() const {
        double s = 0.0;
        for (const cplx& z : a) s += std::norm(z);
        return std::sqrt(s);
    }
};

using Vec4 = std::array<cplx, 4>;

inline Vec4 operator*(const Mat4& m, const Vec4& v) {
    Vec4 r{};
    for (int i = 0; i < 4; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < 4; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

inline double norm2(const Vec4& v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline cplx dot(const Vec4& x, const Vec4& y) {  // conjugate-linear in x
    cplx s = 0.0;
    for (int i = 0; i < 4; ++i) s += std::conj(x[i]) * y[i];
    return s;
}

// Determinant by Laplace expansion on 2x2 minors of the first two rows.
// Six complex multiplies of exact minors: integer inputs stay exact.
inline cplx det4(const Mat4& m) {
    auto minor2 = [&](int r0, int r1, int c0, int c1) {
        return m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    };
    const cplx a01 = minor2(0, 1, 0, 1), a02 = minor2(0, 1, 0, 2), a03 = minor2(0, 1, 0, 3);
    const cplx a12 = minor2(0, 1, 1, 2), a13 = minor2(0, 1, 1, 3), a23 = minor2(0, 1, 2, 3);
    const cplx b01 = minor2(2, 3, 0, 1), b02 = minor2(2, 3, 0, 2), b03 = minor2(2, 3, 0, 3);
    const cplx b12 = minor2(2, 3, 1, 2), b13 = minor2(2, 3, 1, 3), b23 = minor2(2, 3, 2, 3);
    return a01 * b23 - a02 * b13 + a03 * b12 + a12 * b03 - a13 * b02 + a23 * b01;
}

}  // namespace swt
