#pragma once

#include <array>
#include <cmath>

#include "vkci/errors.hpp"

namespace vkci {

struct Vec2 {
    double x = 0.0, y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

/// Symmetric 2x2 matrix, stored as (m11, m12, m22).
struct Sym2 {
    double m11 = 0.0, m12 = 0.0, m22 = 0.0;

    friend Sym2 operator+(Sym2 a, Sym2 b) { return {a.m11 + b.m11, a.m12 + b.m12, a.m22 + b.m22}; }
    friend Sym2 operator-(Sym2 a, Sym2 b) { return {a.m11 - b.m11, a.m12 - b.m12, a.m22 - b.m22}; }
    friend Sym2 operator*(double s, Sym2 a) { return {s * a.m11, s * a.m12, s * a.m22}; }

    double eig_min() const {
        const double m = 0.5 * (m11 + m22);
        const double r = std::hypot(0.5 * (m11 - m22), m12);
        return m - r;
    }
    double eig_max() const {
        const double m = 0.5 * (m11 + m22);
        const double r = std::hypot(0.5 * (m11 - m22), m12);
        return m + r;
    }
    /// Spectral norm = max |eigenvalue|.
    double spectral() const {
        const double m = 0.5 * (m11 + m22);
        const double r = std::hypot(0.5 * (m11 - m22), m12);
        return std::abs(m) + r;
    }
    double frobenius() const {
        return std::sqrt(m11 * m11 + 2.0 * m12 * m12 + m22 * m22);
    }
    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m12; }

    static Sym2 identity(double s = 1.0) { return {s, 0.0, s}; }
    static Sym2 outer(Vec2 v) { return {v.x * v.x, v.x * v.y, v.y * v.y}; }
};

/// General 2x2 matrix, row-major (rows are map components, columns are
/// partial derivatives when used as a Jacobian).
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    friend Mat2 operator+(Mat2 a, Mat2 b) {
        return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
    }
    friend Mat2 operator-(Mat2 a, Mat2 b) {
        return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
    }
    friend Mat2 operator*(double s, Mat2 a) { return {s * a.a11, s * a.a12, s * a.a21, s * a.a22}; }
    friend Mat2 operator*(Mat2 a, Mat2 b) {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
    Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }

    /// Symmetric part doubled: J + J^T.
    Sym2 twice_sym() const { return {2.0 * a11, a12 + a21, 2.0 * a22}; }

    /// Gram matrix J^T J (always symmetric PSD).
    Sym2 gram() const {
        return {a11 * a11 + a21 * a21, a11 * a12 + a21 * a22, a12 * a12 + a22 * a22};
    }

    double frobenius() const {
        return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
    }

    /// Spectral norm (largest singular value), closed form.
    double spectral() const {
        const double f2 = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
        const double d = det();
        const double disc = std::sqrt(std::max(f2 * f2 - 4.0 * d * d, 0.0));
        return std::sqrt(0.5 * (f2 + disc));
    }

    static Mat2 identity(double s = 1.0) { return {s, 0.0, 0.0, s}; }
    static Mat2 rotation(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, s, c};
    }
    static Mat2 from_sym(Sym2 s) { return {s.m11, s.m12, s.m12, s.m22}; }
};

struct PolarResult {
    double distance;  ///< Frobenius distance of F to SO(2), |sqrt(F^T F) - I|.
    Mat2 rotation;    ///< Nearest rotation F (sqrt(F^T F))^{-1}.
};

/// Polar decomposition of an orientation-preserving 2x2 matrix. The matrix
/// square root of S = F^T F has the closed form
/// (S + sqrt(det S) I) / sqrt(tr S + 2 sqrt(det S)).
inline PolarResult nearest_rotation(Mat2 f) {
    if (!(f.det() > 0.0)) throw NonOrientationError("nearest_rotation");
    const Sym2 s = f.gram();
    const double sd = std::sqrt(s.det());
    const double denom = std::sqrt(s.trace() + 2.0 * sd);
    const Sym2 root{(s.m11 + sd) / denom, s.m12 / denom, (s.m22 + sd) / denom};
    const Sym2 dev{root.m11 - 1.0, root.m12, root.m22 - 1.0};

    // invert sqrt(S): 2x2 closed form, det(root) = sd
    const double rd = root.m11 * root.m22 - root.m12 * root.m12;
    const Mat2 inv_root{root.m22 / rd, -root.m12 / rd, -root.m12 / rd, root.m11 / rd};
    return {dev.frobenius(), f * inv_root};
}

/// Rotation angle in (-pi, pi] of the polar factor of f.
inline double polar_angle(Mat2 f) {
    return std::atan2(f.a21 - f.a12, f.a11 + f.a22);
}

} // namespace vkci
