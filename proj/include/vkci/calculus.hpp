#pragma once

#include <cstddef>

#include "vkci/grid.hpp"

namespace vkci {

namespace detail {

// Second-order stencils: centered in the interior, one-sided on the first
// and last row/column. Both are exact on quadratics.
template <typename At>
double d_line(At&& f, std::size_t i, std::size_t n, double h) {
    if (i == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    if (i == n - 1) return (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
    return (f(i + 1) - f(i - 1)) / (2.0 * h);
}

} // namespace detail

/// Partial derivatives of one component of a field; dx into out component
/// `cdx`, dy into `cdy`.
template <std::size_t NCIN, std::size_t NCOUT>
void differentiate_component(const Field<NCIN>& in, std::size_t c,
                             Field<NCOUT>& out, std::size_t cdx, std::size_t cdy) {
    const GridSpec& g = in.spec;
    const double hx = g.hx(), hy = g.hy();
    for (std::size_t iy = 0; iy < g.ny; ++iy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            out.at(ix, iy, cdx) = detail::d_line(
                [&](std::size_t i) { return in.at(i, iy, c); }, ix, g.nx, hx);
            out.at(ix, iy, cdy) = detail::d_line(
                [&](std::size_t j) { return in.at(ix, j, c); }, iy, g.ny, hy);
        }
}

/// Discrete gradient of a scalar field, (d/dx, d/dy) per node.
inline PlanarMapField grad_scalar(const ScalarField& f) {
    PlanarMapField out(f.spec);
    differentiate_component(f, 0, out, 0, 1);
    return out;
}

/// Full Jacobian of a planar map, entries (d1 F1, d2 F1, d1 F2, d2 F2).
inline Tensor2Field grad_map(const PlanarMapField& f) {
    Tensor2Field out(f.spec);
    differentiate_component(f, 0, out, 0, 1);
    differentiate_component(f, 1, out, 2, 3);
    return out;
}

/// Discrete Hessian as grad_map(grad_scalar(f)); symmetric up to stencil error.
inline Tensor2Field hessian_scalar(const ScalarField& f) {
    return grad_map(grad_scalar(f));
}

/// Jacobian of an R^3-valued map: rows 0..2 are components, giving a 3x2
/// matrix per node stored as six values (dx u1, dy u1, dx u2, dy u2, dx u3, dy u3).
struct Jacobian3x2Field : Field<6> {
    using Field<6>::Field;
};

inline Jacobian3x2Field grad_immersion(const ImmersionField& u) {
    Jacobian3x2Field out(u.spec);
    differentiate_component(u, 0, out, 0, 1);
    differentiate_component(u, 1, out, 2, 3);
    differentiate_component(u, 2, out, 4, 5);
    return out;
}

/// Constraint deficit D = A - grad v (x) grad v - (J + J^T), J = grad w.
/// The pair (v, w) solves the system exactly where D vanishes.
inline SymTensorField vk_residual(const ScalarField& v, const PlanarMapField& w,
                                  const SymTensorField& a) {
    require_same_grid(v.spec, w.spec, "vk_residual");
    require_same_grid(v.spec, a.spec, "vk_residual");
    const PlanarMapField g = grad_scalar(v);
    const Tensor2Field j = grad_map(w);
    SymTensorField out(v.spec);
    for (std::size_t n = 0; n < v.spec.nodes(); ++n) {
        const double g1 = g.at(n, 0), g2 = g.at(n, 1);
        out.at(n, 0) = a.at(n, 0) - g1 * g1 - 2.0 * j.at(n, 0);
        out.at(n, 1) = a.at(n, 1) - g1 * g2 - (j.at(n, 1) + j.at(n, 2));
        out.at(n, 2) = a.at(n, 2) - g2 * g2 - 2.0 * j.at(n, 3);
    }
    return out;
}

/// Smallest deficit eigenvalue over all nodes. Positive return c means the
/// pair is short with margin c; negative means not short.
inline double shortness_margin(const ScalarField& v, const PlanarMapField& w,
                               const SymTensorField& a) {
    const SymTensorField d = vk_residual(v, w, a);
    double m = d.sym(0).eig_min();
    for (std::size_t n = 1; n < d.spec.nodes(); ++n)
        m = std::min(m, d.sym(n).eig_min());
    return m;
}

inline SymTensorField shift_identity(const SymTensorField& f, double s) {
    SymTensorField out = f;
    for (std::size_t n = 0; n < f.spec.nodes(); ++n) {
        out.at(n, 0) += s;
        out.at(n, 2) += s;
    }
    return out;
}

inline double min_eig(const SymTensorField& f) {
    double m = f.sym(0).eig_min();
    for (std::size_t n = 1; n < f.spec.nodes(); ++n) m = std::min(m, f.sym(n).eig_min());
    return m;
}

} // namespace vkci
