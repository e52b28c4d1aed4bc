#pragma once

#include <cmath>
#include <limits>

#include "vkci/calculus.hpp"
#include "vkci/errors.hpp"
#include "vkci/grid.hpp"
#include "vkci/mat2.hpp"
#include "vkci/norms.hpp"

namespace vkci {

/// Scale budget for embedding the planar problem into the isometric-immersion
/// problem for the metric I + t^2 A. All derived quantities scale linearly in
/// t, which makes the smallness product t-independent.
struct ReductionPlan {
    double t = 0.0;        ///< chosen scale, min(t_request, t0/2)
    double t0 = 0.0;       ///< admissibility bound, t0^2 = r / |A|_sup
    double r = 0.5;        ///< closeness radius
    double deficit = 0.0;  ///< D, with |grad v (x) grad v - A|_sup = D^2/2
    double m = 0.0;        ///< curvature bound, >= 2(1 + |hess v| + D), raised for smallness
    double delta_t = 0.0;  ///< D t
    double mu_t = 0.0;     ///< M t
    double theta_t = 0.0;  ///< sqrt(1 + [A]_beta) t
    double a_beta = 0.0;
    double eps0 = 0.1;
    double smallness = 0.0;  ///< delta_t^(beta-2) mu_t^-beta theta_t^2
    bool clamped = false;    ///< t_request exceeded t0/2
};

inline ReductionPlan plan_reduction(const ScalarField& v, const SymTensorField& a, double beta,
                                    double r, double eps0, double t_request) {
    require_same_grid(v.spec, a.spec, "plan_reduction");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("plan_reduction: beta in (0,1)");
    if (!(r > 0.0) || !(eps0 > 0.0) || !(t_request > 0.0))
        throw ConfigError("plan_reduction: r, eps0, t must be positive");

    const PlanarMapField g = grad_scalar(v);
    SymTensorField dev(v.spec);
    for (std::size_t n = 0; n < v.spec.nodes(); ++n) {
        const double g1 = g.at(n, 0), g2 = g.at(n, 1);
        dev.at(n, 0) = g1 * g1 - a.at(n, 0);
        dev.at(n, 1) = g1 * g2 - a.at(n, 1);
        dev.at(n, 2) = g2 * g2 - a.at(n, 2);
    }
    const double dev_sup = norm_sup(dev);
    if (dev_sup <= 0.0) throw DegenerateDeficitError();

    ReductionPlan plan;
    plan.r = r;
    plan.eps0 = eps0;
    plan.a_beta = holder_seminorm(a, beta);
    plan.deficit = std::sqrt(2.0 * dev_sup);

    const double hess = norm_sup(hessian_scalar(v));
    const double m_floor = 2.0 * (1.0 + hess + plan.deficit);
    const double m_small = std::pow(
        (1.0 + plan.a_beta) * std::pow(plan.deficit, beta - 2.0) / eps0, 1.0 / beta);
    plan.m = std::max(m_floor, m_small);

    const double a_sup = norm_sup(a);
    plan.t0 = a_sup > 0.0 ? std::sqrt(r / a_sup) : std::numeric_limits<double>::infinity();
    plan.clamped = t_request > 0.5 * plan.t0;
    plan.t = plan.clamped ? 0.5 * plan.t0 : t_request;

    plan.delta_t = plan.deficit * plan.t;
    plan.mu_t = plan.m * plan.t;
    plan.theta_t = std::sqrt(1.0 + plan.a_beta) * plan.t;
    plan.smallness = std::pow(plan.delta_t, beta - 2.0) * std::pow(plan.mu_t, -beta) *
                     plan.theta_t * plan.theta_t;
    return plan;
}

/// Graph lift u(x) = (x, t v(x)).
inline ImmersionField lift_graph(const ScalarField& v, double t) {
    if (!(t > 0.0)) throw ConfigError("lift_graph: t must be positive");
    ImmersionField u(v.spec);
    for (std::size_t iy = 0; iy < v.spec.ny; ++iy)
        for (std::size_t ix = 0; ix < v.spec.nx; ++ix) {
            const std::size_t n = v.spec.node(ix, iy);
            u.at(n, 0) = v.spec.x(ix);
            u.at(n, 1) = v.spec.y(iy);
            u.at(n, 2) = t * v.at(n, 0);
        }
    return u;
}

/// Displacement lift u(x) = (x + t^2 w(x), t v(x)). Its discrete pullback
/// satisfies exactly u*e = I + t^2 (2 sym grad w + grad v (x) grad v)
///                         + t^4 (grad w)^T (grad w).
inline ImmersionField vk_lift(const ScalarField& v, const PlanarMapField& w, double t) {
    require_same_grid(v.spec, w.spec, "vk_lift");
    if (!(t > 0.0)) throw ConfigError("vk_lift: t must be positive");
    ImmersionField u(v.spec);
    for (std::size_t iy = 0; iy < v.spec.ny; ++iy)
        for (std::size_t ix = 0; ix < v.spec.nx; ++ix) {
            const std::size_t n = v.spec.node(ix, iy);
            u.at(n, 0) = v.spec.x(ix) + t * t * w.at(n, 0);
            u.at(n, 1) = v.spec.y(iy) + t * t * w.at(n, 1);
            u.at(n, 2) = t * v.at(n, 0);
        }
    return u;
}

/// Pullback metric (u*e)_ij = d_i u . d_j u, the Gram matrix of the discrete
/// Jacobian columns.
inline SymTensorField pullback_metric(const ImmersionField& u) {
    const Jacobian3x2Field j = grad_immersion(u);
    SymTensorField g(u.spec);
    for (std::size_t n = 0; n < u.spec.nodes(); ++n) {
        const double ux = j.at(n, 0), uy = j.at(n, 1);
        const double vx = j.at(n, 2), vy = j.at(n, 3);
        const double wx = j.at(n, 4), wy = j.at(n, 5);
        g.at(n, 0) = ux * ux + vx * vx + wx * wx;
        g.at(n, 1) = ux * uy + vx * vy + wx * wy;
        g.at(n, 2) = uy * uy + vy * vy + wy * wy;
    }
    return g;
}

/// Planar map Phi(x) = x + t^2 w(x), the in-plane factor of vk_lift.
inline PlanarMapField planar_shift(const PlanarMapField& w, double t) {
    PlanarMapField phi(w.spec);
    for (std::size_t iy = 0; iy < w.spec.ny; ++iy)
        for (std::size_t ix = 0; ix < w.spec.nx; ++ix) {
            const std::size_t n = w.spec.node(ix, iy);
            phi.at(n, 0) = w.spec.x(ix) + t * t * w.at(n, 0);
            phi.at(n, 1) = w.spec.y(iy) + t * t * w.at(n, 1);
        }
    return phi;
}

struct ExtractionResult {
    Mat2 rotation;      ///< R with R^T R = I, det R = 1
    double angle = 0.0; ///< rotation angle of R
    PlanarMapField w;   ///< zero-mean displacement with grad Phi = R + t^2 grad w
    double c_rigidity = 0.0;  ///< |grad w|_Lp / |dist_SO2(grad Phi)/t^2|_Lp, 0 if exact
    double dist_lp = 0.0;     ///< |dist_SO2(grad Phi)|_Lp
    double gradw_lp = 0.0;
};

/// Rotation/displacement split of a near-rigid planar map: R is the polar
/// rotation of the area-averaged Jacobian, w collects the remainder scaled by
/// t^2 and centered to zero mean. The identity grad Phi = R + t^2 grad w is
/// exact because the discrete gradient reproduces affine maps exactly.
inline ExtractionResult rigidity_extract(const PlanarMapField& phi, double t, double p) {
    if (!(t > 0.0)) throw ConfigError("rigidity_extract: t must be positive");
    const GridSpec& g = phi.spec;
    const Tensor2Field j = grad_map(phi);

    const double area = (g.x1 - g.x0) * (g.y1 - g.y0);
    const double cell = g.hx() * g.hy();
    Mat2 mean_j{};
    double dist_acc = 0.0;
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        const double wy = (iy == 0 || iy == g.ny - 1) ? 0.5 : 1.0;
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double wx = (ix == 0 || ix == g.nx - 1) ? 0.5 : 1.0;
            const Mat2 m = j.mat(g.node(ix, iy));
            if (!(m.det() > 0.0)) throw NonOrientationError("rigidity_extract");
            const double weight = wx * wy * cell;
            mean_j = mean_j + (weight / area) * m;
            dist_acc += weight * std::pow(nearest_rotation(m).distance, p);
        }
    }
    ExtractionResult res;
    res.rotation = nearest_rotation(mean_j).rotation;
    res.angle = polar_angle(mean_j);
    res.dist_lp = std::pow(dist_acc, 1.0 / p);

    // remainder, then recenter so w has zero (area-weighted) mean
    res.w = PlanarMapField(g);
    Vec2 mean_w{};
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        const double wy = (iy == 0 || iy == g.ny - 1) ? 0.5 : 1.0;
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double wx = (ix == 0 || ix == g.nx - 1) ? 0.5 : 1.0;
            const std::size_t n = g.node(ix, iy);
            const Vec2 x{g.x(ix), g.y(iy)};
            const Vec2 rx = res.rotation.apply(x);
            const Vec2 raw{(phi.at(n, 0) - rx.x) / (t * t), (phi.at(n, 1) - rx.y) / (t * t)};
            res.w.set(n, raw);
            mean_w = mean_w + (wx * wy * cell / area) * raw;
        }
    }
    for (std::size_t n = 0; n < g.nodes(); ++n)
        res.w.set(n, res.w.vec(n) - mean_w);

    res.gradw_lp = norm_lp(grad_map(res.w), p);
    const double denom = res.dist_lp / (t * t);
    // guard the exact-rigid-motion case, where both sides are rounding noise
    res.c_rigidity = denom > 1e-12 / (t * t) ? res.gradw_lp / denom : 0.0;
    return res;
}

/// Rotate a displacement field pointwise: x -> R w(x).
inline PlanarMapField rotate_map(const PlanarMapField& w, Mat2 r) {
    PlanarMapField out(w.spec);
    for (std::size_t n = 0; n < w.spec.nodes(); ++n) out.set(n, r.apply(w.vec(n)));
    return out;
}

/// Residual of the scaled in-plane system
///   2 sym grad w + t^2 (grad w)^T (grad w) - (A - grad v (x) grad v).
/// Vanishes identically when (v, w) comes from an exact isometric immersion
/// of I + t^2 A; on solver output its sup norm is the t-level defect.
inline SymTensorField scaled_constraint_residual(const PlanarMapField& w, const ScalarField& v,
                                                 const SymTensorField& a, double t) {
    require_same_grid(w.spec, v.spec, "scaled_constraint_residual");
    require_same_grid(w.spec, a.spec, "scaled_constraint_residual");
    const Tensor2Field j = grad_map(w);
    const PlanarMapField g = grad_scalar(v);
    SymTensorField out(w.spec);
    for (std::size_t n = 0; n < w.spec.nodes(); ++n) {
        const Mat2 jm = j.mat(n);
        const Sym2 lhs = jm.twice_sym() + t * t * jm.gram();
        const double g1 = g.at(n, 0), g2 = g.at(n, 1);
        const Sym2 rhs{a.at(n, 0) - g1 * g1, a.at(n, 1) - g1 * g2, a.at(n, 2) - g2 * g2};
        out.set(n, lhs - rhs);
    }
    return out;
}

} // namespace vkci
