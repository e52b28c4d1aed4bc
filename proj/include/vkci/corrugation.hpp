#pragma once

#include <cmath>
#include <numbers>

#include "vkci/calculus.hpp"
#include "vkci/grid.hpp"
#include "vkci/norms.hpp"

namespace vkci {

/// One corrugation: direction eta (from the fixed primitive set), pointwise
/// amplitude a >= 0 with a^2 the deficit coefficient to cancel, and frequency
/// lambda. lambda*h <= 1/4 keeps the oscillation resolvable by the stencils.
struct StepParams {
    Vec2 eta;
    ScalarField amp;
    double lambda = 0.0;
};

struct StepResult {
    ScalarField v;
    PlanarMapField w;
};

inline void validate_step(const StepParams& p, const GridSpec& g) {
    require_same_grid(p.amp.spec, g, "corrugation step");
    if (!(p.lambda > 0.0)) throw ConfigError("step: lambda must be positive");
    if (p.lambda * g.h() > 0.25 + 1e-12)
        throw ConfigError("step: lambda*h must not exceed 1/4");
    const double unit = std::abs(p.eta.norm() - 1.0);
    if (unit > 1e-12) throw ConfigError("step: eta must be a unit direction");
    for (double a : p.amp.values)
        if (a < 0.0) throw ConfigError("step: amplitude must be nonnegative");
}

/// Apply one corrugation to (v, w):
///   v' = v + (sqrt(2) a / lambda) sin(lambda x.eta)
///   w' = w - (sqrt(2) a / lambda) sin(lambda x.eta) grad v
///          - (a^2 / (4 lambda)) sin(2 lambda x.eta) eta
/// with grad v the discrete gradient of the incoming v, recomputed here so
/// the deficit transformation is an identity of the discrete operators.
/// The profiles satisfy gamma1'^2 + 2 gamma2' = 1 pointwise, which cancels
/// a^2 eta (x) eta from the deficit exactly in the constant-coefficient case.
inline StepResult corrugation_step(const ScalarField& v, const PlanarMapField& w,
                                   const StepParams& p) {
    require_same_grid(v.spec, w.spec, "corrugation step");
    validate_step(p, v.spec);
    const GridSpec& g = v.spec;
    const double sqrt2 = std::numbers::sqrt2;
    const PlanarMapField gv = grad_scalar(v);

    StepResult out{v, w};
    for (std::size_t iy = 0; iy < g.ny; ++iy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const std::size_t n = g.node(ix, iy);
            const double a = p.amp.at(n, 0);
            if (a == 0.0) continue;
            const double phase = p.lambda * (g.x(ix) * p.eta.x + g.y(iy) * p.eta.y);
            const double s1 = std::sin(phase);
            const double s2 = std::sin(2.0 * phase);
            const double bump = sqrt2 * a / p.lambda * s1;
            out.v.at(n, 0) += bump;
            out.w.at(n, 0) -= bump * gv.at(n, 0) + a * a / (4.0 * p.lambda) * s2 * p.eta.x;
            out.w.at(n, 1) -= bump * gv.at(n, 1) + a * a / (4.0 * p.lambda) * s2 * p.eta.y;
        }
    return out;
}

/// A-priori bound on the non-rank-one remainder the step leaves in the
/// deficit (analytic part; finite-difference error of order (lambda h)^2
/// comes on top):
///   (8/lambda) ( |grad a| (1 + |grad v| + |a|) + |a| |hess v| ).
/// The planner budgets stages against this.
inline double step_error_bound(const ScalarField& v, const StepParams& p) {
    require_same_grid(v.spec, p.amp.spec, "step_error_bound");
    const double ga = norm_sup(grad_scalar(p.amp));
    const double na = norm_sup(p.amp);
    const double gv = norm_sup(grad_scalar(v));
    const double hv = norm_sup(hessian_scalar(v));
    return 8.0 / p.lambda * (ga * (1.0 + gv + na) + na * hv);
}

/// Finite-difference allowance paired with step_error_bound in the per-step
/// measured-increment contract.
inline double step_fd_allowance(const ScalarField& v, const StepParams& p) {
    const double lh = p.lambda * v.spec.h();
    const double gv = norm_sup(grad_scalar(v));
    const double na = norm_sup(p.amp);
    const double scale = 1.0 + gv + na;
    return 3.0 * lh * lh * scale * scale;
}

} // namespace vkci
