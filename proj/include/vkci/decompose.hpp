#pragma once

#include <array>
#include <cmath>

#include "vkci/calculus.hpp"
#include "vkci/grid.hpp"

namespace vkci {

/// The four fixed corrugation directions. Order matters: coefficients are
/// reported and steps are applied in this order.
inline const std::array<Vec2, 4>& primitive_directions() {
    static const std::array<Vec2, 4> dirs = {
        Vec2{1.0, 0.0},
        Vec2{0.0, 1.0},
        Vec2{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0},
        Vec2{std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0},
    };
    return dirs;
}

/// One rank-one slice of a deficit: direction eta from the fixed set plus the
/// nonnegative coefficient field (an amplitude squared).
struct Primitive {
    Vec2 eta;
    ScalarField coeff;
};

/// Split a cone-admissible deficit pointwise into nonnegative combinations of
/// eta_i (x) eta_i:
///   c1 = d11 - |d12|, c2 = d22 - |d12|, c3 = 2 max(d12, 0), c4 = 2 max(-d12, 0).
/// Admissibility |d12| <= min(d11, d22) is required exactly; violations throw
/// rather than clamp so schedule bugs surface at the offending node.
inline std::array<Primitive, 4> decompose(const SymTensorField& d) {
    const GridSpec& g = d.spec;
    std::array<Primitive, 4> out = {
        Primitive{primitive_directions()[0], ScalarField(g)},
        Primitive{primitive_directions()[1], ScalarField(g)},
        Primitive{primitive_directions()[2], ScalarField(g)},
        Primitive{primitive_directions()[3], ScalarField(g)},
    };
    for (std::size_t n = 0; n < g.nodes(); ++n) {
        const double d11 = d.at(n, 0), d12 = d.at(n, 1), d22 = d.at(n, 2);
        const double margin = std::min(d11, d22) - std::abs(d12);
        if (margin < 0.0) throw ConeViolationError(n, margin);
        out[0].coeff.at(n, 0) = d11 - std::abs(d12);
        out[1].coeff.at(n, 0) = d22 - std::abs(d12);
        out[2].coeff.at(n, 0) = 2.0 * std::max(d12, 0.0);
        out[3].coeff.at(n, 0) = 2.0 * std::max(-d12, 0.0);
    }
    return out;
}

/// Pointwise cone margin min(d11,d22) - |d12|; negative means decompose would
/// throw. Used by the solver to check targets before committing to a stage.
inline double cone_margin(const SymTensorField& d) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < d.spec.nodes(); ++n) {
        const double d11 = d.at(n, 0), d12 = d.at(n, 1), d22 = d.at(n, 2);
        m = std::min(m, std::min(d11, d22) - std::abs(d12));
    }
    return m;
}

/// Sum of coeff_i * eta_i (x) eta_i; exact right inverse of decompose.
template <typename Range>
SymTensorField reconstruct(const Range& primitives) {
    const GridSpec* g = nullptr;
    for (const Primitive& p : primitives) {
        if (!g) g = &p.coeff.spec;
        require_same_grid(*g, p.coeff.spec, "reconstruct");
    }
    if (!g) throw ConfigError("reconstruct: empty primitive list");
    SymTensorField out(*g);
    for (const Primitive& p : primitives) {
        const Sym2 ee = Sym2::outer(p.eta);
        for (std::size_t n = 0; n < g->nodes(); ++n) {
            const double c = p.coeff.at(n, 0);
            out.at(n, 0) += c * ee.m11;
            out.at(n, 1) += c * ee.m12;
            out.at(n, 2) += c * ee.m22;
        }
    }
    return out;
}

} // namespace vkci
