#pragma once

#include <cmath>
#include <vector>

#include "vkci/grid.hpp"

namespace vkci {

/// Separable truncated-Gaussian smoothing with standard deviation `len` and
/// support radius 4*len. Near the boundary the kernel is renormalized over
/// the in-range taps, so constants are reproduced exactly and the sup norm
/// never increases. Requires len >= 2h.
template <std::size_t NC>
Field<NC> mollify(const Field<NC>& f, double len) {
    const GridSpec& g = f.spec;
    const double h = g.h();
    if (!(len >= 2.0 * h)) throw ConfigError("mollify requires len >= 2h");

    const std::size_t radius = std::size_t(std::ceil(4.0 * len / h));
    std::vector<double> taps(radius + 1);
    for (std::size_t k = 0; k <= radius; ++k) {
        const double t = double(k) * h / len;
        taps[k] = std::exp(-0.5 * t * t);
    }

    auto convolve_line = [&](auto&& get, auto&& set, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = taps[0] * get(i);
            double wsum = taps[0];
            for (std::size_t k = 1; k <= radius; ++k) {
                if (i + k < n) { acc += taps[k] * get(i + k); wsum += taps[k]; }
                if (i >= k)    { acc += taps[k] * get(i - k); wsum += taps[k]; }
            }
            set(i, acc / wsum);
        }
    };

    Field<NC> tmp(g), out(g);
    for (std::size_t c = 0; c < NC; ++c) {
        for (std::size_t iy = 0; iy < g.ny; ++iy)
            convolve_line([&](std::size_t i) { return f.at(i, iy, c); },
                          [&](std::size_t i, double v) { tmp.at(i, iy, c) = v; }, g.nx);
        for (std::size_t ix = 0; ix < g.nx; ++ix)
            convolve_line([&](std::size_t j) { return tmp.at(ix, j, c); },
                          [&](std::size_t j, double v) { out.at(ix, j, c) = v; }, g.ny);
    }
    return out;
}

inline ScalarField mollify(const ScalarField& f, double len) {
    ScalarField out(f.spec);
    static_cast<Field<1>&>(out) = mollify(static_cast<const Field<1>&>(f), len);
    return out;
}
inline PlanarMapField mollify(const PlanarMapField& f, double len) {
    PlanarMapField out(f.spec);
    static_cast<Field<2>&>(out) = mollify(static_cast<const Field<2>&>(f), len);
    return out;
}
inline SymTensorField mollify(const SymTensorField& f, double len) {
    SymTensorField out(f.spec);
    static_cast<Field<3>&>(out) = mollify(static_cast<const Field<3>&>(f), len);
    return out;
}

} // namespace vkci
