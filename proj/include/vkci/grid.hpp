#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "vkci/errors.hpp"
#include "vkci/mat2.hpp"

namespace vkci {

/// Uniform tensor-product grid on a rectangle. Nodes include both endpoints,
/// so spacing is (x1-x0)/(nx-1). Square cells are required (hx == hy).
struct GridSpec {
    std::size_t nx = 0, ny = 0;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

    GridSpec() = default;
    GridSpec(std::size_t nx_, std::size_t ny_,
             double x0_ = 0.0, double x1_ = 1.0, double y0_ = 0.0, double y1_ = 1.0)
        : nx(nx_), ny(ny_), x0(x0_), x1(x1_), y0(y0_), y1(y1_) {
        if (nx < 9 || ny < 9) throw ConfigError("grid needs at least 9 nodes per axis");
        if (!(x1 > x0) || !(y1 > y0)) throw ConfigError("degenerate grid domain");
        if (std::abs(hx() - hy()) > 1e-12 * std::max(hx(), hy()))
            throw ConfigError("grid spacing must be isotropic (hx == hy)");
    }

    double hx() const { return (x1 - x0) / double(nx - 1); }
    double hy() const { return (y1 - y0) / double(ny - 1); }
    double h() const { return hx(); }

    double x(std::size_t ix) const { return x0 + double(ix) * hx(); }
    double y(std::size_t iy) const { return y0 + double(iy) * hy(); }

    std::size_t nodes() const { return nx * ny; }
    std::size_t node(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }

    bool operator==(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && x0 == o.x0 && x1 == o.x1 && y0 == o.y0 && y1 == o.y1;
    }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw ConfigError(std::string("grid mismatch in ") + where);
}

namespace detail {
inline void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw ConfigError(std::string(what) + ": non-finite value");
}
} // namespace detail

/// Field with `NC` interleaved components per node, row-major over nodes
/// (y-index outer, x-index inner), component-innermost. All field types are
/// immutable values in spirit: operations return new fields.
template <std::size_t NC>
struct Field {
    GridSpec spec;
    std::vector<double> values;

    Field() = default;
    explicit Field(const GridSpec& s, double fill = 0.0)
        : spec(s), values(s.nodes() * NC, fill) {}
    Field(const GridSpec& s, std::vector<double> vals) : spec(s), values(std::move(vals)) {
        if (values.size() != spec.nodes() * NC) throw ConfigError("field value count mismatch");
        detail::check_finite(values, "field");
    }

    static constexpr std::size_t components = NC;
    std::size_t size() const { return values.size(); }

    double& at(std::size_t node, std::size_t c = 0) { return values[node * NC + c]; }
    double at(std::size_t node, std::size_t c = 0) const { return values[node * NC + c]; }
    double& at(std::size_t ix, std::size_t iy, std::size_t c) {
        return values[(iy * spec.nx + ix) * NC + c];
    }
    double at(std::size_t ix, std::size_t iy, std::size_t c) const {
        return values[(iy * spec.nx + ix) * NC + c];
    }
};

struct ScalarField : Field<1> {
    using Field<1>::Field;
    double operator()(std::size_t ix, std::size_t iy) const { return at(ix, iy, 0); }
};

/// Two components per node: in-plane displacements and planar maps.
struct PlanarMapField : Field<2> {
    using Field<2>::Field;
    Vec2 vec(std::size_t node) const { return {at(node, 0), at(node, 1)}; }
    void set(std::size_t node, Vec2 v) { at(node, 0) = v.x; at(node, 1) = v.y; }
};

/// Symmetric tensor field, (m11, m12, m22) per node.
struct SymTensorField : Field<3> {
    using Field<3>::Field;
    Sym2 sym(std::size_t node) const { return {at(node, 0), at(node, 1), at(node, 2)}; }
    void set(std::size_t node, Sym2 s) {
        at(node, 0) = s.m11; at(node, 1) = s.m12; at(node, 2) = s.m22;
    }
};

/// Full 2x2 tensor field (Jacobians), (a11, a12, a21, a22) per node.
struct Tensor2Field : Field<4> {
    using Field<4>::Field;
    Mat2 mat(std::size_t node) const { return {at(node, 0), at(node, 1), at(node, 2), at(node, 3)}; }
    void set(std::size_t node, Mat2 m) {
        at(node, 0) = m.a11; at(node, 1) = m.a12; at(node, 2) = m.a21; at(node, 3) = m.a22;
    }
};

/// Maps into R^3 (graph lifts and displacement lifts).
struct ImmersionField : Field<3> {
    using Field<3>::Field;
};

/// Build a scalar field from a callable f(x, y).
template <typename F>
ScalarField make_scalar(const GridSpec& spec, F&& f) {
    ScalarField out(spec);
    for (std::size_t iy = 0; iy < spec.ny; ++iy)
        for (std::size_t ix = 0; ix < spec.nx; ++ix)
            out.at(ix, iy, 0) = f(spec.x(ix), spec.y(iy));
    return out;
}

template <typename F>
PlanarMapField make_map(const GridSpec& spec, F&& f) {
    PlanarMapField out(spec);
    for (std::size_t iy = 0; iy < spec.ny; ++iy)
        for (std::size_t ix = 0; ix < spec.nx; ++ix) {
            const Vec2 v = f(spec.x(ix), spec.y(iy));
            out.at(ix, iy, 0) = v.x;
            out.at(ix, iy, 1) = v.y;
        }
    return out;
}

template <typename F>
SymTensorField make_sym_tensor(const GridSpec& spec, F&& f) {
    SymTensorField out(spec);
    for (std::size_t iy = 0; iy < spec.ny; ++iy)
        for (std::size_t ix = 0; ix < spec.nx; ++ix) {
            const Sym2 s = f(spec.x(ix), spec.y(iy));
            out.at(ix, iy, 0) = s.m11;
            out.at(ix, iy, 1) = s.m12;
            out.at(ix, iy, 2) = s.m22;
        }
    return out;
}

/// out = alpha * x + y, preserving the concrete field type.
template <typename FieldT>
FieldT axpy(double alpha, const FieldT& x, const FieldT& y) {
    require_same_grid(x.spec, y.spec, "axpy");
    FieldT out(x.spec);
    for (std::size_t i = 0; i < x.values.size(); ++i)
        out.values[i] = alpha * x.values[i] + y.values[i];
    return out;
}

} // namespace vkci
