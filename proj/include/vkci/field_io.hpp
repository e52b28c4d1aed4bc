#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vkci/errors.hpp"
#include "vkci/grid.hpp"

namespace vkci {

using ordered_json = nlohmann::ordered_json;

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline const char* field_kind_name(std::size_t components) {
    switch (components) {
        case 1: return "scalar";
        case 2: return "map2";
        case 3: return "symtensor";
        default: return "map3";
    }
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

/// Write a field as <name>.json manifest plus <name>.csv data. The CSV holds
/// one grid row per line, nodes in row-major order with components innermost.
template <std::size_t NC>
void write_field(const std::filesystem::path& dir, const std::string& name,
                 const Field<NC>& f, const char* kind_override = nullptr) {
    const GridSpec& g = f.spec;
    ordered_json manifest;
    manifest["name"] = name;
    manifest["kind"] = kind_override ? kind_override : field_kind_name(NC);
    manifest["nx"] = g.nx;
    manifest["ny"] = g.ny;
    manifest["domain"] = {g.x0, g.x1, g.y0, g.y1};
    manifest["data"] = name + ".csv";
    detail::write_text(dir / (name + ".json"), manifest.dump(2) + "\n");

    std::string csv;
    csv.reserve(f.values.size() * 20);
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        for (std::size_t ix = 0; ix < g.nx; ++ix)
            for (std::size_t c = 0; c < NC; ++c) {
                if (ix != 0 || c != 0) csv += ',';
                csv += format17(f.at(ix, iy, c));
            }
        csv += '\n';
    }
    detail::write_text(dir / (name + ".csv"), csv);
}

struct FieldManifest {
    std::string name;
    std::string kind;
    GridSpec spec;
    std::filesystem::path data_path;
};

inline FieldManifest read_manifest(const std::filesystem::path& json_path) {
    ordered_json j;
    try {
        j = ordered_json::parse(detail::read_text(json_path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad field manifest " + json_path.string() + ": " + e.what());
    }
    FieldManifest m;
    try {
        m.name = j.at("name").get<std::string>();
        m.kind = j.at("kind").get<std::string>();
        const auto dom = j.at("domain");
        m.spec = GridSpec(j.at("nx").get<std::size_t>(), j.at("ny").get<std::size_t>(),
                          dom.at(0).get<double>(), dom.at(1).get<double>(),
                          dom.at(2).get<double>(), dom.at(3).get<double>());
        m.data_path = json_path.parent_path() / j.at("data").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad field manifest " + json_path.string() + ": " + e.what());
    }
    return m;
}

template <std::size_t NC>
Field<NC> read_field_data(const FieldManifest& m) {
    const std::string text = detail::read_text(m.data_path);
    std::vector<double> vals;
    vals.reserve(m.spec.nodes() * NC);
    const char* p = text.c_str();
    const char* end = p + text.size();
    while (p < end) {
        char* next = nullptr;
        const double v = std::strtod(p, &next);
        if (next == p) {
            ++p;  // separator or newline
            continue;
        }
        vals.push_back(v);
        p = next;
    }
    if (vals.size() != m.spec.nodes() * NC)
        throw IoError("field data " + m.data_path.string() + ": expected " +
                      std::to_string(m.spec.nodes() * NC) + " values, got " +
                      std::to_string(vals.size()));
    try {
        return Field<NC>(m.spec, std::move(vals));
    } catch (const ConfigError& e) {
        throw IoError("field data " + m.data_path.string() + ": " + e.what());
    }
}

namespace detail {
template <typename FieldT>
FieldT read_as(const std::filesystem::path& json_path, const char* kind) {
    const FieldManifest m = read_manifest(json_path);
    if (m.kind != kind)
        throw IoError(json_path.string() + ": expected kind '" + kind + "', got '" + m.kind + "'");
    FieldT out(m.spec);
    static_cast<Field<FieldT::components>&>(out) = read_field_data<FieldT::components>(m);
    return out;
}
} // namespace detail

inline ScalarField read_scalar(const std::filesystem::path& p) {
    return detail::read_as<ScalarField>(p, "scalar");
}
inline PlanarMapField read_map2(const std::filesystem::path& p) {
    return detail::read_as<PlanarMapField>(p, "map2");
}
inline SymTensorField read_symtensor(const std::filesystem::path& p) {
    return detail::read_as<SymTensorField>(p, "symtensor");
}
inline ImmersionField read_map3(const std::filesystem::path& p) {
    return detail::read_as<ImmersionField>(p, "map3");
}

} // namespace vkci
