// Command-line front end: gen / solve / reduce / verify / norms.
//
// Field files are JSON manifests plus CSV data (see include/vkci/field_io.hpp).
// Reports are deterministic given flags + seed; the run manifest is the only
// artifact allowed to differ between identical runs (it carries timing), and
// it is always written last.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vkci/vkci.hpp"

namespace fs = std::filesystem;
using vkci::ordered_json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::size_t> grid;
    std::optional<double> beta, alpha, p, delta0, ratio, sigma, eps0, mollify, t;
    std::optional<int> stages;
    std::optional<std::uint64_t> seed;
    std::string in_dir, out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override it");
    cmd->add_option("--grid", o.grid, "nodes per axis");
    cmd->add_option("--beta", o.beta, "Holder exponent of A");
    cmd->add_option("--alpha", o.alpha, "target Holder exponent");
    cmd->add_option("--p", o.p, "L^p exponent for in-plane estimates");
    cmd->add_option("--stages", o.stages, "stage count K");
    cmd->add_option("--delta0", o.delta0, "initial deficit scale (0 = auto)");
    cmd->add_option("--ratio", o.ratio, "per-stage deficit ratio");
    cmd->add_option("--sigma", o.sigma, "error budget safety fraction");
    cmd->add_option("--eps0", o.eps0, "smallness constant");
    cmd->add_option("--mollify", o.mollify, "stage-target smoothing length (0 = off)");
    cmd->add_option("--seed", o.seed, "deterministic seed");
    cmd->add_option("--t", o.t, "lift scale for reduce");
    cmd->add_option("--in", o.in_dir, "input directory");
    cmd->add_option("--out", o.out_dir, "output directory");
}

vkci::SolverConfig build_config(const CommonOpts& o) {
    vkci::SolverConfig cfg;
    if (!o.config_path.empty()) cfg = vkci::config_from_json(vkci::read_json(o.config_path));
    if (o.beta) cfg.beta = *o.beta;
    if (o.alpha) cfg.alpha_target = *o.alpha;
    if (o.p) cfg.p = *o.p;
    if (o.stages) cfg.stages = *o.stages;
    if (o.delta0) cfg.delta0 = *o.delta0;
    if (o.ratio) cfg.ratio = *o.ratio;
    if (o.sigma) cfg.sigma = *o.sigma;
    if (o.eps0) cfg.eps0 = *o.eps0;
    if (o.mollify) cfg.mollify = *o.mollify;
    if (o.seed) cfg.seed = *o.seed;
    return cfg;
}

std::size_t config_grid(const CommonOpts& o) {
    if (o.grid) return *o.grid;
    if (!o.config_path.empty()) {
        const ordered_json j = vkci::read_json(o.config_path);
        if (j.contains("grid")) return j.at("grid").get<std::size_t>();
    }
    return 257;
}

fs::path ensure_out(const std::string& dir) {
    if (dir.empty()) throw vkci::ConfigError("--out is required");
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw vkci::IoError("cannot create " + p.string());
    return p;
}

std::string now_iso8601() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

// ---------------------------------------------------------------- gen ----

int cmd_gen(const CommonOpts& o, double amplitude, double shift, bool manufactured) {
    const fs::path out = ensure_out(o.out_dir);
    const std::size_t n = config_grid(o);
    vkci::SolverConfig cfg = build_config(o);
    const vkci::GridSpec spec(n, n);

    vkci::SymTensorField a = vkci::synth_holder_tensor(cfg.beta, cfg.seed, amplitude, spec);
    for (std::size_t node = 0; node < spec.nodes(); ++node) {
        a.at(node, 0) += shift;
        a.at(node, 2) += shift;
    }

    vkci::ScalarField v0(spec);
    vkci::PlanarMapField w0(spec);
    if (manufactured) {
        v0 = vkci::smooth_scalar(spec, cfg.seed, 0.1, 7);
        w0 = vkci::smooth_map(spec, cfg.seed, 0.05, 8);
    }

    vkci::write_field(out, "A", a);
    vkci::write_field(out, "v0", v0);
    vkci::write_field(out, "w0", w0);

    ordered_json manifest;
    manifest["tool"] = std::string("vkci ") + vkci::version_string;
    manifest["command"] = "gen";
    manifest["seed"] = cfg.seed;
    manifest["config"] = vkci::config_to_json(cfg, n);
    manifest["amplitude"] = amplitude;
    manifest["shift"] = shift;
    manifest["manufactured"] = manufactured;
    manifest["margin"] = vkci::shortness_margin(v0, w0, a);
    manifest["outputs"] = {"A.json", "A.csv", "v0.json", "v0.csv", "w0.json", "w0.csv"};
    vkci::write_json(out / "manifest.json", manifest);
    return 0;
}

// -------------------------------------------------------------- solve ----

int cmd_solve(const CommonOpts& o) {
    const auto t_start = std::chrono::steady_clock::now();
    if (o.in_dir.empty()) throw vkci::ConfigError("--in is required");
    const fs::path in(o.in_dir);
    const fs::path out = ensure_out(o.out_dir);
    const vkci::SolverConfig cfg = build_config(o);
    cfg.validate();

    const vkci::ScalarField v0 = vkci::read_scalar(in / "v0.json");
    const vkci::PlanarMapField w0 = vkci::read_map2(in / "w0.json");
    const vkci::SymTensorField a = vkci::read_symtensor(in / "A.json");

    vkci::SolveOutput result = vkci::solve(v0, w0, a, cfg);

    vkci::write_field(out, "vbar", result.v);
    vkci::write_field(out, "wbar", result.w);
    vkci::write_json(out / "report.json", vkci::solve_report_to_json(result.report));

    ordered_json manifest;
    manifest["tool"] = std::string("vkci ") + vkci::version_string;
    manifest["command"] = "solve";
    manifest["seed"] = cfg.seed;
    manifest["config"] = vkci::config_to_json(cfg, v0.spec.nx);
    manifest["inputs"] = {{"v0", (in / "v0.json").string()},
                          {"w0", (in / "w0.json").string()},
                          {"A", (in / "A.json").string()}};
    manifest["outputs"] = {"vbar.json", "vbar.csv", "wbar.json", "wbar.csv", "report.json"};
    manifest["timestamp"] = now_iso8601();
    ordered_json timing = ordered_json::array();
    for (const vkci::StageRecord& st : result.report.stages) timing.push_back(st.wall_seconds);
    manifest["stage_wall_seconds"] = std::move(timing);
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    vkci::write_json(out / "manifest.json", manifest);
    return 0;
}

// ------------------------------------------------------------- reduce ----

int cmd_reduce(const CommonOpts& o) {
    const auto t_start = std::chrono::steady_clock::now();
    if (o.in_dir.empty()) throw vkci::ConfigError("--in is required");
    const fs::path in(o.in_dir);
    const fs::path out = ensure_out(o.out_dir);
    const vkci::SolverConfig cfg = build_config(o);
    const double t_request = o.t.value_or(0.1);
    const double radius = 0.5;

    // solver output dir (manifest points at A) or a gen dir (A alongside)
    vkci::ScalarField v = [&] {
        if (fs::exists(in / "vbar.json")) return vkci::read_scalar(in / "vbar.json");
        return vkci::read_scalar(in / "v0.json");
    }();
    vkci::PlanarMapField w = [&] {
        if (fs::exists(in / "wbar.json")) return vkci::read_map2(in / "wbar.json");
        return vkci::read_map2(in / "w0.json");
    }();
    vkci::SymTensorField a = [&] {
        if (fs::exists(in / "A.json")) return vkci::read_symtensor(in / "A.json");
        const ordered_json manifest = vkci::read_json(in / "manifest.json");
        return vkci::read_symtensor(manifest.at("inputs").at("A").get<std::string>());
    }();

    const vkci::ReductionPlan plan =
        vkci::plan_reduction(v, a, cfg.beta, radius, cfg.eps0, t_request);
    const double t = plan.t;

    auto audit_at = [&](double tt) {
        ordered_json j;
        const vkci::ImmersionField lift = vkci::vk_lift(v, w, tt);
        const vkci::SymTensorField pb = vkci::pullback_metric(lift);

        // pullback vs I + t^2 A
        double dev = 0.0;
        for (std::size_t n = 0; n < pb.spec.nodes(); ++n) {
            const vkci::Sym2 want{1.0 + tt * tt * a.at(n, 0), tt * tt * a.at(n, 1),
                                  1.0 + tt * tt * a.at(n, 2)};
            dev = std::max(dev, (pb.sym(n) - want).spectral());
        }
        j["pullback_vs_target"] = dev;

        const vkci::PlanarMapField phi = vkci::planar_shift(w, tt);
        const vkci::ExtractionResult ex = vkci::rigidity_extract(phi, tt, cfg.p);
        const vkci::PlanarMapField w_rot =
            vkci::rotate_map(ex.w, ex.rotation.transpose());
        const double res =
            vkci::norm_sup(vkci::scaled_constraint_residual(w_rot, v, a, tt));
        j["extraction"] = vkci::extraction_to_json(ex);
        j["scaled_residual_sup"] = res;
        return j;
    };

    ordered_json report;
    report["tool"] = std::string("vkci ") + vkci::version_string;
    report["command"] = "reduce";
    report["seed"] = cfg.seed;
    report["plan"] = vkci::reduction_plan_to_json(plan);
    report["audit_t"] = audit_at(t);
    report["audit_t_half"] = audit_at(0.5 * t);
    {
        // two-point Richardson diagnostic on the scaled residual
        const double r1 = report["audit_t"]["scaled_residual_sup"].get<double>();
        const double r2 = report["audit_t_half"]["scaled_residual_sup"].get<double>();
        report["richardson_extrapolation"] = 2.0 * r2 - r1;
    }
    vkci::write_json(out / "reduction_report.json", report);

    ordered_json manifest;
    manifest["tool"] = std::string("vkci ") + vkci::version_string;
    manifest["command"] = "reduce";
    manifest["seed"] = cfg.seed;
    manifest["inputs"] = {{"in", in.string()}};
    manifest["outputs"] = {"reduction_report.json"};
    manifest["timestamp"] = now_iso8601();
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    vkci::write_json(out / "manifest.json", manifest);
    return 0;
}

// ------------------------------------------------------------- verify ----

int cmd_verify(const CommonOpts& o) {
    if (o.in_dir.empty()) throw vkci::ConfigError("--in is required");
    const fs::path in(o.in_dir);

    const ordered_json report = vkci::read_json(in / "report.json");
    const ordered_json manifest = vkci::read_json(in / "manifest.json");

    const vkci::ScalarField vbar = vkci::read_scalar(in / "vbar.json");
    const vkci::PlanarMapField wbar = vkci::read_map2(in / "wbar.json");
    const vkci::ScalarField v0 =
        vkci::read_scalar(manifest.at("inputs").at("v0").get<std::string>());
    const vkci::PlanarMapField w0 =
        vkci::read_map2(manifest.at("inputs").at("w0").get<std::string>());
    const vkci::SymTensorField a =
        vkci::read_symtensor(manifest.at("inputs").at("A").get<std::string>());

    std::vector<std::string> failures;
    auto check_close = [&](const char* what, double got, double want) {
        const double tol = 1e-9 * std::max(1.0, std::abs(want));
        if (!(std::abs(got - want) <= tol))
            failures.push_back(std::string(what) + ": recomputed " + vkci::format17(got) +
                               " vs recorded " + vkci::format17(want));
    };

    const vkci::SymTensorField d = vkci::vk_residual(vbar, wbar, a);
    check_close("final residual", vkci::norm_sup(d),
                report.at("final").at("residual_sup").get<double>());
    check_close("final margin", vkci::min_eig(d),
                report.at("final").at("margin").get<double>());

    const double d0 = vkci::norm_sup(vkci::vk_residual(v0, w0, a));
    check_close("initial residual", d0, report.at("initial").at("residual_sup").get<double>());
    if (d0 > 0.0) {
        const vkci::GradientConstants c = vkci::gradient_estimate_constants(
            v0, w0, vbar, wbar, a, report.at("config").at("p").get<double>());
        check_close("c_v", c.c_v, report.at("final").at("c_v").get<double>());
        check_close("c_w", c.c_w, report.at("final").at("c_w").get<double>());
    }

    // certificate: recompute alpha_eff from the recorded schedule
    double alpha_eff = std::numeric_limits<double>::infinity();
    {
        const ordered_json& sj = report.at("schedule").at("stages");
        for (std::size_t k = 0; k + 1 < sj.size(); ++k) {
            const double dl = std::log(sj.at(k).at("delta").get<double>() /
                                       sj.at(k + 1).at("delta").get<double>());
            const double ll = std::log(sj.at(k + 1).at("lambda_max").get<double>() /
                                       sj.at(k).at("lambda_max").get<double>());
            if (ll > 0.0) alpha_eff = std::min(alpha_eff, dl / ll);
        }
    }
    const double alpha_required =
        o.alpha.value_or(report.at("config").at("alpha_target").get<double>());
    if (alpha_eff < alpha_required)
        failures.push_back("certificate: alpha_eff " + vkci::format17(alpha_eff) +
                           " below required " + vkci::format17(alpha_required));

    if (!failures.empty()) {
        for (const std::string& f : failures) std::cerr << "verify: " << f << "\n";
        return int(vkci::ExitCode::verify_mismatch);
    }
    std::cout << "verify: all recorded checks re-validate\n";
    return 0;
}

// -------------------------------------------------------------- norms ----

int cmd_norms(const std::string& field_path, double p, double beta) {
    const vkci::FieldManifest m = vkci::read_manifest(field_path);
    ordered_json j;
    j["name"] = m.name;
    j["kind"] = m.kind;
    auto fill = [&](const auto& f) {
        j["sup"] = vkci::norm_sup(f);
        j["lp"] = vkci::norm_lp(f, p);
        j["p"] = p;
        j["holder_semi"] = vkci::holder_seminorm(f, beta);
        j["beta"] = beta;
    };
    if (m.kind == "scalar") fill(vkci::read_scalar(field_path));
    else if (m.kind == "map2") fill(vkci::read_map2(field_path));
    else if (m.kind == "symtensor") fill(vkci::read_symtensor(field_path));
    else if (m.kind == "map3") fill(vkci::read_map3(field_path));
    else throw vkci::IoError("unknown field kind: " + m.kind);
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical convex-integration solver for the planar displacement constraint"};
    app.require_subcommand(1);

    CommonOpts gen_o, solve_o, reduce_o, verify_o;
    double gen_amplitude = 0.1, gen_shift = 0.0;
    bool gen_manufactured = false;

    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic problem instance");
    add_common(gen, gen_o);
    gen->add_option("--amplitude", gen_amplitude, "sup norm of the rough part of A");
    gen->add_option("--shift", gen_shift, "SPD shift: A += shift * I");
    gen->add_flag("--manufactured", gen_manufactured, "seeded smooth (v0, w0) instead of zero");

    CLI::App* solve = app.add_subcommand("solve", "run the staged corrugation solver");
    add_common(solve, solve_o);

    CLI::App* reduce = app.add_subcommand("reduce", "lift, extract, and audit solver output");
    add_common(reduce, reduce_o);

    CLI::App* verify = app.add_subcommand("verify", "re-validate a stored report");
    add_common(verify, verify_o);

    std::string norms_field;
    double norms_p = 2.0, norms_beta = 0.5;
    CLI::App* norms = app.add_subcommand("norms", "print norms of a stored field");
    norms->add_option("--field", norms_field, "path to a field .json manifest")->required();
    norms->add_option("--p", norms_p, "L^p exponent");
    norms->add_option("--beta", norms_beta, "Holder exponent");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen(gen_o, gen_amplitude, gen_shift, gen_manufactured);
        if (solve->parsed()) return cmd_solve(solve_o);
        if (reduce->parsed()) return cmd_reduce(reduce_o);
        if (verify->parsed()) return cmd_verify(verify_o);
        if (norms->parsed()) return cmd_norms(norms_field, norms_p, norms_beta);
    } catch (const vkci::Error& e) {
        std::cerr << "vkci: " << e.what() << "\n";
        return int(e.code());
    } catch (const std::exception& e) {
        std::cerr << "vkci: " << e.what() << "\n";
        return int(vkci::ExitCode::io);
    }
    return 0;
}
