#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vkci/field_io.hpp"
#include "vkci/reduction.hpp"
#include "vkci/schedule.hpp"
#include "vkci/solver.hpp"
#include "vkci/version.hpp"

namespace vkci {

// Report JSON uses a fixed key order throughout so identical runs produce
// byte-identical files. Wall-clock timing never enters a report; it goes to
// the run manifest, which is the one non-reproducible artifact.

inline ordered_json config_to_json(const SolverConfig& c, std::size_t grid = 0) {
    ordered_json j;
    j["grid"] = grid;
    j["beta"] = c.beta;
    j["alpha_target"] = c.alpha_target;
    j["p"] = c.p;
    j["stages"] = c.stages;
    j["delta0"] = c.delta0;
    j["ratio"] = c.ratio;
    j["sigma"] = c.sigma;
    j["eps0"] = c.eps0;
    j["mollify"] = c.mollify;
    j["seed"] = c.seed;
    return j;
}

inline SolverConfig config_from_json(const ordered_json& j) {
    SolverConfig c;
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).template get<std::decay_t<decltype(field)>>();
    };
    get("beta", c.beta);
    get("alpha_target", c.alpha_target);
    get("p", c.p);
    get("stages", c.stages);
    get("delta0", c.delta0);
    get("ratio", c.ratio);
    get("sigma", c.sigma);
    get("eps0", c.eps0);
    get("mollify", c.mollify);
    get("seed", c.seed);
    return c;
}

inline ordered_json schedule_to_json(const Schedule& s) {
    ordered_json j;
    j["delta"] = s.delta;
    j["theta2"] = s.theta2;
    j["grid_h"] = s.grid_h;
    j["lambda_cap"] = s.lambda_cap;
    ordered_json stages = ordered_json::array();
    for (const StageSchedule& st : s.stage) {
        ordered_json sj;
        sj["delta"] = st.delta;
        sj["delta_next"] = st.delta_next;
        sj["rungs"] = st.rungs;
        sj["active"] = st.active;
        sj["lambda_max"] = st.lambda_max;
        sj["mu"] = st.mu;
        sj["ell"] = st.ell;
        sj["budget"] = st.budget;
        sj["eps0_binding"] = st.eps0_binding;
        stages.push_back(std::move(sj));
    }
    j["stages"] = std::move(stages);
    j["alpha_eff"] = std::isfinite(s.alpha_eff) ? ordered_json(s.alpha_eff)
                                                : ordered_json("unconstrained");
    return j;
}

inline ordered_json solve_report_to_json(const SolveReport& r) {
    ordered_json j;
    j["tool"] = std::string("vkci ") + version_string;
    j["command"] = "solve";
    j["seed"] = r.config.seed;
    j["config"] = config_to_json(r.config, r.nx);
    j["grid"] = {{"nx", r.nx}, {"ny", r.ny}};
    j["initial"] = {{"residual_sup", r.d0_sup}, {"margin", r.margin0}, {"a_beta", r.a_beta}};
    j["schedule"] = schedule_to_json(r.schedule);

    ordered_json stages = ordered_json::array();
    for (const StageRecord& st : r.stages) {
        ordered_json sj;
        sj["k"] = st.k;
        sj["residual_before"] = st.residual_before;
        sj["residual_after"] = st.residual_after;
        sj["target"] = st.target;
        sj["deviation_after"] = st.deviation_after;
        sj["sigma_used"] = st.sigma_used;
        sj["margin_after"] = st.margin_after;
        sj["cone_margin"] = st.cone_margin;
        ordered_json steps = ordered_json::array();
        for (const StepRecord& sp : st.steps) {
            ordered_json pj;
            pj["primitive"] = sp.primitive;
            pj["skipped"] = sp.skipped;
            pj["lambda"] = sp.lambda;
            pj["amp_sup"] = sp.amp_sup;
            pj["bound"] = sp.bound;
            pj["fd_allowance"] = sp.fd_allowance;
            pj["measured_error"] = sp.measured_error;
            steps.push_back(std::move(pj));
        }
        sj["steps"] = std::move(steps);
        stages.push_back(std::move(sj));
    }
    j["stages"] = std::move(stages);

    j["final"] = {{"residual_sup", r.final_residual},
                  {"margin", r.final_margin},
                  {"residual_monotone", r.residual_monotone},
                  {"c_v", r.constants.c_v},
                  {"c_w", r.constants.c_w},
                  {"alpha_eff", std::isfinite(r.alpha_eff) ? ordered_json(r.alpha_eff)
                                                           : ordered_json("unconstrained")},
                  {"certificate_pass", r.certificate_pass}};
    return j;
}

inline ordered_json reduction_plan_to_json(const ReductionPlan& p) {
    ordered_json j;
    j["t"] = p.t;
    j["t0"] = std::isfinite(p.t0) ? ordered_json(p.t0) : ordered_json("inf");
    j["r"] = p.r;
    j["clamped"] = p.clamped;
    j["deficit"] = p.deficit;
    j["m"] = p.m;
    j["delta_t"] = p.delta_t;
    j["mu_t"] = p.mu_t;
    j["theta_t"] = p.theta_t;
    j["a_beta"] = p.a_beta;
    j["eps0"] = p.eps0;
    j["smallness"] = p.smallness;
    return j;
}

inline ordered_json extraction_to_json(const ExtractionResult& e) {
    ordered_json j;
    j["rotation"] = {{e.rotation.a11, e.rotation.a12}, {e.rotation.a21, e.rotation.a22}};
    j["angle"] = e.angle;
    j["c_rigidity"] = e.c_rigidity;
    j["dist_lp"] = e.dist_lp;
    j["gradw_lp"] = e.gradw_lp;
    return j;
}

inline void write_json(const std::filesystem::path& path, const ordered_json& j) {
    detail::write_text(path, j.dump(2) + "\n");
}

inline ordered_json read_json(const std::filesystem::path& path) {
    try {
        return ordered_json::parse(detail::read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad JSON " + path.string() + ": " + e.what());
    }
}

} // namespace vkci
