#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "vkci/errors.hpp"

namespace vkci {

/// Solve parameters. alpha_target must stay below min(1/7, beta/2); the
/// 1/7 is the two-dimensional exponent ceiling for this construction.
struct SolverConfig {
    double beta = 0.8;          ///< Holder exponent of the data field A
    double alpha_target = 0.1;  ///< exponent the schedule must certify
    double p = 2.0;             ///< L^p used for the in-plane estimate
    int stages = 1;             ///< K
    double delta0 = 0.0;        ///< initial deficit scale; 0 = sqrt(sup deficit)
    double ratio = 0.5;         ///< delta_{k+1} = ratio * delta_k
    double sigma = 0.5;         ///< safety fraction for error budgets
    double eps0 = 0.1;          ///< smallness constant in the frequency floor
    double mollify = 0.0;       ///< base smoothing length for stage targets; 0 = off
    std::uint64_t seed = 0;     ///< echoed into reports; generators draw from it

    void validate() const {
        if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0,1)");
        const double cap = std::min(1.0 / 7.0, beta / 2.0);
        if (!(alpha_target > 0.0 && alpha_target < cap))
            throw ConfigError("alpha_target must lie in (0, min(1/7, beta/2))");
        if (!(p >= 2.0)) throw ConfigError("p must be >= 2");
        if (stages < 0) throw ConfigError("stages must be >= 0");
        if (delta0 < 0.0) throw ConfigError("delta0 must be >= 0");
        if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("ratio must lie in (0,1)");
        if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in (0,1)");
        if (!(eps0 > 0.0)) throw ConfigError("eps0 must be positive");
        if (mollify < 0.0) throw ConfigError("mollify must be >= 0");
    }
};

struct StageSchedule {
    double delta = 0.0;        ///< deficit scale entering the stage
    double delta_next = 0.0;   ///< scale the stage must reach
    std::array<double, 4> rungs{};   ///< per-primitive frequencies, increasing
    std::array<bool, 4> active{};    ///< primitives with nonzero planned amplitude
    double lambda_max = 0.0;   ///< = rungs[3]
    double mu = 0.0;           ///< curvature proxy lambda_max * delta
    double ell = 0.0;          ///< mollification length for the stage target (0 = off)
    double budget = 0.0;       ///< total error the stage may leave behind
    bool eps0_binding = false; ///< frequency floor raised by the smallness relation
};

struct Schedule {
    std::vector<double> delta;        ///< delta_0 .. delta_K
    std::vector<StageSchedule> stage; ///< K entries
    double theta2 = 1.0;              ///< 1 + [A]_beta
    double grid_h = 0.0;
    double lambda_cap = 0.0;          ///< 1 / (4h)
    double alpha_eff = std::numeric_limits<double>::infinity();

    std::size_t stages() const { return stage.size(); }
    bool empty() const { return stage.empty(); }
};

/// Achieved Holder exponent of a frequency/amplitude schedule:
/// min over consecutive stages of log(delta_k/delta_{k+1}) / log(lambda_{k+1}/lambda_k).
/// A schedule with fewer than two stages (or constant lambda) does not
/// constrain the exponent and reports +infinity.
inline double holder_certificate(const Schedule& s) {
    if (s.stage.size() < 2) return std::numeric_limits<double>::infinity();
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < s.stage.size(); ++k) {
        const double dl = std::log(s.stage[k].delta / s.stage[k + 1].delta);
        const double ll = std::log(s.stage[k + 1].lambda_max / s.stage[k].lambda_max);
        if (ll <= 0.0) continue;  // lambda not growing: unconstrained pair
        alpha = std::min(alpha, dl / ll);
    }
    return alpha;
}

/// Plan the per-stage deficit scales and corrugation frequencies.
///
/// Frequencies are the minimal ladder satisfying, per stage k:
///   (i)  the summed a-priori step error bounds fit the stage budget
///        sigma * (delta_{k+1}^2 - delta_{k+2}^2), split over active steps;
///   (ii) the smallness relation delta^(beta-2) mu^-beta theta^2 <= eps0
///        with mu = lambda_max * delta and theta^2 = 1 + [A]_beta;
///   (iii) lambda * h <= 1/4.
/// When (i)-(ii) force a frequency past (iii) the plan throws Infeasible:
/// the grid cannot host that many stages. Step errors are modeled with the
/// curvature proxy mu (each step raises it by 2 lambda a), which is what
/// makes the ladder grow geometrically between steps and stages.
///
/// `active` marks which primitives the first stage actually needs (the
/// caller knows the deficit; inactive steps cost no budget). `grad_v0` and
/// `hess_v0` seed the proxies with the measured norms of the initial guess.
inline Schedule plan_schedule(double d0_sup, double a_beta, double h, const SolverConfig& cfg,
                              std::array<bool, 4> active = {true, true, true, true},
                              double grad_v0 = 0.0, double hess_v0 = 0.0) {
    cfg.validate();
    if (d0_sup < 0.0) throw ConfigError("plan_schedule: negative deficit");

    Schedule plan;
    plan.grid_h = h;
    plan.lambda_cap = 0.25 / h;
    plan.theta2 = 1.0 + a_beta;
    if (d0_sup == 0.0 || cfg.stages == 0) {
        plan.delta = {cfg.delta0 > 0.0 ? cfg.delta0 : 0.0};
        return plan;  // nothing to cancel
    }

    const double delta0 = cfg.delta0 > 0.0 ? cfg.delta0 : std::sqrt(d0_sup);
    const int K = cfg.stages;
    plan.delta.resize(std::size_t(K) + 1);
    for (int k = 0; k <= K; ++k) plan.delta[std::size_t(k)] = delta0 * std::pow(cfg.ratio, k);

    int n_active = 0;
    for (bool a : active) n_active += a ? 1 : 0;
    if (n_active == 0) active = {true, true, true, true}, n_active = 4;

    const double lambda_floor =
        std::numbers::pi;  // half period across the unit-scale domain
    double gv = grad_v0;
    double hess = hess_v0;
    double prev_budget = 0.0;
    double prev_lambda = 0.0;
    double cursor = lambda_floor;

    for (int k = 0; k < K; ++k) {
        StageSchedule st;
        st.delta = plan.delta[std::size_t(k)];
        st.delta_next = plan.delta[std::size_t(k) + 1];
        const double dk2 = st.delta * st.delta;
        const double dn2 = st.delta_next * st.delta_next;
        const double next_margin = dn2 * cfg.ratio * cfg.ratio;
        st.budget = cfg.sigma * (dn2 - next_margin);
        const double share = st.budget / double(n_active);
        st.ell = cfg.mollify > 0.0 ? std::max(cfg.mollify * std::pow(cfg.ratio, k), 2.0 * h) : 0.0;
        st.active = active;

        const double a = std::sqrt(std::max(dk2 - dn2, 0.0));

        // amplitude-gradient proxy: data roughness through the mollifier
        // (two equivalent bounds, take the smaller) plus roughness inherited
        // from the previous stage's leftover error
        double ga = 0.0;
        if (a_beta > 0.0 && st.ell > 0.0) {
            const double slope = a_beta * std::pow(st.ell, cfg.beta - 1.0) / (2.0 * a);
            const double glaeser = std::sqrt(a_beta * std::pow(st.ell, cfg.beta - 2.0) / 2.0);
            ga = std::min(slope, glaeser);
        } else if (a_beta > 0.0) {
            ga = std::sqrt(a_beta * std::pow(2.0 * h, cfg.beta - 2.0) / 2.0);
        }
        if (k > 0) ga += prev_lambda * std::sqrt(prev_budget / 2.0);

        // smallness floor applies to the stage's top corrugation frequency
        const double lambda_eps0 =
            std::pow(plan.theta2 / (cfg.eps0 * dk2), 1.0 / cfg.beta);
        int last_active = -1;
        for (int i = 0; i < 4; ++i)
            if (st.active[std::size_t(i)]) last_active = i;

        for (int i = 0; i < 4; ++i) {
            if (!st.active[std::size_t(i)]) {
                // no-op step: keep the ladder strictly increasing without
                // consuming frequency headroom
                cursor = std::max(cursor * (1.0 + 1e-12), lambda_floor);
                st.rungs[std::size_t(i)] = cursor;
                continue;
            }
            const double need = 8.0 * (ga * (1.0 + gv + a) + a * hess) / share;
            cursor = std::max({cursor * 1.01, need, lambda_floor});
            if (i == last_active && cursor < lambda_eps0) {
                cursor = lambda_eps0;
                st.eps0_binding = true;
            }
            st.rungs[std::size_t(i)] = cursor;
            hess += 2.0 * cursor * a;
        }
        st.lambda_max = st.rungs[3];
        st.mu = st.lambda_max * st.delta;

        if (st.lambda_max * h > 0.25 * (1.0 + 1e-9))
            throw InfeasibleError(k, st.lambda_max, plan.lambda_cap);

        gv += std::numbers::sqrt2 * a * double(n_active);
        prev_budget = st.budget;
        prev_lambda = st.lambda_max;
        plan.stage.push_back(st);
    }

    plan.alpha_eff = holder_certificate(plan);
    return plan;
}

} // namespace vkci
