// SPDX-License-Identifier: Apache-2.0
//
// irshp - joint hybrid precoding and double-IRS phase design for Alamouti mmWave downlinks
// Copyright (C) 2026 The irshp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


// Acceptance run: evaluates the eight acceptance criteria at their stated tolerances and prints one
// PASS/FAIL line per criterion. The exit status is 0 once every criterion has been evaluated
// (pass `--strict` to also fail on a FAIL line) and 1 if a criterion could not be evaluated.

#include "irshp/bench_harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

using namespace irshp;

namespace
{

using Clock = std::chrono::steady_clock;

struct Verdict
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...)
{
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

CMat random_hermitian(int n, Rng &rng)
{
    CMat a = rng.complex_normal_matrix(n, n);
    return (a + a.adjoint()) / 2.0;
}

CVec random_phases(int n, Rng &rng)
{
    CVec x(n);
    for (int i = 0; i < n; ++i)
        x(i) = rng.random_phase();
    return x;
}

CMat random_unit_modulus(int rows, int cols, Rng &rng)
{
    CMat x(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            x(i, j) = rng.random_phase();
    return x;
}

struct Options
{
    std::uint64_t seed = 2026;
    int threads = 1;
};

// Proposed runs on the first-scenario draws, shared by criteria 3 and 4.
struct ProposedRun
{
    ChannelSet channels;
    FirstResult result;
};

std::vector<ProposedRun> &proposed_runs(const Options &opt, int count)
{
    static std::vector<ProposedRun> runs;
    if (static_cast<int>(runs.size()) >= count)
        return runs;
    Scenario sc = scenario_preset("first");
    SystemConfig cfg = apply_scenario(SystemConfig{}, sc);
    for (int t = static_cast<int>(runs.size()); t < count; ++t)
    {
        Rng rng = trial_rng(opt.seed, t);
        ChannelSet ch = generate_channels(cfg, sc.geometry, rng);
        runs.push_back({ch, run_first_subproblem(ch, JointSettings{})});
    }
    return runs;
}

// ------------------------------------------------------------------------

Verdict algebraic_identities(const Options &opt)
{
    auto t0 = Clock::now();
    Rng rng = Rng::derive(opt.seed, {1});
    double worst_split = 0.0;
    for (int i = 0; i < 1000; ++i)
    {
        const int n = 1 + static_cast<int>(rng.uniform(0.0, 50.0));
        CMat A = random_hermitian(n, rng), B = random_hermitian(n, rng);
        const double exact = (A * B).trace().real();
        const double err = std::abs(ia_split(A, B).total() - exact) / (A.norm() * B.norm());
        worst_split = std::max(worst_split, err);
    }

    SystemConfig cfg;
    double worst_lift = 0.0, worst_other = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i)
    {
        Rng crng = Rng::derive(opt.seed, {1, 1, static_cast<std::uint64_t>(i)});
        ChannelSet ch = generate_channels(cfg, LinkGeometry::uniform(cfg.d_hb, cfg.d_hi), crng);
        CMat H = ch.H_I_tilde / ch.H_I_tilde.cwiseAbs().maxCoeff();
        CVec x = random_phases(ch.n_elements(), rng);
        CMat direct = x.asDiagonal().toDenseMatrix().adjoint() * H * x.asDiagonal();
        CMat outer = x * x.adjoint();
        worst_lift = std::max(worst_lift, (direct - lift_A(CMat(outer.transpose()), H)).cwiseAbs().maxCoeff());
        worst_other = std::min(worst_other, (direct - lift_A(outer, H)).cwiseAbs().maxCoeff());
    }
    const double t = seconds(t0);
    Verdict v;
    v.pass = worst_split < 1e-12 && worst_lift < 1e-12 && t < 10.0;
    v.detail = fmt("IA split max rel err %.2e (1000 pairs, n<=50); lift identity max abs err %.2e under the "
                   "(x x^H)^T convention, untransposed convention off by >= %.2e; %.2f s",
                   worst_split, worst_lift, worst_other, t);
    return v;
}

Verdict gradients(const Options &opt)
{
    auto t0 = Clock::now();
    SystemConfig cfg;
    Rng rng = Rng::derive(opt.seed, {2});
    double worst = 0.0;
    for (int i = 0; i < 100; ++i)
    {
        Rng crng = Rng::derive(opt.seed, {2, 1, static_cast<std::uint64_t>(i)});
        ChannelSet ch = generate_channels(cfg, LinkGeometry::uniform(cfg.d_hb, cfg.d_hi), crng);
        const int n = ch.n_elements(), m = ch.M();
        CMat G = rng.complex_normal_matrix(n, 3);
        CMat Q = convex::restore_feasible(G * G.adjoint(), convex::AffineConstraint::unit_diagonal(n));
        CMat Gw = rng.complex_normal_matrix(m, 3);
        CMat W = Gw * Gw.adjoint();
        W *= 2.0 / W.trace().real();
        CMat dQ = random_hermitian(n, rng), dW = random_hermitian(m, rng);
        Surrogate s = mm_surrogate(Q, W, ch);
        const double h = 1e-5;
        const double fd = (s1_value(Q + h * dQ, W + h * dW, ch) - s1_value(Q - h * dQ, W - h * dW, ch)) / (2.0 * h);
        const double an = (s.script_A * dQ).trace().real() + (s.script_B * dW).trace().real();
        worst = std::max(worst, std::abs(fd - an) / std::abs(an));
    }
    const double t = seconds(t0);
    return {worst < 1e-4 && t < 60.0,
            fmt("max relative error %.2e over 100 probes (2R=50, M=10, h=1e-5); %.2f s", worst, t)};
}

// First outer iteration after which every relative objective change stays below tol.
int settle_iteration(const std::vector<double> &obj, double tol)
{
    for (int k = static_cast<int>(obj.size()) - 1; k >= 1; --k)
        if (std::abs(obj[k] - obj[k - 1]) >= tol * std::abs(obj[k]))
            return k + 1;
    return 1;
}

Verdict mm_monotonicity(const Options &opt)
{
    auto t0 = Clock::now();
    auto &runs = proposed_runs(opt, 20);
    int monotone_draws = 0, fast_draws = 0, worst_settle = 0;
    double worst_drop = 0.0;
    std::vector<int> settles, totals;
    for (int t = 0; t < 20; ++t)
    {
        const MMState &st = runs[t].result.state;
        bool mono = true;
        for (std::size_t k = 0; k < st.penalized_new.size(); ++k)
        {
            // Every iteration holds its weight fixed; the frozen iterations are the criterion's scope.
            const double drop = st.penalized_prev[k] - st.penalized_new[k];
            const double rel = drop / std::max(1.0, std::abs(st.penalized_prev[k]));
            if (st.frozen[k] || st.inv_eta_used[k] == 0.0)
            {
                worst_drop = std::max(worst_drop, rel);
                mono &= rel <= 1e-6;
            }
        }
        monotone_draws += mono;
        const int settle = settle_iteration(st.objective, 1e-4);
        settles.push_back(settle);
        totals.push_back(runs[t].result.report.outer_iterations);
        worst_settle = std::max(worst_settle, settle);
        fast_draws += runs[t].result.report.converged && runs[t].result.report.outer_iterations <= 10;
    }
    std::sort(settles.begin(), settles.end());
    std::sort(totals.begin(), totals.end());
    Verdict v;
    v.pass = monotone_draws == 20 && fast_draws == 20;
    v.detail = fmt("monotone on %d/20 draws (worst relative drop %.2e, slack 1e-6); converged within 10 outer "
                   "iterations on %d/20 draws (outer iterations min/median/max %d/%d/%d, objective settles "
                   "below 1e-4 at iteration min/median/max %d/%d/%d); %.1f s",
                   monotone_draws, std::max(worst_drop, 0.0), fast_draws, totals.front(), totals[10], totals.back(),
                   settles.front(), settles[10], settles.back(), seconds(t0));
    return v;
}

Verdict rank_exactness(const Options &opt)
{
    auto t0 = Clock::now();
    auto &runs = proposed_runs(opt, 50);
    int rank_ok = 0, consistent = 0;
    double worst_q = 0, worst_w = 0, worst_gap = 0;
    for (int t = 0; t < 50; ++t)
    {
        const FirstResult &r = runs[t].result;
        const CMat &Q = r.vars.Q, &W = r.vars.W;
        const double rq = rank1_gap(Q) / Q.trace().real();
        const double rw = rank2_gap(W) / W.trace().real();
        worst_q = std::max(worst_q, rq);
        worst_w = std::max(worst_w, rw);
        if (rq < 1e-3 && rw < 1e-3)
        {
            ++rank_ok;
            CMat F = extract_precoder(W);
            PhaseConfig p = extract_phases(Q, runs[t].channels, F);
            const double lifted = objective_Y2(Q, W, runs[t].channels);
            const double gap = std::abs(channel_gain(runs[t].channels, p, F) - lifted) / lifted;
            worst_gap = std::max(worst_gap, gap);
            consistent += gap <= 0.05;
        }
    }
    Verdict v;
    v.pass = rank_ok >= 45 && consistent == rank_ok;
    v.detail = fmt("rank residuals below 1e-3 on %d/50 draws (max rank-1 %.2e, max rank-2 %.2e); extraction "
                   "within 5%% on %d/%d (max gap %.2e); %.1f s",
                   rank_ok, worst_q, worst_w, consistent, rank_ok, worst_gap, seconds(t0));
    return v;
}

Verdict hybrid_decomposition(const Options &opt)
{
    auto t0 = Clock::now();
    Rng rng = Rng::derive(opt.seed, {5});
    auto normalized = [](CMat f) { return CMat(f * (std::sqrt(2.0) / f.norm())); };
    bool monotone = true;
    double worst_power = 0.0;
    auto track = [&](const SecondResult &r) {
        const auto &tr = r.report.residual_trace;
        for (std::size_t k = 1; k < tr.size(); ++k)
            monotone &= tr[k] <= tr[k - 1] + 1e-9;
        worst_power = std::max(worst_power, std::abs(r.precoders.product().squaredNorm() - 2.0));
    };

    double worst_full = 0.0;
    for (int m : {2, 4, 8, 10})
        for (int i = 0; i < 10; ++i)
        {
            CMat F = normalized(random_unit_modulus(m, m, rng) * rng.complex_normal_matrix(m, 2));
            SecondSettings s;
            s.n_rf = m;
            SecondResult r = run_second_subproblem(F, s);
            track(r);
            worst_full = std::max(worst_full, r.report.residual);
        }

    double worst_sdr = 0.0, worst_grid = -1.0;
    int recovered_8 = 0;
    for (int i = 0; i < 20; ++i)
    {
        for (int m : {2, 8})
        {
            CMat F = normalized(random_unit_modulus(m, 2, rng) * rng.complex_normal_matrix(2, 2));
            SecondSettings s;
            s.sdr_init = true;
            SecondResult r = run_second_subproblem(F, s);
            track(r);
            if (m == 2)
                worst_sdr = std::max(worst_sdr, r.report.residual);
            else
                recovered_8 += r.report.residual < 1e-3;
        }
        // SDR + refinement against a 64-level grid of the (row-separable) analog objective, M = 2, N_RF = 2.
        CMat F = normalized(rng.complex_normal_matrix(2, 2));
        CMat B = rng.complex_normal_matrix(2, 2);
        CMat X = solve_sdr_analog(build_lift(B, F, 2));
        double grid = 0.0;
        for (int row = 0; row < 2; ++row)
        {
            double best = std::numeric_limits<double>::infinity();
            for (int a = 0; a < 64; ++a)
                for (int b = 0; b < 64; ++b)
                {
                    const cd x0 = std::polar(1.0, 2 * kPi * a / 64), x1 = std::polar(1.0, 2 * kPi * b / 64);
                    const cd p0 = x0 * B(0, 0) + x1 * B(1, 0), p1 = x0 * B(0, 1) + x1 * B(1, 1);
                    best = std::min(best, std::norm(p0) + std::norm(p1) -
                                              2.0 * (std::conj(F(row, 0)) * p0 + std::conj(F(row, 1)) * p1).real());
                }
            grid += best;
        }
        const double sdr = analog_objective(X, B, F);
        worst_grid = std::max(worst_grid, (sdr - grid) / std::abs(grid));
    }

    // Unplanted targets at the default size, including optimized fully digital precoders.
    SystemConfig cfg;
    for (int i = 0; i < 30; ++i)
    {
        SecondSettings s;
        s.sdr_init = i % 5 == 0;
        track(run_second_subproblem(normalized(rng.complex_normal_matrix(cfg.M, 2)), s));
    }
    for (const auto &run : proposed_runs(opt, 20))
        track(run_second_subproblem(extract_precoder(run.result.vars.W)));

    Verdict v;
    v.pass = worst_full < 1e-6 && worst_sdr < 1e-3 && worst_grid <= 0.01 && monotone && worst_power <= 1e-8;
    v.detail = fmt("planted N_RF=M max residual %.2e; SDR-initialized planted M=2 max residual %.2e (M=8, not gated: "
                   "%d/20 below 1e-3); SDR vs 64-level grid worst excess %.2e of |grid|; AO residual monotone on every run: %s; max power error %.2e; "
                   "%.1f s",
                   worst_full, worst_sdr, recovered_8, std::max(worst_grid, 0.0), monotone ? "yes" : "no", worst_power,
                   seconds(t0));
    return v;
}

Verdict tiny_optimality(const Options &opt)
{
    auto t0 = Clock::now();
    SystemConfig cfg;
    cfg.M = 2;
    cfg.r1 = cfg.r2 = 1;
    cfg.reset_dims();
    cfg = validate_config(cfg);
    int good = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < 200; ++t)
    {
        Rng rng = trial_rng(Rng::derive(opt.seed, {6}).engine()(), t);
        ChannelSet ch = generate_channels(cfg, LinkGeometry::uniform(cfg.d_hb, cfg.d_hi), rng);
        SolveReport r = run_scheme(SchemeId::ProposedFD, ch, cfg, BenchSettings{});
        OracleResult o = small_instance_oracle(ch, 16);
        const double ratio = r.ok ? r.snr(1.0) / (0.5 * o.best_gain) : 0.0;
        worst = std::min(worst, ratio);
        good += ratio >= 0.95;
    }
    const double t = seconds(t0);
    return {good >= 190 && t < 300.0,
            fmt("pipeline >= 0.95 x oracle on %d/200 seeds (worst ratio %.4f); %.1f s", good, worst, t)};
}

Verdict orderings(const Options &opt, std::map<std::string, double> &timing)
{
    auto t0 = Clock::now();
    SweepSettings s;
    s.trials = 50;
    s.threads = opt.threads;
    SystemConfig base;
    base.seed = opt.seed;

    Scenario first = scenario_preset("first");
    SweepResult rf = sweep(base, first, all_schemes(), s);
    timing["first"] = seconds(t0);
    auto t1 = Clock::now();
    SweepResult rt = sweep(base, scenario_preset("third"), {SchemeId::ProposedHP}, s);
    timing["third"] = seconds(t1);
    t1 = Clock::now();
    SweepResult rs = sweep(base, scenario_preset("second"), {SchemeId::ProposedHP}, s);
    timing["second"] = seconds(t1);

    auto mean = [&](const SweepResult &r, SchemeId id, double db) {
        for (const auto &c : r.cells)
            if (c.scheme == id && c.snr_db == db)
                return c.mean_rate;
        throw std::logic_error("missing sweep cell");
    };

    std::vector<std::string> failures;
    int fails_chain = 0, fails_baselines = 0, fails_scen = 0;
    for (double db : s.snr_db)
    {
        const double hp = mean(rf, SchemeId::ProposedHP, db), fd = mean(rf, SchemeId::ProposedFD, db);
        const double ub = mean(rf, SchemeId::UpperBoundFD, db);
        if (!(hp <= fd && fd <= ub))
            ++fails_chain, failures.push_back(fmt("chain@%g dB: HP %.6f FD %.6f UB %.6f", db, hp, fd, ub));
        for (SchemeId b : {SchemeId::RandomIRS, SchemeId::AntennaSelection, SchemeId::NoBeamforming})
            if (!(fd > mean(rf, b, db)))
                ++fails_baselines, failures.push_back(fmt("FD vs %s@%g dB", to_string(b), db));
        const double r1 = mean(rf, SchemeId::ProposedHP, db), r3 = mean(rt, SchemeId::ProposedHP, db),
                     r2 = mean(rs, SchemeId::ProposedHP, db);
        if (!(r3 >= r1 && r1 >= r2))
            ++fails_scen,
                failures.push_back(fmt("scenarios@%g dB: third %.4f first %.4f second %.4f", db, r3, r1, r2));
    }

    // Per-draw chain, reported for information.
    int draw_violations = 0;
    for (const auto &trial : rf.per_trial)
    {
        std::map<SchemeId, double> g;
        for (const auto &r : trial)
            g[r.scheme] = r.gain;
        draw_violations += !(g[SchemeId::ProposedHP] <= g[SchemeId::ProposedFD] * (1 + 1e-12) &&
                             g[SchemeId::ProposedFD] <= g[SchemeId::UpperBoundFD] * (1 + 1e-3));
    }

    // Uncertainty on the first-scenario designs, common perturbation per trial across alphas.
    t1 = Clock::now();
    std::vector<SolveReport> designs;
    for (const auto &trial : rf.per_trial)
        designs.push_back(trial.front()); // ProposedHP is the first scheme
    SweepSettings su = s;
    su.snr_db.push_back(25.0);
    const std::vector<double> alphas{0.0, 0.1, 1.0};
    auto cells = uncertainty_sweep(base, first, alphas, su, &designs);
    timing["uncertainty"] = seconds(t1);
    int fails_unc = 0;
    const std::size_t ns = su.snr_db.size();
    for (std::size_t j = 0; j < ns; ++j)
        for (std::size_t a = 1; a < alphas.size(); ++a)
            if (!(cells[a * ns + j].mean_rate <= cells[(a - 1) * ns + j].mean_rate))
                ++fails_unc, failures.push_back(fmt("alpha %g > alpha %g @%g dB", alphas[a], alphas[a - 1],
                                                    su.snr_db[j]));

    const double t = seconds(t0);
    Verdict v;
    v.pass = failures.empty() && !rf.partial_failure && !rt.partial_failure && !rs.partial_failure && t < 1800.0;
    std::string first_failures;
    for (std::size_t i = 0; i < failures.size() && i < 4; ++i)
        first_failures += "; " + failures[i];
    v.detail = fmt("HP<=FD<=UB failures %d/5, FD above baselines failures %d/15, third>=first>=second failures "
                   "%d/5, alpha monotonicity failures %d/12, per-draw chain violations %d/50, partial failures %s; "
                   "mean rates @10 dB: HP %.3f FD %.3f UB %.3f RIS %.3f AS %.3f NoBF %.3f third %.3f second %.3f; "
                   "%.0f s (first %.0f, third %.0f, second %.0f, uncertainty %.0f)",
                   fails_chain, fails_baselines, fails_scen, fails_unc, draw_violations,
                   (rf.partial_failure || rt.partial_failure || rs.partial_failure) ? "yes" : "no",
                   mean(rf, SchemeId::ProposedHP, 10.0), mean(rf, SchemeId::ProposedFD, 10.0),
                   mean(rf, SchemeId::UpperBoundFD, 10.0), mean(rf, SchemeId::RandomIRS, 10.0),
                   mean(rf, SchemeId::AntennaSelection, 10.0), mean(rf, SchemeId::NoBeamforming, 10.0),
                   mean(rt, SchemeId::ProposedHP, 10.0), mean(rs, SchemeId::ProposedHP, 10.0), t, timing["first"],
                   timing["third"], timing["second"], timing["uncertainty"]) +
               first_failures;
    return v;
}

Verdict determinism(const Options &opt)
{
    auto t0 = Clock::now();
    SystemConfig cfg;
    cfg.M = 4;
    cfg.r1 = cfg.r2 = 4;
    cfg.seed = opt.seed;
    cfg.reset_dims();
    cfg = validate_config(cfg);
    Scenario sc = scenario_from_config(cfg);

    auto produce = [&](int threads) {
        SweepSettings s;
        s.trials = 3;
        s.threads = threads;
        std::ostringstream out;
        SweepResult r = sweep(cfg, sc, all_schemes(), s);
        write_sweep_csv(out, r.cells);
        std::vector<SolveReport> flat;
        for (const auto &t : r.per_trial)
            flat.insert(flat.end(), t.begin(), t.end());
        write_reports_csv(out, flat, 10.0, RateConvention::Full);
        write_uncertainty_csv(out, uncertainty_sweep(cfg, sc, {0.0, 0.5, 1.0}, s));
        write_trace_csv(out, convergence_trace(cfg, sc, s));
        SystemConfig tiny = cfg;
        tiny.M = 2;
        tiny.r1 = tiny.r2 = 1;
        tiny.reset_dims();
        for (int t = 0; t < 5; ++t)
        {
            Rng rng = trial_rng(cfg.seed, t);
            ChannelSet ch = generate_channels(tiny, LinkGeometry::uniform(30, 30), rng);
            char line[128];
            std::snprintf(line, sizeof line, "%.17g\n", small_instance_oracle(ch).best_gain);
            out << line;
        }
        return out.str();
    };
    const std::string a = produce(1), b = produce(1), c = produce(2);
    Verdict v;
    v.pass = a == b && a == c && !a.empty();
    v.detail = fmt("sweep, report, uncertainty, trace and oracle CSV (%zu bytes) identical across reruns: %s, "
                   "across thread counts: %s; %.1f s",
                   a.size(), a == b ? "yes" : "no", a == c ? "yes" : "no", seconds(t0));
    return v;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Acceptance criteria"};
    Options opt;
    bool strict = false;
    std::vector<int> only;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--seed", opt.seed, "master seed");
    app.add_option("--threads", opt.threads, "worker threads for the Monte-Carlo sweeps")->check(CLI::PositiveNumber);
    app.add_option("--only", only, "run only these criteria (1-8)")->check(CLI::Range(1, 8));
    app.add_flag("--strict", strict, "exit non-zero when any criterion fails");
    CLI11_PARSE(app, argc, argv);

    std::map<std::string, double> timing;
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"algebraic identities", [&] { return algebraic_identities(opt); }},
        {"surrogate gradients", [&] { return gradients(opt); }},
        {"MM monotonicity and convergence", [&] { return mm_monotonicity(opt); }},
        {"rank exactness and extraction", [&] { return rank_exactness(opt); }},
        {"hybrid decomposition", [&] { return hybrid_decomposition(opt); }},
        {"tiny-instance near-optimality", [&] { return tiny_optimality(opt); }},
        {"scheme, scenario and mismatch orderings", [&] { return orderings(opt, timing); }},
        {"determinism", [&] { return determinism(opt); }},
    };

    int passed = 0, evaluated = 0;
    bool error = false;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end())
            continue;
        ++evaluated;
        try
        {
            Verdict v = criteria[i].second();
            passed += v.pass;
            std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), v.detail.c_str());
        }
        catch (const std::exception &e)
        {
            error = true;
            std::printf("FAIL %d %s: not evaluated (%s)\n", id, criteria[i].first.c_str(), e.what());
        }
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", passed, evaluated);
    if (error)
        return 1;
    return strict && passed != evaluated ? 1 : 0;
}
