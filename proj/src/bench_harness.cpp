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

#include "irshp/bench_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace irshp
{

// ------------------------------------------------------------------------
// Scenarios

Scenario scenario_preset(const std::string &name)
{
    Scenario s;
    s.name = name;
    if (name == "first")
    {
        s.geometry = LinkGeometry::uniform(30.0, 30.0);
        s.r1 = s.r2 = 25;
    }
    else if (name == "second")
    {
        s.geometry = LinkGeometry::uniform(30.0, 30.0);
        s.geometry.bs_irs2 = 600.0;
        s.geometry.irs2_user = {600.0, 600.0};
        s.r1 = s.r2 = 50;
    }
    else if (name == "third")
    {
        s.geometry = LinkGeometry::uniform(30.0, 30.0);
        s.r1 = s.r2 = 50;
    }
    else if (name == "coverage")
    {
        s.geometry.bs_irs1 = s.geometry.bs_irs2 = 30.0;
        s.geometry.irs1_user = {15.0, 50.0};
        s.geometry.irs2_user = {50.0, 15.0};
        s.geometry.colocated_users = false;
        s.r1 = s.r2 = 25;
    }
    else
        throw std::invalid_argument("unknown scenario '" + name + "' (first, second, third, coverage)");
    return s;
}

Scenario scenario_from_config(const SystemConfig &cfg)
{
    Scenario s;
    s.geometry = LinkGeometry::uniform(cfg.d_hb, cfg.d_hi);
    s.r1 = cfg.r1;
    s.r2 = cfg.r2;
    return s;
}

SystemConfig apply_scenario(SystemConfig cfg, const Scenario &scenario)
{
    const auto &g = scenario.geometry;
    for (double d : {g.bs_irs1, g.bs_irs2, g.irs1_user[0], g.irs1_user[1], g.irs2_user[0], g.irs2_user[1]})
        if (!(d > 0.0))
            throw std::invalid_argument("scenario distances must be > 0");
    if (cfg.r1 != scenario.r1 || cfg.r2 != scenario.r2)
    {
        cfg.r1 = scenario.r1;
        cfg.r2 = scenario.r2;
        cfg.reset_dims();
    }
    return validate_config(cfg);
}

// ------------------------------------------------------------------------
// Schemes

const std::vector<SchemeId> &all_schemes()
{
    static const std::vector<SchemeId> ids{SchemeId::ProposedHP,    SchemeId::ProposedFD,       SchemeId::UpperBoundHP,
                                           SchemeId::UpperBoundFD,  SchemeId::NoBeamforming,    SchemeId::AntennaSelection,
                                           SchemeId::RandomIRS,     SchemeId::SDR};
    return ids;
}

const char *to_string(SchemeId id)
{
    switch (id)
    {
    case SchemeId::ProposedHP:
        return "ProposedHP";
    case SchemeId::ProposedFD:
        return "ProposedFD";
    case SchemeId::UpperBoundHP:
        return "UpperBoundHP";
    case SchemeId::UpperBoundFD:
        return "UpperBoundFD";
    case SchemeId::NoBeamforming:
        return "NoBeamforming";
    case SchemeId::AntennaSelection:
        return "AntennaSelection";
    case SchemeId::RandomIRS:
        return "RandomIRS";
    case SchemeId::SDR:
        return "SDR";
    }
    return "?";
}

SchemeId scheme_from_string(const std::string &name)
{
    for (SchemeId id : all_schemes())
        if (name == to_string(id))
            return id;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

double SolveReport::snr(double rho) const { return 0.5 * rho * gain; }

double SolveReport::rate(double rho, RateConvention convention) const
{
    return achievable_rate(snr(rho), convention);
}

FdOracle fd_oracle_for_fixed_phases(const ChannelSet &channels, const PhaseConfig &phases, double pt, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("fd_oracle_for_fixed_phases: sigma2 must be > 0");
    CMat H = cascaded_channel(channels, phases.phi());
    const Eigen::Index m = H.cols();
    FdOracle out;
    out.F = CMat::Zero(m, 2);
    Eigen::JacobiSVD<CMat> svd(H, Eigen::ComputeThinV);
    const double s1 = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    if (s1 > 0.0)
        out.F.col(0) = std::sqrt(2.0) * svd.matrixV().col(0);
    else
        out.F(0, 0) = std::sqrt(2.0);
    out.gain = 2.0 * s1 * s1;
    out.snr = pt / (2.0 * sigma2) * out.gain;
    return out;
}

namespace
{

struct Design
{
    PhaseConfig phases;
    CMat F;
    double gain;
};

CMat lift_phases(const PhaseConfig &p)
{
    // A = H_I_tilde .* Q equals diag(phi)^H H_I_tilde diag(phi) for Q = conj(phi) phi^T.
    return p.phi().conjugate() * p.phi().transpose();
}

Design design_from(const LiftedVars &v, const ChannelSet &ch)
{
    CMat F = extract_precoder(v.W);
    PhaseConfig phases = extract_phases(v.Q, ch, F);
    double gain = channel_gain(ch, phases, F);
    return {std::move(phases), std::move(F), gain};
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Lazily computed intermediate solutions shared between schemes of one draw.
class TrialContext
{
  public:
    TrialContext(const ChannelSet &ch, const SystemConfig &cfg, const BenchSettings &s, std::uint64_t seed)
        : ch_(ch), cfg_(cfg), s_(s), seed_(seed)
    {
    }

    const FirstResult &proposed()
    {
        if (!proposed_)
        {
            JointSettings j = s_.joint;
            j.relaxed = false;
            j.relaxed_warmup = true;
            proposed_ = run_first_subproblem(ch_, j);
        }
        return *proposed_;
    }

    const Design &sdr()
    {
        if (!sdr_)
            sdr_ = design_from(proposed().warmup_vars, ch_);
        return *sdr_;
    }

    const Design &fd_direct()
    {
        if (!fd_direct_)
            fd_direct_ = design_from(proposed().vars, ch_);
        return *fd_direct_;
    }

    const SecondResult &hp()
    {
        if (!hp_)
            hp_ = run_second_subproblem(fd_direct().F, s_.second);
        return *hp_;
    }

    double hp_gain() { return channel_gain(ch_, fd_direct().phases, hp().precoders.product()); }

    // The extracted F is used directly unless the hybrid product beats it on this draw; then the
    // FD oracle for the same phases replaces it.
    const Design &fd()
    {
        if (!fd_)
        {
            Design d = fd_direct();
            if (hp_gain() > d.gain)
            {
                FdOracle o = fd_oracle_for_fixed_phases(ch_, d.phases, 1.0, 1.0);
                d.F = o.F;
                d.gain = channel_gain(ch_, d.phases, d.F);
            }
            fd_ = std::move(d);
        }
        return *fd_;
    }

    const FirstResult &upper()
    {
        if (!upper_)
        {
            const Design &d = fd();
            LiftedVars lifted{lift_phases(d.phases), d.F * d.F.adjoint()};
            const LiftedVars &relaxed = proposed().warmup_vars;
            JointSettings j = s_.joint;
            j.relaxed = true;
            j.warm_start = objective_Y2(lifted.Q, lifted.W, ch_) >= objective_Y2(relaxed.Q, relaxed.W, ch_)
                               ? lifted
                               : relaxed;
            upper_ = run_first_subproblem(ch_, j);
        }
        return *upper_;
    }

    const std::vector<double> &proposed_trace() { return proposed().state.objective; }

    const ChannelSet &ch_;
    const SystemConfig &cfg_;
    const BenchSettings &s_;
    std::uint64_t seed_;

  private:
    std::optional<FirstResult> proposed_, upper_;
    std::optional<Design> sdr_, fd_direct_, fd_;
    std::optional<SecondResult> hp_;
};

SolveReport evaluate(SchemeId id, TrialContext &ctx)
{
    const ChannelSet &ch = ctx.ch_;
    SolveReport r;
    r.scheme = id;
    r.seed = ctx.seed_;
    switch (id)
    {
    case SchemeId::ProposedFD: {
        const Design &d = ctx.fd();
        r.gain = d.gain;
        r.phases = d.phases.phi();
        r.precoder = d.F;
        break;
    }
    case SchemeId::ProposedHP: {
        const Design &d = ctx.fd_direct();
        const SecondResult &h = ctx.hp();
        r.precoder = h.precoders.product();
        r.phases = d.phases.phi();
        r.gain = channel_gain(ch, d.phases, r.precoder);
        r.decomposition_residual = h.report.residual;
        break;
    }
    case SchemeId::UpperBoundFD: {
        const FirstResult &u = ctx.upper();
        r.gain = objective_Y2(u.vars.Q, u.vars.W, ch);
        r.objective_trace = u.state.objective;
        r.rank_residual_q = u.report.rank_residual_q;
        r.rank_residual_w = u.report.rank_residual_w;
        break;
    }
    case SchemeId::UpperBoundHP: {
        const FirstResult &u = ctx.upper();
        SecondResult h = run_second_subproblem(extract_precoder(u.vars.W), ctx.s_.second);
        CMat P = h.precoders.product();
        r.gain = objective_Y2(u.vars.Q, P * P.adjoint(), ch);
        r.decomposition_residual = h.report.residual;
        break;
    }
    case SchemeId::SDR: {
        const Design &d = ctx.sdr();
        r.gain = d.gain;
        r.phases = d.phases.phi();
        r.precoder = d.F;
        break;
    }
    case SchemeId::NoBeamforming: {
        const int m = ch.M();
        if (m < 2)
            throw std::invalid_argument("NoBeamforming needs M >= 2");
        CMat F = CMat::Zero(m, 2);
        F(0, 0) = F(1, 1) = 1.0;
        JointSettings j = ctx.s_.joint;
        j.relaxed = false;
        j.relaxed_warmup = true;
        j.fixed_W = F * F.adjoint();
        FirstResult res = run_first_subproblem(ch, j);
        PhaseConfig p = extract_phases(res.vars.Q, ch, F);
        r.gain = channel_gain(ch, p, F);
        r.phases = p.phi();
        r.precoder = F;
        r.objective_trace = res.state.objective;
        r.rank_residual_q = res.report.rank_residual_q;
        break;
    }
    case SchemeId::AntennaSelection: {
        const Design &d = ctx.fd_direct();
        CMat H = cascaded_channel(ch, d.phases.phi());
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(H.cols()));
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return H.col(a).norm() > H.col(b).norm(); });
        const Eigen::Index k = std::min<Eigen::Index>(2, H.cols());
        CMat sub(H.rows(), k);
        for (Eigen::Index j = 0; j < k; ++j)
            sub.col(j) = H.col(idx[static_cast<std::size_t>(j)]);
        Eigen::JacobiSVD<CMat> svd(sub, Eigen::ComputeThinV);
        CMat F = CMat::Zero(H.cols(), 2);
        for (Eigen::Index j = 0; j < k; ++j)
            F(idx[static_cast<std::size_t>(j)], 0) = std::sqrt(2.0) * svd.matrixV()(j, 0);
        r.gain = channel_gain(ch, d.phases, F);
        r.phases = d.phases.phi();
        r.precoder = F;
        break;
    }
    case SchemeId::RandomIRS: {
        Rng rng = Rng::derive(ctx.seed_, {0x52414e44});
        CVec phi(ch.n_elements());
        for (Eigen::Index i = 0; i < phi.size(); ++i)
            phi(i) = rng.random_phase();
        PhaseConfig p(phi, ch.r1());
        FdOracle o = fd_oracle_for_fixed_phases(ch, p, 1.0, 1.0);
        r.gain = channel_gain(ch, p, o.F);
        r.phases = phi;
        r.precoder = o.F;
        break;
    }
    }
    if (id == SchemeId::ProposedFD || id == SchemeId::ProposedHP || id == SchemeId::SDR)
    {
        const FirstResult &p = ctx.proposed();
        r.objective_trace = p.state.objective;
        r.rank_residual_q = p.report.rank_residual_q;
        r.rank_residual_w = p.report.rank_residual_w;
    }
    return r;
}

} // namespace

std::vector<SolveReport> run_schemes(const std::vector<SchemeId> &schemes, const ChannelSet &channels,
                                     const SystemConfig &cfg, const BenchSettings &settings,
                                     std::uint64_t trial_seed)
{
    TrialContext ctx(channels, cfg, settings, trial_seed);
    std::vector<SolveReport> out;
    out.reserve(schemes.size());
    for (SchemeId id : schemes)
    {
        auto t0 = std::chrono::steady_clock::now();
        SolveReport r;
        try
        {
            r = evaluate(id, ctx);
        }
        catch (const std::exception &e)
        {
            r = SolveReport{};
            r.scheme = id;
            r.seed = trial_seed;
            r.ok = false;
            r.error = e.what();
        }
        r.wall_seconds = seconds_since(t0);
        out.push_back(std::move(r));
    }
    return out;
}

SolveReport run_scheme(SchemeId scheme, const ChannelSet &channels, const SystemConfig &cfg,
                       const BenchSettings &settings, std::uint64_t trial_seed)
{
    return run_schemes({scheme}, channels, cfg, settings, trial_seed).front();
}

// ------------------------------------------------------------------------
// Sweeps

Rng trial_rng(std::uint64_t master, int trial)
{
    return Rng::derive(master, {0x6368616eULL, static_cast<std::uint64_t>(trial)});
}

namespace
{

std::uint64_t trial_seed(std::uint64_t master, int trial)
{
    return Rng::derive(master, {0x7363686dULL, static_cast<std::uint64_t>(trial)}).engine()();
}

ChannelSet trial_channels(const SystemConfig &cfg, const Scenario &scenario, int trial)
{
    Rng rng = trial_rng(cfg.seed, trial);
    return generate_channels(cfg, scenario.geometry, rng);
}

// Runs body(t) for every trial, optionally on several threads. Results are written by index,
// so the output does not depend on scheduling.
void for_each_trial(int trials, int threads, const std::function<void(int)> &body)
{
    if (threads <= 1 || trials <= 1)
    {
        for (int t = 0; t < trials; ++t)
            body(t);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try
            {
                for (int t = w; t < trials; t += threads)
                    body(t);
            }
            catch (...)
            {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto &th : pool)
        th.join();
    for (auto &e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::pair<double, double> mean_stderr(const std::vector<double> &v)
{
    if (v.empty())
        return {std::nan(""), std::nan("")};
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace

std::vector<SweepCell> aggregate(const std::string &scenario, const std::vector<SchemeId> &schemes,
                                 const std::vector<std::vector<SolveReport>> &per_trial,
                                 const std::vector<double> &snr_db, RateConvention convention)
{
    std::vector<SweepCell> cells;
    for (std::size_t k = 0; k < schemes.size(); ++k)
        for (double db : snr_db)
        {
            const double rho = db_to_linear(db);
            std::vector<double> rates;
            int failed = 0;
            for (const auto &trial : per_trial)
            {
                const SolveReport &r = trial.at(k);
                if (r.ok)
                    rates.push_back(r.rate(rho, convention));
                else
                    ++failed;
            }
            auto [mean, se] = mean_stderr(rates);
            cells.push_back({scenario, schemes[k], db, mean, se, static_cast<int>(rates.size()), failed});
        }
    return cells;
}

SweepResult sweep(const SystemConfig &cfg_in, const Scenario &scenario, const std::vector<SchemeId> &schemes,
                  const SweepSettings &settings)
{
    if (settings.trials < 1)
        throw std::invalid_argument("sweep: trials must be >= 1");
    const SystemConfig cfg = apply_scenario(cfg_in, scenario);
    SweepResult out;
    out.per_trial.resize(static_cast<std::size_t>(settings.trials));
    for_each_trial(settings.trials, settings.threads, [&](int t) {
        ChannelSet ch = trial_channels(cfg, scenario, t);
        out.per_trial[static_cast<std::size_t>(t)] =
            run_schemes(schemes, ch, cfg, settings.bench, trial_seed(cfg.seed, t));
    });
    for (const auto &trial : out.per_trial)
        for (const auto &r : trial)
            out.partial_failure |= !r.ok;
    out.cells = aggregate(scenario.name, schemes, out.per_trial, settings.snr_db, settings.bench.convention);
    return out;
}

std::vector<UncertaintyCell> uncertainty_sweep(const SystemConfig &cfg_in, const Scenario &scenario,
                                               const std::vector<double> &alphas, const SweepSettings &settings,
                                               const std::vector<SolveReport> *designs)
{
    for (double a : alphas)
        if (!(a >= 0.0))
            throw std::invalid_argument("uncertainty_sweep: alphas must be >= 0");
    if (designs && designs->size() < static_cast<std::size_t>(settings.trials))
        throw std::invalid_argument("uncertainty_sweep: fewer designs than trials");
    const SystemConfig cfg = apply_scenario(cfg_in, scenario);
    const std::size_t na = alphas.size();
    const std::size_t ns = settings.snr_db.size();
    const auto trials = static_cast<std::size_t>(settings.trials);

    // rates[trial][alpha][snr]; NaN marks a failed design.
    std::vector<std::vector<std::vector<double>>> rates(trials, std::vector<std::vector<double>>(na));
    for_each_trial(settings.trials, settings.threads, [&](int t) {
        ChannelSet ch = trial_channels(cfg, scenario, t);
        SolveReport design = designs ? (*designs)[static_cast<std::size_t>(t)]
                                     : run_scheme(SchemeId::ProposedHP, ch, cfg, settings.bench,
                                                  trial_seed(cfg.seed, t));
        auto &slot = rates[static_cast<std::size_t>(t)];
        if (!design.ok)
        {
            for (auto &v : slot)
                v.assign(ns, std::nan(""));
            return;
        }
        PhaseConfig phases(design.phases, ch.r1());
        CMat G_nom = effective_channel(ch, phases, design.precoder);
        for (std::size_t a = 0; a < na; ++a)
        {
            Rng delta = Rng::derive(cfg.seed, {0x616c7068ULL, static_cast<std::uint64_t>(t)});
            ChannelSet actual = perturb(ch, alphas[a], delta);
            CMat G_act = effective_channel(actual, phases, design.precoder);
            for (std::size_t s = 0; s < ns; ++s)
                slot[a].push_back(
                    mismatched_rate(G_nom, G_act, db_to_linear(settings.snr_db[s]), 1.0, settings.bench.convention));
        }
    });

    std::vector<UncertaintyCell> cells;
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t s = 0; s < ns; ++s)
        {
            std::vector<double> v;
            for (std::size_t t = 0; t < trials; ++t)
                if (std::isfinite(rates[t][a][s]))
                    v.push_back(rates[t][a][s]);
            auto [mean, se] = mean_stderr(v);
            cells.push_back({alphas[a], settings.snr_db[s], mean, se, static_cast<int>(v.size())});
        }
    return cells;
}

MMState convergence_trace(const SystemConfig &cfg_in, const Scenario &scenario, const SweepSettings &settings)
{
    const SystemConfig cfg = apply_scenario(cfg_in, scenario);
    ChannelSet ch = trial_channels(cfg, scenario, 0);
    JointSettings j = settings.bench.joint;
    j.relaxed = false;
    j.relaxed_warmup = true;
    return run_first_subproblem(ch, j).state;
}

// ------------------------------------------------------------------------

OracleResult small_instance_oracle(const ChannelSet &channels, int levels)
{
    const int n = channels.n_elements();
    if (n > 4)
        throw std::invalid_argument("small_instance_oracle: at most 4 reflecting elements");
    if (levels < 1)
        throw std::invalid_argument("small_instance_oracle: levels must be >= 1");
    std::vector<cd> grid(static_cast<std::size_t>(levels));
    for (int k = 0; k < levels; ++k)
        grid[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * kPi * k / levels);

    OracleResult best;
    best.best_gain = -1.0;
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    CVec phi(n);
    long long total = 1;
    for (int i = 0; i < n; ++i)
        total *= levels;
    for (long long c = 0; c < total; ++c)
    {
        long long rem = c;
        for (int i = 0; i < n; ++i)
        {
            phi(i) = grid[static_cast<std::size_t>(rem % levels)];
            rem /= levels;
        }
        FdOracle o = fd_oracle_for_fixed_phases(channels, PhaseConfig(phi, channels.r1()), 1.0, 1.0);
        if (o.gain > best.best_gain)
        {
            best.best_gain = o.gain;
            best.best_phases = phi;
        }
    }
    best.evaluated = total;
    return best;
}

// ------------------------------------------------------------------------
// CSV

void write_sweep_csv(std::ostream &out, const std::vector<SweepCell> &cells)
{
    out << "scenario,scheme,snr_db,mean_rate,stderr_rate,n_ok,n_failed\n";
    char line[256];
    for (const auto &c : cells)
    {
        std::snprintf(line, sizeof line, "%s,%s,%.17g,%.17g,%.17g,%d,%d\n", c.scenario.c_str(), to_string(c.scheme),
                      c.snr_db, c.mean_rate, c.stderr_rate, c.n_ok, c.n_failed);
        out << line;
    }
}

void write_uncertainty_csv(std::ostream &out, const std::vector<UncertaintyCell> &cells)
{
    out << "alpha,snr_db,mean_rate,stderr_rate,n\n";
    char line[256];
    for (const auto &c : cells)
    {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%d\n", c.alpha, c.snr_db, c.mean_rate,
                      c.stderr_rate, c.n);
        out << line;
    }
}

void write_reports_csv(std::ostream &out, const std::vector<SolveReport> &reports, double snr_db,
                       RateConvention convention)
{
    out << "scheme,seed,ok,snr_db,gain,snr,rate,rank_residual_q,rank_residual_w,decomposition_residual,"
           "outer_iterations,error\n";
    const double rho = db_to_linear(snr_db);
    char line[512];
    for (const auto &r : reports)
    {
        const int iters = r.objective_trace.empty() ? 0 : static_cast<int>(r.objective_trace.size()) - 1;
        std::snprintf(line, sizeof line, "%s,%llu,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,", to_string(r.scheme),
                      static_cast<unsigned long long>(r.seed), r.ok ? 1 : 0, snr_db, r.gain, r.snr(rho),
                      r.rate(rho, convention), r.rank_residual_q, r.rank_residual_w, r.decomposition_residual, iters);
        out << line << '"' << r.error << "\"\n";
    }
}

} // namespace irshp
