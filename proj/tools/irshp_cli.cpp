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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

using namespace irshp;

namespace
{

const char *const kConfigKeys[] = {"M",        "n_rf",      "k",         "r1",        "r2",     "pt_dbm",
                                   "sigma2",   "gt_dbi",    "l_b",       "l_i",       "d_hb",   "d_hi",
                                   "wavelength", "spacing", "bs_dims",   "irs1_dims", "irs2_dims", "user_dims",
                                   "pl_a",     "pl_b"};

struct Common
{
    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::uint64_t seed = 1;
    bool seed_set = false;
    std::string scenario;
    std::string out;
    std::string convention = "full";
    int max_outer = 50;
    int inner_iters = 100;
    int threads = 1;
};

void add_common(CLI::App *app, Common &c)
{
    app->add_option("--config", c.config_path, "key = value configuration file");
    for (const char *key : kConfigKeys)
        app->add_option_function<std::string>(
            std::string("--") + key, [&c, key](const std::string &v) { c.overrides[key] = v; },
            std::string("override configuration key ") + key);
    app->add_option_function<std::uint64_t>(
        "--seed", [&c](std::uint64_t v) { c.seed = v, c.seed_set = true; }, "master seed");
    app->add_option("--scenario", c.scenario, "first, second, third or coverage (default: from configuration)");
    app->add_option("--out", c.out, "output CSV path (default: stdout)");
    app->add_option("--rate", c.convention, "rate convention: full or half")
        ->check(CLI::IsMember({"full", "half"}));
    app->add_option("--max-outer", c.max_outer, "outer MM iteration cap per phase")->check(CLI::PositiveNumber);
    app->add_option("--inner-iters", c.inner_iters, "inner convex solver iteration cap")->check(CLI::PositiveNumber);
    app->add_option("--threads", c.threads, "worker threads for trials")->check(CLI::PositiveNumber);
}

SystemConfig build_config(const Common &c)
{
    SystemConfig cfg;
    if (!c.config_path.empty())
        cfg = load_config_file(c.config_path, cfg);
    for (const auto &[k, v] : c.overrides)
        apply_setting(cfg, k, v);
    if (c.seed_set)
        cfg.seed = c.seed;
    return validate_config(cfg);
}

Scenario build_scenario(const Common &c, const SystemConfig &cfg)
{
    return c.scenario.empty() ? scenario_from_config(cfg) : scenario_preset(c.scenario);
}

SweepSettings build_settings(const Common &c)
{
    SweepSettings s;
    s.threads = c.threads;
    s.bench.convention = c.convention == "half" ? RateConvention::Half : RateConvention::Full;
    s.bench.joint.max_outer = c.max_outer;
    s.bench.joint.inner.max_iters = c.inner_iters;
    return s;
}

// Writes to --out when given, stdout otherwise.
class Output
{
  public:
    explicit Output(const std::string &path)
    {
        if (!path.empty())
        {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw std::runtime_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<SchemeId> parse_schemes(const std::vector<std::string> &names)
{
    if (names.empty())
        return all_schemes();
    std::vector<SchemeId> ids;
    for (const auto &n : names)
        ids.push_back(scheme_from_string(n));
    return ids;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Joint double-IRS phase and hybrid precoder design for Alamouti mmWave downlinks"};
    app.require_subcommand(1);

    Common common;

    // run
    auto *run = app.add_subcommand("run", "run schemes on one channel draw");
    add_common(run, common);
    std::vector<std::string> run_schemes_arg;
    int run_trial = 0;
    double run_snr = 10.0;
    std::string run_trace;
    run->add_option("--scheme", run_schemes_arg, "scheme name (repeatable; default: all)");
    run->add_option("--trial", run_trial, "trial index of the channel draw")->check(CLI::NonNegativeNumber);
    run->add_option("--snr", run_snr, "transmit SNR [dB] for the reported rate");
    run->add_option("--trace", run_trace, "write the objective trace of the first scheme to this CSV");

    // sweep
    auto *sw = app.add_subcommand("sweep", "rate versus SNR over paired channel draws");
    add_common(sw, common);
    std::vector<std::string> sw_schemes;
    std::vector<double> sw_snr{5.0, 7.5, 10.0, 12.5, 15.0};
    int sw_trials = 50;
    std::string sw_reports;
    sw->add_option("--scheme", sw_schemes, "scheme name (repeatable; default: all)");
    sw->add_option("--snr", sw_snr, "SNR grid [dB]");
    sw->add_option("--trials", sw_trials, "number of channel draws")->check(CLI::PositiveNumber);
    sw->add_option("--reports", sw_reports, "also write per-trial reports (at the first grid point) to this CSV");

    // uncertainty
    auto *un = app.add_subcommand("uncertainty", "rate under channel mismatch");
    add_common(un, common);
    std::vector<double> un_alpha{0.0, 0.1, 1.0};
    std::vector<double> un_snr{5.0, 10.0, 15.0, 20.0, 25.0};
    int un_trials = 50;
    un->add_option("--alpha", un_alpha, "mismatch scales")->check(CLI::NonNegativeNumber);
    un->add_option("--snr", un_snr, "SNR grid [dB]");
    un->add_option("--trials", un_trials, "number of channel draws")->check(CLI::PositiveNumber);

    // convergence
    auto *cv = app.add_subcommand("convergence", "outer-loop trace of the proposed scheme on trial 0");
    add_common(cv, common);

    // oracle
    auto *orc = app.add_subcommand("oracle", "exhaustive phase search on tiny instances");
    add_common(orc, common);
    int orc_trials = 200;
    int orc_levels = 16;
    orc->add_option("--trials", orc_trials, "number of seeds")->check(CLI::PositiveNumber);
    orc->add_option("--levels", orc_levels, "phase levels per element")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*orc)
        {
            // Tiny defaults unless the caller overrides them.
            for (auto [k, v] : {std::pair{"M", "2"}, {"r1", "1"}, {"r2", "1"}, {"n_rf", "2"}})
                common.overrides.try_emplace(k, v);
        }
        const SystemConfig cfg = build_config(common);
        const Scenario scenario = build_scenario(common, cfg);
        SweepSettings settings = build_settings(common);
        Output out(common.out);
        char line[256];

        if (*run)
        {
            const SystemConfig c = apply_scenario(cfg, scenario);
            Rng rng = trial_rng(c.seed, run_trial);
            ChannelSet ch = generate_channels(c, scenario.geometry, rng);
            auto reports = run_schemes(parse_schemes(run_schemes_arg), ch, c, settings.bench,
                                       Rng::derive(c.seed, {static_cast<std::uint64_t>(run_trial)}).engine()());
            write_reports_csv(out.stream(), reports, run_snr, settings.bench.convention);
            if (!run_trace.empty())
            {
                std::ofstream t(run_trace);
                t << "iteration,objective\n";
                const auto &tr = reports.front().objective_trace;
                for (std::size_t i = 0; i < tr.size(); ++i)
                {
                    std::snprintf(line, sizeof line, "%zu,%.17g\n", i, tr[i]);
                    t << line;
                }
            }
            for (const auto &r : reports)
                if (!r.ok)
                    return 2;
            return 0;
        }
        if (*sw)
        {
            settings.snr_db = sw_snr;
            settings.trials = sw_trials;
            auto schemes = parse_schemes(sw_schemes);
            SweepResult res = sweep(cfg, scenario, schemes, settings);
            write_sweep_csv(out.stream(), res.cells);
            if (!sw_reports.empty())
            {
                std::ofstream rep(sw_reports);
                std::vector<SolveReport> flat;
                for (const auto &t : res.per_trial)
                    flat.insert(flat.end(), t.begin(), t.end());
                write_reports_csv(rep, flat, sw_snr.front(), settings.bench.convention);
            }
            return res.partial_failure ? 2 : 0;
        }
        if (*un)
        {
            settings.snr_db = un_snr;
            settings.trials = un_trials;
            write_uncertainty_csv(out.stream(), uncertainty_sweep(cfg, scenario, un_alpha, settings));
            return 0;
        }
        if (*cv)
        {
            write_trace_csv(out.stream(), convergence_trace(cfg, scenario, settings));
            return 0;
        }
        if (*orc)
        {
            const SystemConfig c = apply_scenario(cfg, scenario);
            if (c.total_elements() > 4)
                throw std::invalid_argument("oracle: at most 4 reflecting elements");
            out.stream() << "trial,pipeline_gain,oracle_gain,ratio\n";
            bool failed = false;
            for (int t = 0; t < orc_trials; ++t)
            {
                Rng rng = trial_rng(c.seed, t);
                ChannelSet ch = generate_channels(c, scenario.geometry, rng);
                SolveReport r = run_scheme(SchemeId::ProposedFD, ch, c, settings.bench);
                OracleResult o = small_instance_oracle(ch, orc_levels);
                failed |= !r.ok;
                const double ratio = o.best_gain > 0.0 ? r.gain / o.best_gain : 1.0;
                std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", t, r.gain, o.best_gain, ratio);
                out.stream() << line;
            }
            return failed ? 2 : 0;
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "irshp: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
