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

#pragma once

#include "irshp/hybrid_decomp.hpp"
#include "irshp/joint_opt.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace irshp
{

// ------------------------------------------------------------------------
// Scenarios

struct Scenario
{
    std::string name = "custom";
    LinkGeometry geometry;
    int r1 = 25;
    int r2 = 25;
};

/// "first", "second", "third" or "coverage". Throws std::invalid_argument otherwise.
Scenario scenario_preset(const std::string &name);

/// Scenario built from the distances and element counts already in cfg.
Scenario scenario_from_config(const SystemConfig &cfg);

/// Copies element counts (and re-derives the grids) and reference distances into cfg.
SystemConfig apply_scenario(SystemConfig cfg, const Scenario &scenario);

// ------------------------------------------------------------------------
// Schemes

enum class SchemeId
{
    ProposedHP,
    ProposedFD,
    UpperBoundHP,
    UpperBoundFD,
    NoBeamforming,
    AntennaSelection,
    RandomIRS,
    SDR
};

const std::vector<SchemeId> &all_schemes();
const char *to_string(SchemeId id);
SchemeId scheme_from_string(const std::string &name);

/// Solver knobs shared by every scheme.
struct BenchSettings
{
    JointSettings joint;
    SecondSettings second;
    RateConvention convention = RateConvention::Full;
};

/// Outcome of one scheme on one channel draw. `gain` is ||G||_F^2 in reference units (the
/// lifted objective for UpperBoundFD); SNR at reference transmit SNR rho is (rho / 2) gain.
struct SolveReport
{
    SchemeId scheme = SchemeId::ProposedHP;
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
    std::vector<double> objective_trace;
    double gain = 0.0;
    double rank_residual_q = 0.0;
    double rank_residual_w = 0.0;
    double decomposition_residual = 0.0;
    double wall_seconds = 0.0;
    CVec phases;    // designed reflection coefficients (empty for the bound)
    CMat precoder;  // transmitted precoder, F or F_RF F_BB (empty for the bound)

    double snr(double rho) const;
    double rate(double rho, RateConvention convention = RateConvention::Full) const;
};

/// Closed-form FD optimum for fixed phases: F = sqrt(2) [v1, 0], SNR = (pt / 2 sigma2) 2 s1^2.
struct FdOracle
{
    CMat F;
    double snr = 0.0;
    double gain = 0.0; // 2 s1^2
};
FdOracle fd_oracle_for_fixed_phases(const ChannelSet &channels, const PhaseConfig &phases, double pt, double sigma2);

/// Runs every requested scheme on one draw, sharing the intermediate solutions between
/// schemes. Failures are recorded per scheme. `trial_seed` keys the random phases.
std::vector<SolveReport> run_schemes(const std::vector<SchemeId> &schemes, const ChannelSet &channels,
                                     const SystemConfig &cfg, const BenchSettings &settings,
                                     std::uint64_t trial_seed);

SolveReport run_scheme(SchemeId scheme, const ChannelSet &channels, const SystemConfig &cfg,
                       const BenchSettings &settings, std::uint64_t trial_seed = 0);

// ------------------------------------------------------------------------
// Sweeps

/// Channel stream for trial t of an experiment (paired across schemes and scenarios).
Rng trial_rng(std::uint64_t master, int trial);

struct SweepSettings
{
    std::vector<double> snr_db{5.0, 7.5, 10.0, 12.5, 15.0};
    int trials = 50;
    int threads = 1;
    BenchSettings bench;
};

struct SweepCell
{
    std::string scenario;
    SchemeId scheme;
    double snr_db = 0.0;
    double mean_rate = 0.0;
    double stderr_rate = 0.0;
    int n_ok = 0;
    int n_failed = 0;
};

struct SweepResult
{
    std::vector<SweepCell> cells; // sorted by (scheme, snr)
    std::vector<std::vector<SolveReport>> per_trial; // [trial][scheme]
    bool partial_failure = false;
};

SweepResult sweep(const SystemConfig &cfg, const Scenario &scenario, const std::vector<SchemeId> &schemes,
                  const SweepSettings &settings);

/// Aggregates existing per-trial reports onto an SNR grid.
std::vector<SweepCell> aggregate(const std::string &scenario, const std::vector<SchemeId> &schemes,
                                 const std::vector<std::vector<SolveReport>> &per_trial,
                                 const std::vector<double> &snr_db, RateConvention convention);

struct UncertaintyCell
{
    double alpha = 0.0;
    double snr_db = 0.0;
    double mean_rate = 0.0;
    double stderr_rate = 0.0;
    int n = 0;
};

/// Designs (phi, F_RF F_BB) on nominal channels, evaluates them on H + alpha Delta with the
/// receiver combining on the nominal cascade. Delta is drawn once per trial and shared by every
/// alpha. `designs`, if given, supplies the ProposedHP report of each trial.
std::vector<UncertaintyCell> uncertainty_sweep(const SystemConfig &cfg, const Scenario &scenario,
                                               const std::vector<double> &alphas, const SweepSettings &settings,
                                               const std::vector<SolveReport> *designs = nullptr);

/// Proposed run on trial 0 of the scenario; returns the outer-loop state for the trace.
MMState convergence_trace(const SystemConfig &cfg, const Scenario &scenario, const SweepSettings &settings);

// ------------------------------------------------------------------------
// Tiny-instance certification

struct OracleResult
{
    double best_gain = 0.0;
    CVec best_phases;
    long long evaluated = 0;
};

/// Exhaustive search over `levels` uniformly spaced phases per element (2R <= 4), FD oracle per
/// phase vector.
OracleResult small_instance_oracle(const ChannelSet &channels, int levels = 16);

// ------------------------------------------------------------------------
// CSV

void write_sweep_csv(std::ostream &out, const std::vector<SweepCell> &cells);
void write_uncertainty_csv(std::ostream &out, const std::vector<UncertaintyCell> &cells);
void write_reports_csv(std::ostream &out, const std::vector<SolveReport> &reports, double snr_db,
                       RateConvention convention);

} // namespace irshp
