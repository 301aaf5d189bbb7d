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

#include "irshp/convex_engine.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace irshp
{

/// F ~ F_RF F_BB with unit-modulus F_RF and ||F_RF F_BB||_F^2 = 2.
struct PrecoderSet
{
    CMat F;    // M x 2 fully digital target
    CMat F_RF; // M x N_RF
    CMat F_BB; // N_RF x 2, normalized
    double beta = 1.0;

    CMat product() const { return F_RF * F_BB; }
};

class RankDeficientError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Least-squares digital precoder (F_RF^H F_RF)^-1 F_RF^H F.
/// Throws RankDeficientError when cond(F_RF) > 1e10.
CMat digital_update(const CMat &F_RF, const CMat &F);

/// beta = sqrt(2 / ||F_RF F_BB~||_F^2) and the scaled digital precoder.
/// Throws std::invalid_argument when the product has zero power.
std::pair<double, CMat> normalize_beta(const CMat &F_RF, const CMat &F_BB_unnorm);

/// Tr(F_RF B B^H F_RF^H - F_RF B F^H - F B^H F_RF^H) = ||F - F_RF B||^2 - ||F||^2.
double analog_objective(const CMat &F_RF, const CMat &F_BB_unnorm, const CMat &F);

/// One row-major sweep of exact per-entry phase minimization of analog_objective.
CMat analog_coordinate_update(const CMat &F_RF, const CMat &F_BB_unnorm, const CMat &F);

/// Lifted form: X = [Fb^H Fb, Fb^H; Fb, I_M] with Fb = F_RF / sqrt(M), and
/// M_mat = [B B^H, -B F^H / sqrt(M); -F B^H / sqrt(M), 0], so that
/// Tr(M_mat X) = analog_objective / M.
struct LiftedAnalog
{
    CMat M_mat;
    CMat F_BB_unnorm;
    CMat F;
    int n_rf = 0;
    int m = 0;

    /// X(F_RF) for a unit-modulus analog precoder.
    CMat lift(const CMat &F_RF) const;
};

LiftedAnalog build_lift(const CMat &F_BB_unnorm, const CMat &F, int M_antennas);

struct SdrSettings
{
    convex::SolverSettings solver{2000, 1e-6, 1e-7, 1.0, 1.6, 10};
    int refine_sweeps = 50;
    std::uint64_t fallback_seed = 7;
};

/// Relaxed lifted problem (PSD, unit diagonal, identity r-block) solved by the convex engine.
/// The analog precoder is read from the (r, q) block, projected to modulus 1/sqrt(M), scaled by
/// sqrt(M), then refined with coordinate sweeps. Solver failure falls back to coordinate sweeps
/// from random phases.
CMat solve_sdr_analog(const LiftedAnalog &lift, const SdrSettings &settings = {});

struct SecondSettings
{
    int n_rf = 2;
    int max_iters = 100;
    double rel_tol = 1e-5; // relative change of the residual
    bool sdr_init = false;
    std::optional<CMat> F_RF_init;
    std::uint64_t seed = 11; // phases for analog columns beyond those of F
    SdrSettings sdr;
};

struct SecondReport
{
    int iterations = 0;
    double residual = 0.0; // ||F - F_RF F_BB~||_F / ||F||_F before normalization
    double beta = 1.0;
    double unit_modulus_violation = 0.0;
    bool stagnated = false;
    std::vector<double> residual_trace;
};

struct SecondResult
{
    PrecoderSet precoders;
    SecondReport report;
};

/// Alternating digital / analog updates, normalized once at exit. Requires ||F||_F^2 = 2.
SecondResult run_second_subproblem(const CMat &F, const SecondSettings &settings = {});

} // namespace irshp
