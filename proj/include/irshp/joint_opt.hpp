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

#include "irshp/alamouti.hpp"
#include "irshp/convex_engine.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace irshp
{

/*!
 * Lifted phase / precoder variables.
 *
 * Q is 2R x 2R with unit diagonal, W is M x M with trace 2. Both are PSD. Q = conj(phi) phi^T
 * and W = F F^H reproduce ||G||_F^2 exactly through objective_Y2.
 */
struct LiftedVars
{
    CMat Q;
    CMat W;
};

/// H_I_tilde .* Q. With Q = conj(x x^H) this equals diag(x)^H H_I_tilde diag(x).
CMat lift_A(const CMat &Q, const CMat &H_I_tilde);

/// H_B W H_B^H
CMat lift_B(const CMat &W, const CMat &H_B);

/// Re Tr((H_I_tilde .* Q) (H_B W H_B^H))
double objective_Y2(const CMat &Q, const CMat &W, const ChannelSet &channels);

/// Tr(AB) = -1/2 ||A||^2 - 1/2 ||B||^2 + 1/2 ||A + B||^2 for Hermitian A, B.
struct IaTerms
{
    double minus_half_a;
    double minus_half_b;
    double half_sum;
    double total() const { return minus_half_a + minus_half_b + half_sum; }
};

/// Throws std::invalid_argument for non-Hermitian or mismatched inputs.
IaTerms ia_split(const CMat &A, const CMat &B);

/// S1(Q, W) = 1/2 ||H_I_tilde .* Q + H_B W H_B^H||_F^2
double s1_value(const CMat &Q, const CMat &W, const ChannelSet &channels);

/// First-order minorizer of S1 at (Qi, Wi):
///     S1~(Q, W) = constant + Re Tr(script_A (Q - Qi)) + Re Tr(script_B (W - Wi)).
struct Surrogate
{
    CMat script_A; // (A + B) .* conj(H_I_tilde), Hermitian
    CMat script_B; // H_B^H (A + B) H_B
    double constant = 0.0;
    CMat Qi, Wi;

    double value(const CMat &Q, const CMat &W) const;
};

Surrogate mm_surrogate(const CMat &Qi, const CMat &Wi, const ChannelSet &channels);

/// Y2 with S1 replaced by its minorizer: -1/2 ||A||^2 - 1/2 ||B||^2 + S1~.
double surrogate_Y2(const Surrogate &s, const CMat &Q, const CMat &W, const ChannelSet &channels);

/// Tr(Q) - lambda_1(Qi) - Re Tr(u u^H (Q - Qi)), u the top eigenvector of Qi.
double penalty_g1(const CMat &Q, const CMat &Qi);

/// Tr(W) - (lambda_1 + lambda_2)(Wi) - Re Tr(U U^H (W - Wi)), U the top-2 eigenvectors of Wi.
double penalty_g2(const CMat &W, const CMat &Wi);

/// Tr(Q) - lambda_1(Q), the rank-1 gap.
double rank1_gap(const CMat &Q);

/// Tr(W) - lambda_1(W) - lambda_2(W), the rank-2 gap.
double rank2_gap(const CMat &W);

/// Y2 - inv_eta (rank1_gap(Q) + rank2_gap(W)).
double penalized_objective(const CMat &Q, const CMat &W, const ChannelSet &channels, double inv_eta);

struct JointSettings
{
    int max_outer = 50;
    double rel_tol = 1e-4;        // relative objective change at exit
    double rank_tol = 1e-3;       // penalty tolerance is rank_tol * (2R + 2)
    double eta_init_fraction = 0.1;
    double eta_decay = 0.5;       // eta <- eta * eta_decay until the penalty is small
    bool relaxed = false;         // drop both rank penalties (1/eta = 0)
    bool normalize = true;        // rescale channels so both lifted blocks start at unit norm
    bool relaxed_warmup = true;   // penalized runs start from the relaxed MM solution
    bool rebalance = true;        // re-weight the inner-approximation split at every iterate
    bool gauss_seidel = true;     // re-linearize after the Q block before solving the W block
    double extrapolation = 0.5;   // initial safeguarded extrapolation step, 0 disables
    std::optional<CMat> fixed_W;  // optimize Q only, W held at this value
    std::optional<LiftedVars> warm_start;
    convex::SolverSettings inner{100, 1e-6, 1e-7, 1.0, 1.6, 10};
};

/// Outer-loop state and per-iteration history. Objective values are in unscaled channel units.
struct MMState
{
    int iteration = 0;
    LiftedVars vars;
    double inv_eta = 0.0;
    bool eta_frozen = false;
    double beta = 0.0;

    std::vector<double> objective;       // Y2 at each iterate (index 0: initial point)
    std::vector<double> surrogate;       // surrogate Y2 at the new iterate
    std::vector<double> g1, g2;          // DC penalties at the new iterate
    std::vector<double> inv_eta_used;    // penalty weight of each outer iteration
    std::vector<double> penalized_prev;  // exact penalized objective of the previous iterate
    std::vector<double> penalized_new;   // ... and of the new one, same weight
    std::vector<bool> frozen;            // eta was frozen during the iteration
    std::vector<double> violation_q, violation_w;
    std::vector<int> inner_iterations;

    convex::SolverState q_state, w_state;
};

struct FirstReport
{
    bool converged = false;
    int outer_iterations = 0;
    double rank_residual_q = 0.0; // rank1_gap(Q) / Tr(Q)
    double rank_residual_w = 0.0; // rank2_gap(W) / Tr(W)
    int warmup_iterations = 0;    // relaxed iterations before the penalized phase
    double channel_scale = 1.0;   // unscaled Y2 = scaled Y2 * channel_scale
    std::vector<std::string> notes;
};

struct FirstResult
{
    LiftedVars vars;
    LiftedVars warmup_vars; // end of the relaxed warm-up (equals the start point without one)
    MMState state;
    FirstReport report;
};

/// One penalized MM step on `channels` (which may be pre-scaled). The Q block is solved first;
/// with gauss_seidel the surrogate is re-linearized at (Q_new, Wi) before the W block. Each
/// block solve includes the current iterate as a candidate, so the surrogate never decreases.
LiftedVars solve_p5_iteration(MMState &state, const ChannelSet &channels, const JointSettings &settings);

/// Full outer loop from Q = 1 1^H, W = (2/M) I (or the warm start). Penalized runs first
/// iterate with 1/eta = 0 (unless relaxed_warmup is off), then start the penalty schedule at
/// the relaxed solution. Each phase is capped at max_outer iterations.
FirstResult run_first_subproblem(const ChannelSet &channels, const JointSettings &settings = {});

/// Unit-modulus phases from the top eigenvector of Q. Both u/|u| and its conjugate are tried
/// and the one with the larger ||G||_F^2 under F is returned. Zero entries map to phase 1.
PhaseConfig extract_phases(const CMat &Q, const ChannelSet &channels, const CMat &F);

/// F = [sqrt(l1) u1, sqrt(l2) u2] rescaled to ||F||_F^2 = 2.
CMat extract_precoder(const CMat &W);

/// Writes the per-iteration trace as CSV.
void write_trace_csv(std::ostream &out, const MMState &state);

} // namespace irshp
