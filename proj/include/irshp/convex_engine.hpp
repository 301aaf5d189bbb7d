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

#include "irshp/core_types.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace irshp::convex
{

using BoolMat = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/*!
 * Quadratic curvature that is diagonal in a unitary basis V:
 *
 *     P(X) = V (Omega .* (V^H X V)) V^H,   Omega real, symmetric, >= 0.
 *
 * Covers both lifted blocks: the Hadamard-weighted norm ||H .* Q||_F^2 (V = I, Omega = |H|^2)
 * and the congruence norm ||B W B^H||_F^2 (V from eig(B^H B), Omega_ij = k_i k_j).
 */
struct SeparableCurvature
{
    CMat basis;   // empty: identity
    RMat weights; // empty: zero curvature

    static SeparableCurvature none();
    static SeparableCurvature hadamard(const RMat &weights);
    /// Curvature of X -> ||B X B^H||_F^2, i.e. P(X) = K X K with K = B^H B.
    static SeparableCurvature congruence(const CMat &B);

    bool identity_basis() const { return basis.size() == 0; }
    bool zero() const { return weights.size() == 0; }
    CMat apply(const CMat &X) const;
    /// <X, P(X)>
    double energy(const CMat &X) const;
};

/// Affine part of the feasible set: either a pattern of fixed entries (unit diagonal is the
/// common case) or a fixed trace.
struct AffineConstraint
{
    enum class Kind
    {
        FixedEntries,
        FixedTrace
    };

    Kind kind = Kind::FixedTrace;
    int n = 0;
    BoolMat mask; // FixedEntries: Hermitian-symmetric pattern
    CMat values;  // FixedEntries: target values on the mask
    double trace = 0.0;

    static AffineConstraint unit_diagonal(int n);
    static AffineConstraint fixed_trace(int n, double t);
    static AffineConstraint fixed_entries(BoolMat mask, CMat values);

    bool is_unit_diagonal() const;
    /// Frobenius distance from X to the affine set.
    double violation(const CMat &X) const;
};

/// Frobenius projection onto the PSD cone (negative eigenvalues clipped).
/// Throws std::invalid_argument when ||A - A^H||_F > 1e-10 max(1, ||A||_F).
CMat project_psd(const CMat &A);

/// Exact Frobenius projection onto the affine set (fixed entries overwritten, or a uniform
/// diagonal shift of (t - Tr A) / n).
CMat project_affine(const CMat &A, const AffineConstraint &c);

/// Exact Frobenius projection onto {X >= 0, Tr X = t}: eigenvalues projected onto the simplex.
CMat project_psd_trace(const CMat &A, double t);

/// Maps any Hermitian matrix to an exactly feasible point: PSD clipping followed by diagonal
/// rescaling (unit-diagonal sets) or the simplex eigen-projection (trace sets). Other fixed-entry
/// patterns fall back to the affine projection of the clipped matrix.
CMat restore_feasible(const CMat &A, const AffineConstraint &c);

/// Dykstra's alternating projections onto PSD and the affine set. The returned iterate is the
/// PSD one; `violations`, if given, receives its affine violation after every pass.
CMat dykstra_project(const CMat &A, const AffineConstraint &c, int max_passes = 2000, double tol = 1e-10,
                     std::vector<double> *violations = nullptr);

/// maximize  -1/2 <X, P(X)> + Re Tr(C X)   s.t.  X >= 0,  X in affine set.
struct ConvexProblem
{
    SeparableCurvature curvature;
    CMat linear; // C, Hermitian
    AffineConstraint constraint;

    int size() const { return constraint.n; }
    double value(const CMat &X) const;
};

struct SolverSettings
{
    int max_iters = 5000;
    double primal_tol = 1e-6;      // relative iterate change
    double feasibility_tol = 1e-7; // relative PSD/affine disagreement
    double rho = 1.0;              // initial penalty, scaled by the curvature magnitude
    double over_relaxation = 1.6;
    int check_every = 10;
};

/// Primal/dual state; feeding a previous result back in warm-starts the splitting.
struct SolverState
{
    CMat Z; // PSD iterate
    CMat U; // scaled dual
    double rho = 0.0;
};

enum class SolveStatus
{
    Converged,
    MaxIterations,
    Infeasible
};

const char *to_string(SolveStatus s);

struct SolveResult
{
    CMat solution;      // best feasible iterate found (includes the warm-start point)
    double objective = 0.0;
    SolveStatus status = SolveStatus::MaxIterations;
    int iterations = 0;
    double violation = 0.0; // affine violation of `solution`
    double min_eigenvalue = 0.0;
    SolverState state;
};

class SolverError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/*!
 * Over-relaxed splitting between the smooth objective restricted to the affine set (solved in
 * closed form, exact in the curvature basis) and the PSD cone (eigenvalue clipping), with
 * adaptive penalty. Every `check_every` iterations the PSD iterate is mapped to an exactly
 * feasible point (diagonal rescaling for unit-diagonal sets, simplex eigen-projection for
 * trace sets) and the best such point is kept.
 *
 * `warm_point`, if feasible, is also a candidate, so the returned objective never falls
 * below it. Throws SolverError if the iteration produces non-finite values.
 */
SolveResult solve(const ConvexProblem &problem, const std::optional<CMat> &warm_point, const SolverSettings &settings,
                  const SolverState *warm_state = nullptr);

} // namespace irshp::convex
