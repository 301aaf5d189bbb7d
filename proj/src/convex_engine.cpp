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

#include "irshp/convex_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irshp::convex
{

// ------------------------------------------------------------------------
// Curvature

SeparableCurvature SeparableCurvature::none() { return {}; }

SeparableCurvature SeparableCurvature::hadamard(const RMat &weights)
{
    if (weights.rows() != weights.cols())
        throw std::invalid_argument("hadamard curvature: weights must be square");
    if ((weights.array() < 0.0).any())
        throw std::invalid_argument("hadamard curvature: weights must be nonnegative");
    return {CMat(), 0.5 * (weights + weights.transpose())};
}

SeparableCurvature SeparableCurvature::congruence(const CMat &B)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(B.adjoint() * B));
    RVec k = es.eigenvalues().cwiseMax(0.0);
    return {es.eigenvectors(), k * k.transpose()};
}

CMat SeparableCurvature::apply(const CMat &X) const
{
    if (zero())
        return CMat::Zero(X.rows(), X.cols());
    if (identity_basis())
        return weights.cast<cd>().cwiseProduct(X);
    CMat xh = basis.adjoint() * X * basis;
    return basis * weights.cast<cd>().cwiseProduct(xh) * basis.adjoint();
}

double SeparableCurvature::energy(const CMat &X) const
{
    if (zero())
        return 0.0;
    if (identity_basis())
        return (weights.array() * X.array().abs2()).sum();
    CMat xh = basis.adjoint() * X * basis;
    return (weights.array() * xh.array().abs2()).sum();
}

// ------------------------------------------------------------------------
// Affine sets

AffineConstraint AffineConstraint::unit_diagonal(int n)
{
    AffineConstraint c;
    c.kind = Kind::FixedEntries;
    c.n = n;
    c.mask = BoolMat::Zero(n, n);
    c.mask.diagonal().setConstant(true);
    c.values = CMat::Identity(n, n);
    return c;
}

AffineConstraint AffineConstraint::fixed_trace(int n, double t)
{
    AffineConstraint c;
    c.kind = Kind::FixedTrace;
    c.n = n;
    c.trace = t;
    return c;
}

AffineConstraint AffineConstraint::fixed_entries(BoolMat mask, CMat values)
{
    if (mask.rows() != mask.cols() || values.rows() != mask.rows() || values.cols() != mask.cols())
        throw std::invalid_argument("fixed_entries: mask and values must be square and equally sized");
    if (mask != mask.transpose())
        throw std::invalid_argument("fixed_entries: mask must be symmetric");
    AffineConstraint c;
    c.kind = Kind::FixedEntries;
    c.n = static_cast<int>(mask.rows());
    c.mask = std::move(mask);
    c.values = hermitian_part(values);
    return c;
}

bool AffineConstraint::is_unit_diagonal() const
{
    if (kind != Kind::FixedEntries)
        return false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (mask(i, j) != (i == j) || (i == j && values(i, i) != cd(1.0, 0.0)))
                return false;
    return true;
}

double AffineConstraint::violation(const CMat &X) const { return (X - project_affine(X, *this)).norm(); }

// ------------------------------------------------------------------------
// Projections

namespace
{

struct Spectrum
{
    RVec values;
    CMat vectors;
};

Spectrum spectrum(const CMat &hermitian)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian);
    if (es.info() != Eigen::Success)
        throw SolverError("eigendecomposition failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

CMat rebuild(const Spectrum &s, const RVec &values)
{
    // Only the nonzero part of the spectrum contributes.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values(i) > 0.0)
            keep.push_back(i);
    const Eigen::Index n = s.vectors.rows();
    if (keep.empty())
        return CMat::Zero(n, n);
    CMat v(n, static_cast<Eigen::Index>(keep.size()));
    RVec d(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k)
    {
        v.col(static_cast<Eigen::Index>(k)) = s.vectors.col(keep[k]);
        d(static_cast<Eigen::Index>(k)) = values(keep[k]);
    }
    CMat out = v * d.cast<cd>().asDiagonal() * v.adjoint();
    return hermitian_part(out);
}

CMat psd_clip(const CMat &hermitian, Spectrum *keep = nullptr)
{
    Spectrum s = spectrum(hermitian);
    CMat out = rebuild(s, s.values.cwiseMax(0.0));
    if (keep)
        *keep = std::move(s);
    return out;
}

// Euclidean projection of v onto {x >= 0, sum x = t}.
RVec simplex_projection(const RVec &v, double t)
{
    std::vector<double> u(v.data(), v.data() + v.size());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        cumulative += u[i];
        double candidate = (cumulative - t) / static_cast<double>(i + 1);
        if (u[i] - candidate > 0.0)
            theta = candidate;
    }
    return (v.array() - theta).cwiseMax(0.0);
}

} // namespace

CMat project_psd(const CMat &A)
{
    if (A.rows() != A.cols())
        throw std::invalid_argument("project_psd: matrix must be square");
    if (hermitian_defect(A) > 1e-10 * std::max(1.0, A.norm()))
        throw std::invalid_argument("project_psd: input is not Hermitian");
    return psd_clip(hermitian_part(A));
}

CMat project_affine(const CMat &A, const AffineConstraint &c)
{
    if (A.rows() != c.n || A.cols() != c.n)
        throw std::invalid_argument("project_affine: dimension mismatch");
    CMat out = A;
    if (c.kind == AffineConstraint::Kind::FixedTrace)
    {
        const cd shift = (c.trace - A.trace().real()) / static_cast<double>(c.n);
        out.diagonal().array() += shift;
        return out;
    }
    for (int j = 0; j < c.n; ++j)
        for (int i = 0; i < c.n; ++i)
            if (c.mask(i, j))
                out(i, j) = c.values(i, j);
    return out;
}

CMat project_psd_trace(const CMat &A, double t)
{
    if (t < 0.0)
        throw std::invalid_argument("project_psd_trace: trace must be >= 0");
    Spectrum s = spectrum(hermitian_part(A));
    return rebuild(s, simplex_projection(s.values, t));
}

CMat dykstra_project(const CMat &A, const AffineConstraint &c, int max_passes, double tol,
                     std::vector<double> *violations)
{
    CMat x = hermitian_part(A);
    CMat p = CMat::Zero(c.n, c.n);
    CMat q = CMat::Zero(c.n, c.n);
    CMat y = x;
    for (int pass = 0; pass < max_passes; ++pass)
    {
        y = psd_clip(x + p);
        p = x + p - y;
        CMat x_next = project_affine(y + q, c);
        q = y + q - x_next;
        x = std::move(x_next);
        const double v = c.violation(y);
        if (violations)
            violations->push_back(v);
        if (v <= tol * std::max(1.0, y.norm()))
            break;
    }
    return y;
}

// ------------------------------------------------------------------------
// Solver

const char *to_string(SolveStatus s)
{
    switch (s)
    {
    case SolveStatus::Converged:
        return "converged";
    case SolveStatus::MaxIterations:
        return "max_iters";
    case SolveStatus::Infeasible:
        return "infeasible";
    }
    return "?";
}

double ConvexProblem::value(const CMat &X) const
{
    return -0.5 * curvature.energy(X) + (linear * X).trace().real();
}

namespace
{

bool structurally_infeasible(const AffineConstraint &c)
{
    if (c.kind == AffineConstraint::Kind::FixedTrace)
        return c.trace < 0.0;
    for (int i = 0; i < c.n; ++i)
        if (c.mask(i, i) && c.values(i, i).real() < 0.0)
            return true;
    for (int i = 0; i < c.n; ++i)
        for (int j = i + 1; j < c.n; ++j)
            if (c.mask(i, j) && c.mask(i, i) && c.mask(j, j) &&
                std::norm(c.values(i, j)) > c.values(i, i).real() * c.values(j, j).real() * (1.0 + 1e-12))
                return true;
    return false;
}

// Maps a PSD matrix to an exactly feasible point where a cheap map exists.
CMat restore(const CMat &psd, const AffineConstraint &c)
{
    if (c.kind == AffineConstraint::Kind::FixedTrace)
        return project_psd_trace(psd, c.trace);
    if (c.is_unit_diagonal())
    {
        // D^{-1/2} Z D^{-1/2}; a zero row keeps PSD when its diagonal entry is set to 1.
        RVec scale(c.n);
        for (int i = 0; i < c.n; ++i)
        {
            double d = psd(i, i).real();
            scale(i) = d > 1e-300 ? 1.0 / std::sqrt(d) : 0.0;
        }
        CMat out = scale.cast<cd>().asDiagonal() * psd * scale.cast<cd>().asDiagonal();
        out = hermitian_part(out);
        out.diagonal().setOnes();
        return out;
    }
    return project_affine(psd, c);
}

} // namespace

CMat restore_feasible(const CMat &A, const AffineConstraint &c)
{
    if (A.rows() != c.n || A.cols() != c.n)
        throw std::invalid_argument("restore_feasible: dimension mismatch");
    if (c.kind == AffineConstraint::Kind::FixedTrace)
        return project_psd_trace(hermitian_part(A), c.trace);
    return restore(psd_clip(hermitian_part(A)), c);
}

namespace
{

double min_eig(const CMat &X)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(X), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace

SolveResult solve(const ConvexProblem &problem, const std::optional<CMat> &warm_point, const SolverSettings &settings,
                  const SolverState *warm_state)
{
    const AffineConstraint &con = problem.constraint;
    const int n = con.n;
    if (problem.linear.rows() != n || problem.linear.cols() != n)
        throw std::invalid_argument("solve: linear term has the wrong size");
    if (!problem.curvature.zero() && problem.curvature.weights.rows() != n)
        throw std::invalid_argument("solve: curvature has the wrong size");
    if (con.kind == AffineConstraint::Kind::FixedEntries && !problem.curvature.identity_basis())
        throw std::invalid_argument("solve: fixed-entry constraints need an identity curvature basis");
    if (settings.max_iters < 1 || !(settings.primal_tol > 0.0) || !(settings.feasibility_tol > 0.0))
        throw std::invalid_argument("solve: invalid solver settings");

    SolveResult result;
    if (structurally_infeasible(con))
    {
        result.status = SolveStatus::Infeasible;
        return result;
    }

    const SeparableCurvature &curv = problem.curvature;
    const bool rotate = !curv.identity_basis();
    const CMat G = hermitian_part(problem.linear).adjoint();
    const CMat G_hat = rotate ? CMat(curv.basis.adjoint() * G * curv.basis) : G;
    const RMat omega = curv.zero() ? RMat::Zero(n, n) : curv.weights;

    // Best exactly-feasible candidate.
    double best = -std::numeric_limits<double>::infinity();
    CMat best_point;
    auto offer = [&](const CMat &candidate) {
        double v = problem.value(candidate);
        if (!std::isfinite(v))
            return;
        if (v > best)
        {
            best = v;
            best_point = candidate;
        }
    };

    if (warm_point)
    {
        const CMat &w = *warm_point;
        const double scale = std::max(1.0, w.norm());
        if (w.rows() == n && w.cols() == n && con.violation(w) <= 1e-9 * scale && min_eig(w) >= -1e-9 * scale)
            offer(w);
    }

    double mean_weight = curv.zero() ? 0.0 : omega.mean();
    double rho0 = settings.rho * std::max({mean_weight, G.norm() / std::max(1, n), 1e-12});

    CMat Z, U;
    double rho = rho0;
    if (warm_state && warm_state->Z.rows() == n && warm_state->U.rows() == n && warm_state->rho > 0.0)
    {
        Z = warm_state->Z;
        U = warm_state->U;
        rho = warm_state->rho;
    }
    else
    {
        Z = warm_point && warm_point->rows() == n ? *warm_point : project_affine(CMat::Identity(n, n), con);
        Z = psd_clip(hermitian_part(Z));
        U = CMat::Zero(n, n);
    }

    const double alpha = settings.over_relaxation;
    CMat X(n, n);
    SolveStatus status = SolveStatus::MaxIterations;
    int it = 0;
    for (; it < settings.max_iters; ++it)
    {
        // X-step: maximize f(X) - rho/2 ||X - (Z - U)||^2 over the affine set, in closed form.
        CMat V = Z - U;
        if (con.kind == AffineConstraint::Kind::FixedTrace)
        {
            CMat V_hat = rotate ? CMat(curv.basis.adjoint() * V * curv.basis) : V;
            CMat num = G_hat + rho * V_hat;
            RMat denom = (omega.array() + rho).matrix();
            double sum_num = 0.0, sum_inv = 0.0;
            for (int i = 0; i < n; ++i)
            {
                sum_num += num(i, i).real() / denom(i, i);
                sum_inv += 1.0 / denom(i, i);
            }
            const double mu = (sum_num - con.trace) / sum_inv;
            num.diagonal().array() -= mu;
            CMat X_hat = num.cwiseQuotient(denom.cast<cd>());
            X = rotate ? CMat(curv.basis * X_hat * curv.basis.adjoint()) : X_hat;
        }
        else
        {
            X = (G + rho * V).cwiseQuotient((omega.array() + rho).matrix().cast<cd>());
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i)
                    if (con.mask(i, j))
                        X(i, j) = con.values(i, j);
        }
        X = hermitian_part(X);

        CMat X_relaxed = alpha * X + (1.0 - alpha) * Z;
        CMat Z_prev = Z;
        Z = psd_clip(X_relaxed + U);
        U += X_relaxed - Z;

        if (!Z.allFinite() || !U.allFinite())
            throw SolverError("splitting iteration diverged (non-finite iterate)");

        const double scale = std::max(1.0, Z.norm());
        const double primal = (X - Z).norm();
        const double step = (Z - Z_prev).norm();
        const bool done = primal <= settings.feasibility_tol * scale && step <= settings.primal_tol * scale;

        if (done || (it + 1) % settings.check_every == 0)
        {
            offer(restore(Z, con));
            if (done)
            {
                status = SolveStatus::Converged;
                ++it;
                break;
            }
            // Residual balancing on the scaled dual.
            const double dual = rho * step;
            if (primal > 10.0 * dual)
            {
                rho *= 2.0;
                U *= 0.5;
            }
            else if (dual > 10.0 * primal)
            {
                rho *= 0.5;
                U *= 2.0;
            }
        }
    }
    if (status != SolveStatus::Converged)
        offer(restore(Z, con));

    if (!std::isfinite(best))
        throw SolverError("solver produced no finite feasible candidate");

    result.solution = std::move(best_point);
    result.objective = best;
    result.status = status;
    result.iterations = it;
    result.violation = con.violation(result.solution);
    result.min_eigenvalue = min_eig(result.solution);
    result.state = {Z, U, rho};
    return result;
}

} // namespace irshp::convex
