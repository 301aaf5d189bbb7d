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

#include "irshp/hybrid_decomp.hpp"

#include <cmath>
#include <limits>

namespace irshp
{

namespace
{

bool has_full_column_rank(const CMat &A)
{
    const RVec s = Eigen::JacobiSVD<CMat>(A).singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 && s(0) / smin <= 1e10;
}

} // namespace

CMat digital_update(const CMat &F_RF, const CMat &F)
{
    if (F_RF.rows() != F.rows())
        throw std::invalid_argument("digital_update: row mismatch");
    if (F_RF.cols() > F_RF.rows())
        throw RankDeficientError("digital_update: more RF chains than antennas");
    Eigen::JacobiSVD<CMat> svd(F_RF, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVec &s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0) || s(0) / smin > 1e10)
        throw RankDeficientError("digital_update: analog precoder is rank deficient");
    return svd.solve(F);
}

std::pair<double, CMat> normalize_beta(const CMat &F_RF, const CMat &F_BB_unnorm)
{
    const double p = (F_RF * F_BB_unnorm).squaredNorm();
    if (!(p > 0.0) || !std::isfinite(p))
        throw std::invalid_argument("normalize_beta: zero-power digital precoder");
    const double beta = std::sqrt(2.0 / p);
    return {beta, beta * F_BB_unnorm};
}

double analog_objective(const CMat &F_RF, const CMat &F_BB_unnorm, const CMat &F)
{
    CMat prod = F_RF * F_BB_unnorm;
    return prod.squaredNorm() - 2.0 * (prod.adjoint() * F).trace().real();
}

CMat analog_coordinate_update(const CMat &F_RF, const CMat &F_BB_unnorm, const CMat &F)
{
    if (F_BB_unnorm.rows() != F_RF.cols() || F.rows() != F_RF.rows() || F.cols() != F_BB_unnorm.cols())
        throw std::invalid_argument("analog_coordinate_update: dimension mismatch");
    const CMat P = F_BB_unnorm * F_BB_unnorm.adjoint();
    const CMat target = F * F_BB_unnorm.adjoint(); // M x N_RF
    CMat x = F_RF;
    CMat T = x * P; // kept in sync with x

    for (Eigen::Index m = 0; m < x.rows(); ++m)
        for (Eigen::Index n = 0; n < x.cols(); ++n)
        {
            // Objective in x_mn alone: 2 Re(conj(c) x_mn) + const.
            const cd c = T(m, n) - x(m, n) * P(n, n) - target(m, n);
            const double r = std::abs(c);
            if (r < 1e-14)
                continue;
            const cd updated = -c / r;
            const cd delta = updated - x(m, n);
            x(m, n) = updated;
            T.row(m) += delta * P.row(n);
        }
    return x;
}

CMat LiftedAnalog::lift(const CMat &F_RF) const
{
    if (F_RF.rows() != m || F_RF.cols() != n_rf)
        throw std::invalid_argument("LiftedAnalog::lift: dimension mismatch");
    const CMat fb = F_RF / std::sqrt(static_cast<double>(m));
    CMat X(n_rf + m, n_rf + m);
    X.topLeftCorner(n_rf, n_rf) = fb.adjoint() * fb;
    X.topRightCorner(n_rf, m) = fb.adjoint();
    X.bottomLeftCorner(m, n_rf) = fb;
    X.bottomRightCorner(m, m).setIdentity();
    return X;
}

LiftedAnalog build_lift(const CMat &F_BB_unnorm, const CMat &F, int M_antennas)
{
    if (F.rows() != M_antennas || F.cols() != F_BB_unnorm.cols() || M_antennas < 1)
        throw std::invalid_argument("build_lift: dimension mismatch");
    LiftedAnalog L;
    L.n_rf = static_cast<int>(F_BB_unnorm.rows());
    L.m = M_antennas;
    L.F_BB_unnorm = F_BB_unnorm;
    L.F = F;
    const double s = 1.0 / std::sqrt(static_cast<double>(M_antennas));
    const int N = L.n_rf + L.m;
    L.M_mat = CMat::Zero(N, N);
    L.M_mat.topLeftCorner(L.n_rf, L.n_rf) = F_BB_unnorm * F_BB_unnorm.adjoint();
    L.M_mat.topRightCorner(L.n_rf, L.m) = -s * F_BB_unnorm * F.adjoint();
    L.M_mat.bottomLeftCorner(L.m, L.n_rf) = -s * F * F_BB_unnorm.adjoint();
    // Already Hermitian; symmetrizing only removes rounding.
    L.M_mat = hermitian_part(L.M_mat);
    return L;
}

namespace
{

CMat random_phases(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    Rng rng(seed);
    CMat x(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            x(i, j) = rng.random_phase();
    return x;
}

CMat refine(CMat F_RF, const CMat &B, const CMat &F, int sweeps)
{
    double obj = analog_objective(F_RF, B, F);
    for (int s = 0; s < sweeps; ++s)
    {
        F_RF = analog_coordinate_update(F_RF, B, F);
        double next = analog_objective(F_RF, B, F);
        if (obj - next <= 1e-12 * std::max(1.0, std::abs(obj)))
            break;
        obj = next;
    }
    return F_RF;
}

CMat unit_phases(const CMat &a)
{
    CMat out(a.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
        {
            double r = std::abs(a(i, j));
            out(i, j) = r > 0.0 ? a(i, j) / r : cd(1.0, 0.0);
        }
    return out;
}

} // namespace

CMat solve_sdr_analog(const LiftedAnalog &lift, const SdrSettings &settings)
{
    const int n_rf = lift.n_rf;
    const int m = lift.m;
    const int N = n_rf + m;

    convex::BoolMat mask = convex::BoolMat::Zero(N, N);
    mask.diagonal().setConstant(true);
    mask.bottomRightCorner(m, m).setConstant(true);
    CMat values = CMat::Identity(N, N);

    convex::ConvexProblem p;
    p.curvature = convex::SeparableCurvature::none();
    p.linear = -lift.M_mat; // minimize Tr(M X)
    p.constraint = convex::AffineConstraint::fixed_entries(mask, values);

    CMat F_RF;
    try
    {
        auto r = convex::solve(p, std::nullopt, settings.solver);
        if (r.status == convex::SolveStatus::Infeasible)
            throw convex::SolverError("lifted analog problem reported infeasible");
        // X_rq = Fb; unit-modulus phases of Fb are the phases of F_RF.
        F_RF = unit_phases(r.solution.bottomLeftCorner(m, n_rf));
    }
    catch (const convex::SolverError &)
    {
        F_RF = random_phases(m, n_rf, settings.fallback_seed);
    }
    return refine(std::move(F_RF), lift.F_BB_unnorm, lift.F, settings.refine_sweeps);
}

SecondResult run_second_subproblem(const CMat &F, const SecondSettings &settings)
{
    const Eigen::Index m = F.rows();
    const int n_rf = settings.n_rf;
    if (n_rf < 1 || n_rf > m)
        throw std::invalid_argument("run_second_subproblem: need 1 <= N_RF <= M");
    if (std::abs(F.squaredNorm() - 2.0) > 1e-8)
        throw std::invalid_argument("run_second_subproblem: ||F||_F^2 must equal 2");
    if (settings.max_iters < 1 || !(settings.rel_tol > 0.0))
        throw std::invalid_argument("run_second_subproblem: invalid settings");

    CMat F_RF;
    if (settings.F_RF_init)
    {
        F_RF = unit_phases(*settings.F_RF_init);
        if (F_RF.rows() != m || F_RF.cols() != n_rf)
            throw std::invalid_argument("run_second_subproblem: F_RF_init has the wrong shape");
    }
    else
    {
        F_RF = random_phases(m, n_rf, settings.seed);
        const Eigen::Index k = std::min<Eigen::Index>(n_rf, F.cols());
        const CMat fallback = F_RF;
        F_RF.leftCols(k) = unit_phases(F.leftCols(k));
        // Target columns with parallel phase patterns give a singular start; keep only the first.
        if (!has_full_column_rank(F_RF))
            F_RF.rightCols(n_rf - 1) = fallback.rightCols(n_rf - 1);
    }

    SecondResult out;
    SecondReport &rep = out.report;
    const double fnorm = F.norm();

    CMat B = digital_update(F_RF, F);
    if (settings.sdr_init)
    {
        CMat sdr = solve_sdr_analog(build_lift(B, F, static_cast<int>(m)), settings.sdr);
        try
        {
            CMat B_sdr = digital_update(sdr, F);
            if ((F - sdr * B_sdr).norm() <= (F - F_RF * B).norm())
            {
                F_RF = std::move(sdr);
                B = std::move(B_sdr);
            }
        }
        catch (const RankDeficientError &)
        {
        }
    }

    double residual = (F - F_RF * B).norm() / fnorm;
    rep.residual_trace.push_back(residual);
    for (int it = 1; it <= settings.max_iters; ++it)
    {
        CMat F_RF_next = analog_coordinate_update(F_RF, B, F);
        CMat B_next;
        try
        {
            B_next = digital_update(F_RF_next, F);
        }
        catch (const RankDeficientError &)
        {
            rep.stagnated = true;
            break;
        }
        const double next = (F - F_RF_next * B_next).norm() / fnorm;
        F_RF = std::move(F_RF_next);
        B = std::move(B_next);
        rep.iterations = it;
        rep.residual_trace.push_back(next);
        const double change = std::abs(residual - next) / std::max(residual, std::numeric_limits<double>::min());
        residual = next;
        if (change < settings.rel_tol || residual < 1e-14)
            break;
    }

    auto [beta, F_BB] = normalize_beta(F_RF, B);
    rep.residual = residual;
    rep.beta = beta;
    rep.unit_modulus_violation = (F_RF.array().abs() - 1.0).abs().maxCoeff();
    out.precoders = {F, std::move(F_RF), std::move(F_BB), beta};
    return out;
}

} // namespace irshp
