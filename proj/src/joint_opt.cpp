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

#include "irshp/joint_opt.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace irshp
{

namespace
{

void require_square(const CMat &m, Eigen::Index n, const char *what)
{
    if (m.rows() != n || m.cols() != n)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double top_sum(const CMat &X, int k)
{
    EigenPairs e = eig_desc(hermitian_part(X));
    double s = 0.0;
    for (int i = 0; i < k && i < e.values.size(); ++i)
        s += e.values(i);
    return s;
}

} // namespace

CMat lift_A(const CMat &Q, const CMat &H_I_tilde)
{
    require_square(Q, H_I_tilde.rows(), "lift_A");
    require_square(H_I_tilde, Q.rows(), "lift_A");
    return H_I_tilde.cwiseProduct(Q);
}

CMat lift_B(const CMat &W, const CMat &H_B)
{
    require_square(W, H_B.cols(), "lift_B");
    return H_B * W * H_B.adjoint();
}

double objective_Y2(const CMat &Q, const CMat &W, const ChannelSet &channels)
{
    // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
    CMat A = lift_A(Q, channels.H_I_tilde);
    CMat B = lift_B(W, channels.H_B);
    return (A.array() * B.transpose().array()).sum().real();
}

IaTerms ia_split(const CMat &A, const CMat &B)
{
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols())
        throw std::invalid_argument("ia_split: dimension mismatch");
    if (!is_hermitian(A) || !is_hermitian(B))
        throw std::invalid_argument("ia_split: inputs must be Hermitian");
    return {-0.5 * A.squaredNorm(), -0.5 * B.squaredNorm(), 0.5 * (A + B).squaredNorm()};
}

double s1_value(const CMat &Q, const CMat &W, const ChannelSet &channels)
{
    return 0.5 * (lift_A(Q, channels.H_I_tilde) + lift_B(W, channels.H_B)).squaredNorm();
}

double Surrogate::value(const CMat &Q, const CMat &W) const
{
    return constant + (script_A * (Q - Qi)).trace().real() + (script_B * (W - Wi)).trace().real();
}

Surrogate mm_surrogate(const CMat &Qi, const CMat &Wi, const ChannelSet &channels)
{
    const CMat &Ht = channels.H_I_tilde;
    CMat C = lift_A(Qi, Ht) + lift_B(Wi, channels.H_B);
    Surrogate s;
    s.script_A = hermitian_part(C.cwiseProduct(Ht.conjugate()));
    s.script_B = hermitian_part(channels.H_B.adjoint() * C * channels.H_B);
    s.constant = 0.5 * C.squaredNorm();
    s.Qi = Qi;
    s.Wi = Wi;
    return s;
}

double surrogate_Y2(const Surrogate &s, const CMat &Q, const CMat &W, const ChannelSet &channels)
{
    return -0.5 * lift_A(Q, channels.H_I_tilde).squaredNorm() - 0.5 * lift_B(W, channels.H_B).squaredNorm() +
           s.value(Q, W);
}

double penalty_g1(const CMat &Q, const CMat &Qi)
{
    require_square(Q, Qi.rows(), "penalty_g1");
    EigenPairs e = eig_desc(hermitian_part(Qi));
    CVec u = e.vectors.col(0);
    double lin = (u.adjoint() * (Q - Qi) * u)(0, 0).real();
    return Q.trace().real() - e.values(0) - lin;
}

double penalty_g2(const CMat &W, const CMat &Wi)
{
    require_square(W, Wi.rows(), "penalty_g2");
    EigenPairs e = eig_desc(hermitian_part(Wi));
    const int k = std::min<int>(2, static_cast<int>(e.values.size()));
    CMat U = e.vectors.leftCols(k);
    double lin = (U.adjoint() * (W - Wi) * U).trace().real();
    return W.trace().real() - e.values.head(k).sum() - lin;
}

double rank1_gap(const CMat &Q) { return Q.trace().real() - top_sum(Q, 1); }

double rank2_gap(const CMat &W) { return W.trace().real() - top_sum(W, 2); }

double penalized_objective(const CMat &Q, const CMat &W, const ChannelSet &channels, double inv_eta)
{
    double y = objective_Y2(Q, W, channels);
    if (inv_eta == 0.0)
        return y;
    return y - inv_eta * (rank1_gap(Q) + rank2_gap(W));
}

// ------------------------------------------------------------------------

LiftedVars solve_p5_iteration(MMState &state, const ChannelSet &channels, const JointSettings &settings)
{
    const CMat &Qi = state.vars.Q;
    const CMat &Wi = state.vars.W;
    const int n = channels.n_elements();
    const int m = channels.M();
    require_square(Qi, n, "solve_p5_iteration: Q");
    require_square(Wi, m, "solve_p5_iteration: W");

    Surrogate s = mm_surrogate(Qi, Wi, channels);
    const double w = settings.relaxed ? 0.0 : state.inv_eta;

    LiftedVars next;
    int inner = 0;

    {
        convex::ConvexProblem p;
        p.curvature = convex::SeparableCurvature::hadamard(channels.H_I_tilde.cwiseAbs2());
        p.linear = s.script_A;
        if (w > 0.0)
        {
            CVec u = eig_desc(hermitian_part(Qi)).vectors.col(0);
            p.linear += w * (u * u.adjoint());
        }
        p.constraint = convex::AffineConstraint::unit_diagonal(n);
        auto r = convex::solve(p, Qi, settings.inner, state.q_state.Z.size() ? &state.q_state : nullptr);
        next.Q = std::move(r.solution);
        state.q_state = std::move(r.state);
        inner += r.iterations;
    }

    if (settings.fixed_W)
    {
        next.W = Wi;
    }
    else
    {
        if (settings.gauss_seidel)
            s = mm_surrogate(next.Q, Wi, channels);
        convex::ConvexProblem p;
        p.curvature = convex::SeparableCurvature::congruence(channels.H_B);
        p.linear = s.script_B;
        if (w > 0.0)
        {
            CMat U = eig_desc(hermitian_part(Wi)).vectors.leftCols(std::min(2, m));
            p.linear += w * (U * U.adjoint());
        }
        p.constraint = convex::AffineConstraint::fixed_trace(m, 2.0);
        auto r = convex::solve(p, Wi, settings.inner, state.w_state.Z.size() ? &state.w_state : nullptr);
        next.W = std::move(r.solution);
        state.w_state = std::move(r.state);
        inner += r.iterations;
    }

    state.surrogate.push_back(surrogate_Y2(s, next.Q, next.W, channels));
    state.inner_iterations.push_back(inner);
    state.violation_q.push_back((next.Q.diagonal().array() - 1.0).abs().maxCoeff());
    state.violation_w.push_back(std::abs(next.W.trace().real() - 2.0));
    return next;
}

namespace
{

ChannelSet scaled_copy(const ChannelSet &c, double a, double b)
{
    // H_I_tilde -> a H_I_tilde, H_B -> b H_B.
    ChannelSet s;
    const double sa = std::sqrt(a);
    s.H_I1 = c.H_I1 * sa;
    s.H_I2 = c.H_I2 * sa;
    s.H_I = c.H_I * sa;
    s.H_I_tilde = c.H_I_tilde * a;
    s.H_B1 = c.H_B1 * b;
    s.H_B2 = c.H_B2 * b;
    s.H_B = c.H_B * b;
    return s;
}

struct LoopOutcome
{
    bool converged = false;
    int iterations = 0;
};

// Outer MM loop on pre-scaled channels, appending to the histories in `st`.
LoopOutcome outer_loop(MMState &st, const ChannelSet &scaled, const JointSettings &settings)
{
    const int n = scaled.n_elements();
    const int m = scaled.M();
    const bool fixed_w = settings.fixed_W.has_value();
    const double penalty_tol = settings.rank_tol * (n + 2);
    auto gap_w = [&](const CMat &W) { return fixed_w ? 0.0 : rank2_gap(W); };
    auto penalized = [&](const LiftedVars &v, double w) {
        double y = objective_Y2(v.Q, v.W, scaled);
        return w == 0.0 ? y : y - w * (rank1_gap(v.Q) + gap_w(v.W));
    };

    LoopOutcome outcome;
    double y = objective_Y2(st.vars.Q, st.vars.W, scaled);
    st.beta = settings.extrapolation;
    for (int it = 1; it <= settings.max_outer; ++it)
    {
        const double w = settings.relaxed ? 0.0 : st.inv_eta;
        const double f_prev = penalized(st.vars, w);

        // Tr(AB) = Tr((cA)(B/c)): any c > 0 gives a valid minorizer. Balancing ||cA|| = ||B/c||
        // at the current iterate keeps both block steps comparable as the iterates grow.
        ChannelSet split = scaled;
        if (settings.rebalance)
        {
            double na = lift_A(st.vars.Q, scaled.H_I_tilde).norm();
            double nb = lift_B(st.vars.W, scaled.H_B).norm();
            if (na > 0.0 && nb > 0.0 && std::isfinite(na) && std::isfinite(nb))
            {
                const double c = std::sqrt(nb / na);
                split = scaled_copy(scaled, c, 1.0 / std::sqrt(c));
            }
        }
        LiftedVars next = solve_p5_iteration(st, split, settings);

        // Safeguarded extrapolation along the last step; kept only if it improves.
        if (settings.extrapolation > 0.0 && it > 1)
        {
            LiftedVars ext;
            ext.Q = convex::restore_feasible(next.Q + st.beta * (next.Q - st.vars.Q),
                                             convex::AffineConstraint::unit_diagonal(n));
            ext.W = fixed_w ? next.W
                            : convex::restore_feasible(next.W + st.beta * (next.W - st.vars.W),
                                                       convex::AffineConstraint::fixed_trace(m, 2.0));
            if (penalized(ext, w) > penalized(next, w))
            {
                next = std::move(ext);
                st.beta = std::min(2.0 * st.beta, 8.0);
            }
            else
                st.beta = settings.extrapolation;
        }

        const double g1 = rank1_gap(next.Q);
        const double g2 = gap_w(next.W);
        const double y_next = objective_Y2(next.Q, next.W, scaled);
        st.g1.push_back(g1);
        st.g2.push_back(g2);
        st.inv_eta_used.push_back(w);
        st.penalized_prev.push_back(f_prev);
        st.penalized_new.push_back(w == 0.0 ? y_next : y_next - w * (g1 + g2));
        st.frozen.push_back(st.eta_frozen || settings.relaxed);
        st.objective.push_back(y_next);

        const double y_prev = y;
        y = y_next;
        st.vars = std::move(next);
        ++st.iteration;
        outcome.iterations = it;

        const bool penalty_ok = settings.relaxed || g1 + g2 < penalty_tol;
        if (!settings.relaxed && !st.eta_frozen)
        {
            if (penalty_ok)
                st.eta_frozen = true;
            else
                st.inv_eta /= settings.eta_decay;
        }

        const double rel = std::abs(y - y_prev) / std::max(std::abs(y), std::numeric_limits<double>::min());
        if (rel < settings.rel_tol && penalty_ok)
        {
            outcome.converged = true;
            break;
        }
    }
    return outcome;
}

} // namespace

FirstResult run_first_subproblem(const ChannelSet &channels, const JointSettings &settings)
{
    const int n = channels.n_elements();
    const int m = channels.M();
    if (settings.max_outer < 1 || !(settings.rel_tol > 0.0) || !(settings.rank_tol > 0.0))
        throw std::invalid_argument("run_first_subproblem: invalid settings");
    if (!(settings.eta_decay > 0.0 && settings.eta_decay < 1.0))
        throw std::invalid_argument("run_first_subproblem: eta_decay must lie in (0, 1)");
    if (settings.extrapolation < 0.0)
        throw std::invalid_argument("run_first_subproblem: extrapolation must be >= 0");

    FirstResult out;
    MMState &st = out.state;

    if (settings.warm_start)
    {
        st.vars = *settings.warm_start;
        require_square(st.vars.Q, n, "run_first_subproblem: warm Q");
        require_square(st.vars.W, m, "run_first_subproblem: warm W");
    }
    else
    {
        st.vars.Q = CMat::Ones(n, n);
        st.vars.W = CMat::Identity(m, m) * (2.0 / m);
    }
    if (settings.fixed_W)
    {
        require_square(*settings.fixed_W, m, "run_first_subproblem: fixed W");
        st.vars.W = *settings.fixed_W;
    }

    // Rescale both blocks to unit norm at the start point.
    double a = 1.0, b = 1.0;
    if (settings.normalize)
    {
        double na = lift_A(st.vars.Q, channels.H_I_tilde).norm();
        double nb = lift_B(st.vars.W, channels.H_B).norm();
        if (na > 0.0 && std::isfinite(na))
            a = 1.0 / na;
        if (nb > 0.0 && std::isfinite(nb))
            b = 1.0 / std::sqrt(nb);
    }
    const ChannelSet scaled = scaled_copy(channels, a, b);
    const double unscale = 1.0 / (a * b * b);
    out.report.channel_scale = unscale;

    st.objective.push_back(objective_Y2(st.vars.Q, st.vars.W, scaled));

    LoopOutcome last;
    if (settings.relaxed)
    {
        last = outer_loop(st, scaled, settings);
        out.warmup_vars = st.vars;
    }
    else
    {
        out.warmup_vars = st.vars;
        if (settings.relaxed_warmup)
        {
            JointSettings warm = settings;
            warm.relaxed = true;
            LoopOutcome w = outer_loop(st, scaled, warm);
            out.report.warmup_iterations = w.iterations;
            out.warmup_vars = st.vars;
            if (!w.converged)
                out.report.notes.push_back("relaxed warm-up hit the iteration cap");
        }
        const double g0 = rank1_gap(st.vars.Q) + (settings.fixed_W ? 0.0 : rank2_gap(st.vars.W));
        const double y0 = objective_Y2(st.vars.Q, st.vars.W, scaled);
        st.inv_eta = settings.eta_init_fraction * std::abs(y0) / std::max(g0, 1.0);
        st.eta_frozen = false;
        last = outer_loop(st, scaled, settings);
    }
    out.report.converged = last.converged;
    if (!last.converged)
        out.report.notes.push_back("outer loop hit the iteration cap");

    // Histories back to unscaled channel units.
    for (auto *h : {&st.objective, &st.surrogate, &st.penalized_prev, &st.penalized_new, &st.inv_eta_used})
        for (double &v : *h)
            v *= unscale;
    st.inv_eta *= unscale;

    out.report.outer_iterations = st.iteration;
    out.report.rank_residual_q = rank1_gap(st.vars.Q) / st.vars.Q.trace().real();
    out.report.rank_residual_w = rank2_gap(st.vars.W) / st.vars.W.trace().real();
    out.vars = st.vars;
    return out;
}

// ------------------------------------------------------------------------

PhaseConfig extract_phases(const CMat &Q, const ChannelSet &channels, const CMat &F)
{
    require_square(Q, channels.n_elements(), "extract_phases");
    CVec u = eig_desc(hermitian_part(Q)).vectors.col(0);
    CVec phi(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i)
    {
        double r = std::abs(u(i));
        phi(i) = r > 0.0 ? u(i) / r : cd(1.0, 0.0);
    }
    PhaseConfig a(phi, channels.r1());
    PhaseConfig b(phi.conjugate(), channels.r1());
    return channel_gain(channels, a, F) >= channel_gain(channels, b, F) ? a : b;
}

CMat extract_precoder(const CMat &W)
{
    if (W.rows() != W.cols() || W.rows() < 1)
        throw std::invalid_argument("extract_precoder: W must be square");
    const Eigen::Index m = W.rows();
    EigenPairs e = eig_desc(hermitian_part(W));
    CMat F = CMat::Zero(m, 2);
    for (int j = 0; j < 2 && j < m; ++j)
        F.col(j) = std::sqrt(std::max(e.values(j), 0.0)) * e.vectors.col(j);
    double p = F.squaredNorm();
    if (p <= 0.0)
    {
        F(0, 0) = std::sqrt(2.0);
        return F;
    }
    return F * std::sqrt(2.0 / p);
}

void write_trace_csv(std::ostream &out, const MMState &st)
{
    out << "iteration,objective,surrogate,g1,g2,inv_eta,violation_q,violation_w,inner_iterations\n";
    char line[512];
    std::snprintf(line, sizeof line, "0,%.17g,,,,,,,\n", st.objective.empty() ? 0.0 : st.objective[0]);
    out << line;
    for (std::size_t i = 0; i < st.g1.size(); ++i)
    {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", i + 1,
                      st.objective[i + 1], st.surrogate[i], st.g1[i], st.g2[i], st.inv_eta_used[i], st.violation_q[i],
                      st.violation_w[i], st.inner_iterations[i]);
        out << line;
    }
}

} // namespace irshp
