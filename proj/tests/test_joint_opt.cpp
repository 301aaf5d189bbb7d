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


#include "test_support.hpp"

#include <sstream>

using namespace irshp;
using namespace irshp::testing;

namespace
{

CMat lift_of(const CVec &x) { return x.conjugate() * x.transpose(); } // (x x^H)^T

double re_tr(const CMat &a, const CMat &b) { return (a * b).trace().real(); }

LiftedVars random_feasible(int n, int m, Rng &rng)
{
    CMat Q = convex::restore_feasible(random_psd(n, 3, rng), convex::AffineConstraint::unit_diagonal(n));
    CMat W = random_psd(m, 3, rng);
    W *= 2.0 / W.trace().real();
    return {Q, W};
}

} // namespace

TEST_CASE("lift_A elementwise cases")
{
    Rng rng(1);
    CMat H = random_psd(4, 2, rng);
    CHECK((lift_A(CMat::Ones(4, 4), H) - H).norm() == 0.0);
    CMat Q = convex::restore_feasible(random_psd(4, 2, rng), convex::AffineConstraint::unit_diagonal(4));
    CHECK((lift_A(Q, CMat::Identity(4, 4)) - CMat::Identity(4, 4)).norm() < 1e-14);
    CHECK_THROWS(lift_A(CMat::Ones(3, 3), H));
}

TEST_CASE("lift identity: diag(x)^H H diag(x) = H .* (x x^H)^T")
{
    Rng rng(2);
    for (int t = 0; t < 50; ++t)
    {
        CMat H = random_psd(6, 2, rng);
        CVec x = random_unit_modulus(6, rng);
        CMat direct = x.asDiagonal().toDenseMatrix().adjoint() * H * x.asDiagonal();
        CMat lifted = lift_A(lift_of(x), H);
        CHECK((direct - lifted).cwiseAbs().maxCoeff() < 1e-12);
        // The untransposed outer product is the wrong convention for generic x.
        if (t == 0)
            CHECK((direct - lift_A(x * x.adjoint(), H)).cwiseAbs().maxCoeff() > 1e-3);
    }
}

TEST_CASE("lift_B cases")
{
    Rng rng(3);
    CMat HB = random_matrix(6, 4, rng);
    CHECK(lift_B(CMat::Zero(4, 4), HB).norm() == 0.0);
    CMat F = random_precoder(4, rng);
    CMat HF = HB * F;
    CHECK((lift_B(F * F.adjoint(), HB) - HF * HF.adjoint()).norm() < 1e-12 * HF.squaredNorm());
    CHECK(is_psd(lift_B(random_psd(4, 2, rng), HB)));
}

TEST_CASE("objective_Y2 reproduces the Frobenius gain for rank-one lifts")
{
    ChannelSet ch = table1_channels(4);
    Rng rng(4);
    CHECK(objective_Y2(lift_of(random_unit_modulus(50, rng)), CMat::Zero(10, 10), ch) == 0.0);
    for (int t = 0; t < 10; ++t)
    {
        CVec x = random_unit_modulus(50, rng);
        CMat F = random_precoder(10, rng);
        const double gain = channel_gain(ch, PhaseConfig(x, 25), F);
        CHECK(std::abs(objective_Y2(lift_of(x), F * F.adjoint(), ch) - gain) <= 1e-8 * gain);
        CHECK(objective_Y2(random_psd(50, 3, rng), random_psd(10, 2, rng), ch) >= 0.0);
    }
}

TEST_CASE("inner-approximation split")
{
    IaTerms t = ia_split(CMat::Identity(2, 2), CMat::Identity(2, 2));
    CHECK(t.minus_half_a == doctest::Approx(-1.0));
    CHECK(t.minus_half_b == doctest::Approx(-1.0));
    CHECK(t.half_sum == doctest::Approx(4.0));
    CHECK(t.total() == doctest::Approx(2.0));
    Rng rng(5);
    CHECK(std::abs(ia_split(random_hermitian(4, rng), CMat::Zero(4, 4)).total()) < 1e-14);
    for (int i = 0; i < 100; ++i)
    {
        CMat A = random_hermitian(8, rng), B = random_hermitian(8, rng);
        A /= A.norm();
        B /= B.norm();
        CHECK(std::abs(ia_split(A, B).total() - re_tr(A, B)) < 1e-12);
    }
    CHECK_THROWS(ia_split(random_matrix(3, 3, rng), random_hermitian(3, rng)));
    CHECK_THROWS(ia_split(random_hermitian(3, rng), random_hermitian(4, rng)));
}

TEST_CASE("MM surrogate: tangency, minorization and exact gradients")
{
    SystemConfig cfg = tiny_config(4, 3, 3);
    Rng rng(6);
    ChannelSet ch = assemble(cfg, random_matrix(3, 4, rng), random_matrix(3, 4, rng), random_matrix(2, 3, rng),
                             random_matrix(2, 3, rng));
    LiftedVars v = random_feasible(6, 4, rng);
    Surrogate s = mm_surrogate(v.Q, v.W, ch);
    CHECK(s.value(v.Q, v.W) == doctest::Approx(s1_value(v.Q, v.W, ch)).epsilon(1e-14));
    CHECK(is_hermitian(s.script_A));
    CHECK(is_hermitian(s.script_B));
    CHECK(surrogate_Y2(s, v.Q, v.W, ch) == doctest::Approx(objective_Y2(v.Q, v.W, ch)).epsilon(1e-12));

    for (int i = 0; i < 100; ++i)
    {
        CMat dQ = random_hermitian(6, rng), dW = random_hermitian(4, rng);
        const double scale = rng.uniform(0.01, 3.0);
        CMat Q = v.Q + scale * dQ, W = v.W + scale * dW;
        CHECK(s.value(Q, W) <= s1_value(Q, W, ch) + 1e-9 * (1.0 + s1_value(Q, W, ch)));

        const double h = 1e-5;
        const double fd = (s1_value(v.Q + h * dQ, v.W + h * dW, ch) - s1_value(v.Q - h * dQ, v.W - h * dW, ch)) / (2 * h);
        const double an = re_tr(s.script_A, dQ) + re_tr(s.script_B, dW);
        CHECK(std::abs(fd - an) <= 1e-4 * std::max(std::abs(an), 1e-12));
    }
}

TEST_CASE("rank-one penalty")
{
    Rng rng(7);
    CVec x = random_unit_modulus(6, rng);
    CMat Qi = x * x.adjoint();
    CHECK(std::abs(penalty_g1(Qi, Qi)) < 1e-12);
    CHECK(penalty_g1(CMat::Identity(2, 2), CMat::Identity(2, 2)) == doctest::Approx(1.0));
    for (int i = 0; i < 100; ++i)
    {
        CMat Qa = random_psd(6, 3, rng), Q = random_psd(6, 1 + i % 4, rng);
        CHECK(penalty_g1(Q, Qa) >= rank1_gap(Q) - 1e-9);
        CHECK(penalty_g1(Qa, Qa) == doctest::Approx(rank1_gap(Qa)).epsilon(1e-10));
    }
}

TEST_CASE("rank-two penalty")
{
    Rng rng(8);
    CMat W2 = random_psd(5, 2, rng);
    CHECK(std::abs(penalty_g2(W2, W2)) < 1e-12 * W2.trace().real());
    CMat W3 = (2.0 / 3.0) * CMat::Identity(3, 3);
    CHECK(penalty_g2(W3, W3) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (int i = 0; i < 100; ++i)
    {
        CMat Wa = random_psd(5, 4, rng), W = random_psd(5, 1 + i % 5, rng);
        CHECK(penalty_g2(W, Wa) >= rank2_gap(W) - 1e-9);
    }
}

TEST_CASE("one MM step: ascent and feasibility")
{
    ChannelSet ch = table1_channels(9);
    Rng rng(9);
    for (bool gs : {false, true})
    {
        MMState st;
        st.vars = random_feasible(50, 10, rng);
        JointSettings js;
        js.relaxed = true;
        js.gauss_seidel = gs;
        Surrogate s = mm_surrogate(st.vars.Q, st.vars.W, ch);
        const double y0 = objective_Y2(st.vars.Q, st.vars.W, ch);
        LiftedVars next = solve_p5_iteration(st, ch, js);
        if (!gs)
            CHECK(surrogate_Y2(s, next.Q, next.W, ch) >= surrogate_Y2(s, st.vars.Q, st.vars.W, ch) - 1e-6 * y0);
        CHECK(objective_Y2(next.Q, next.W, ch) >= y0 - 1e-6 * y0);
        CHECK((next.Q.diagonal().array() - 1.0).abs().maxCoeff() < 1e-6);
        CHECK(std::abs(next.W.trace().real() - 2.0) < 1e-6);
        CHECK(is_psd(next.Q));
        CHECK(is_psd(next.W));
        CHECK(st.surrogate.size() == 1);
    }
}

TEST_CASE("unit channels: the relaxed step keeps the constant optimum")
{
    SystemConfig cfg = tiny_config(2, 1, 1);
    CMat e1 = CMat::Zero(1, 2), e2 = CMat::Zero(1, 2);
    e1(0, 0) = 1.0;
    e2(0, 1) = 1.0;
    CMat c1 = CMat::Zero(2, 1), c2 = CMat::Zero(2, 1);
    c1(0, 0) = 1.0;
    c2(1, 0) = 1.0;
    ChannelSet ch = assemble(cfg, e1, e2, c1, c2); // H_B = I, H_I_tilde = I
    MMState st;
    st.vars = {CMat::Ones(2, 2), CMat::Identity(2, 2)};
    JointSettings js;
    js.relaxed = true;
    LiftedVars next = solve_p5_iteration(st, ch, js);
    // Tr((I .* Q) W) = Tr(W) = 2 for every feasible pair; a phase grid finds the same value.
    double grid = 0.0;
    for (int k = 0; k < 64; ++k)
    {
        CVec x(2);
        x << 1.0, std::polar(1.0, 2 * kPi * k / 64);
        grid = std::max(grid, objective_Y2(lift_of(x), CMat::Identity(2, 2), ch));
    }
    CHECK(objective_Y2(next.Q, next.W, ch) == doctest::Approx(grid).epsilon(1e-3));
}

TEST_CASE("relaxed bound dominates an exhaustive phase search on a 2x2 instance")
{
    SystemConfig cfg = tiny_config(2, 1, 1);
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        Rng rng(seed);
        ChannelSet ch = generate_channels(cfg, LinkGeometry::uniform(30, 30), rng);
        JointSettings js;
        js.relaxed = true;
        FirstResult r = run_first_subproblem(ch, js);
        OracleResult o = small_instance_oracle(ch, 64);
        CHECK(objective_Y2(r.vars.Q, r.vars.W, ch) >= o.best_gain * (1.0 - 1e-3));
    }
}

TEST_CASE("full outer loop on a default-sized draw")
{
    ChannelSet ch = table1_channels(10);
    FirstResult r = run_first_subproblem(ch);
    const MMState &st = r.state;
    REQUIRE(st.objective.size() >= 2);
    CHECK(st.objective.size() == st.g1.size() + 1);
    CHECK(st.penalized_new.size() == st.g1.size());
    for (std::size_t k = 0; k < st.penalized_new.size(); ++k)
        CHECK(st.penalized_new[k] >= st.penalized_prev[k] - 1e-6 * std::max(1.0, std::abs(st.penalized_prev[k])));
    for (std::size_t k = 1; k < st.inv_eta_used.size(); ++k)
        if (st.inv_eta_used[k - 1] > 0.0)
            CHECK(st.inv_eta_used[k] >= st.inv_eta_used[k - 1]); // eta non-increasing
    CHECK(r.report.rank_residual_q < 1e-3);
    CHECK(r.report.rank_residual_w < 1e-3);
    CHECK((r.vars.Q.diagonal().array() - 1.0).abs().maxCoeff() < 1e-8);
    CHECK(std::abs(r.vars.W.trace().real() - 2.0) < 1e-8);

    CMat F = extract_precoder(r.vars.W);
    PhaseConfig p = extract_phases(r.vars.Q, ch, F);
    const double lifted = objective_Y2(r.vars.Q, r.vars.W, ch);
    CHECK(std::abs(channel_gain(ch, p, F) - lifted) <= 0.05 * lifted);

    std::ostringstream csv;
    write_trace_csv(csv, st);
    CHECK(csv.str().rfind("iteration,objective,surrogate,g1,g2,inv_eta,violation_q,violation_w,inner_iterations\n", 0) == 0);
}

TEST_CASE("phase extraction")
{
    ChannelSet ch = table1_channels(11);
    Rng rng(11);
    CMat F = random_precoder(10, rng);
    for (int t = 0; t < 10; ++t)
    {
        CVec x = random_unit_modulus(50, rng);
        PhaseConfig p = extract_phases(x * x.adjoint(), ch, F);
        const double match = std::max(std::abs(p.phi().dot(x)), std::abs(p.phi().conjugate().dot(x)));
        CHECK(match == doctest::Approx(50.0).epsilon(1e-10));

        // Never worse than the raw top-eigenvector phases.
        CMat Q = convex::restore_feasible(x * x.adjoint() + 0.3 * random_psd(50, 2, rng),
                                          convex::AffineConstraint::unit_diagonal(50));
        CVec u = eig_desc(Q).vectors.col(0);
        CVec raw = u.array() / u.array().abs();
        CHECK(channel_gain(ch, extract_phases(Q, ch, F), F) >= channel_gain(ch, PhaseConfig(raw, 25), F) - 1e-12);
    }
    PhaseConfig any = extract_phases(CMat::Identity(50, 50), ch, F);
    CHECK((any.phi().array().abs() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("precoder extraction")
{
    Rng rng(12);
    CMat F0 = random_matrix(6, 2, rng);
    Eigen::HouseholderQR<CMat> qr(F0);
    CMat Qm = qr.householderQ() * CMat::Identity(6, 2);
    CMat D = CMat::Zero(2, 2);
    D(0, 0) = std::sqrt(1.5);
    D(1, 1) = std::sqrt(0.5);
    F0 = Qm * D;
    CMat W = F0 * F0.adjoint();
    CMat F = extract_precoder(W);
    CHECK((F * F.adjoint() - W).norm() < 1e-8);
    CHECK(F.squaredNorm() == doctest::Approx(2.0).epsilon(1e-14));

    CVec u = random_matrix(6, 1, rng).col(0).normalized();
    CMat G = extract_precoder(2.0 * u * u.adjoint());
    CHECK(G.col(1).norm() < 1e-7);
    CHECK(G.squaredNorm() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("exact lifts extract to the same objective")
{
    ChannelSet ch = table1_channels(13);
    Rng rng(13);
    for (int t = 0; t < 10; ++t)
    {
        CVec x = random_unit_modulus(50, rng);
        CMat F0 = random_precoder(10, rng);
        CMat Q = lift_of(x), W = F0 * F0.adjoint();
        const double lifted = objective_Y2(Q, W, ch);
        CMat F = extract_precoder(W);
        PhaseConfig p = extract_phases(Q, ch, F);
        // The conjugate candidate may only do better.
        CHECK(channel_gain(ch, p, F) >= lifted * (1.0 - 1e-8));
        CHECK(channel_gain(ch, PhaseConfig(x, 25), F) == doctest::Approx(lifted).epsilon(1e-8));
    }
}
