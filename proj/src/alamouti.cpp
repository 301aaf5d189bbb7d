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

#include "irshp/alamouti.hpp"

#include <cmath>
#include <string>

namespace irshp
{

PhaseConfig::PhaseConfig(CVec phi, int r1) : phi_(std::move(phi)), r1_(r1)
{
    if (r1_ < 0 || r1_ > phi_.size())
        throw std::invalid_argument("PhaseConfig: split index out of range");
    for (Eigen::Index i = 0; i < phi_.size(); ++i)
        if (!(std::abs(std::abs(phi_(i)) - 1.0) <= 1e-12))
            throw std::invalid_argument("PhaseConfig: entry " + std::to_string(i) + " is not unit modulus");
}

PhaseConfig PhaseConfig::ones(int r1, int r2) { return PhaseConfig(CVec::Ones(r1 + r2), r1); }

CMat encode(cd s1, cd s2)
{
    CMat s(2, 2);
    s << s1, -std::conj(s2), s2, std::conj(s1);
    return s;
}

static void check_precoder(const ChannelSet &c, const PhaseConfig &p, const CMat &F)
{
    if (F.rows() != c.M())
        throw std::invalid_argument("precoder has " + std::to_string(F.rows()) + " rows, expected M = " +
                                    std::to_string(c.M()));
    if (p.phi().size() != c.n_elements() || p.r1() != c.r1())
        throw std::invalid_argument("phase configuration does not match the surfaces");
}

CMat cascaded_channel(const ChannelSet &channels, const CVec &phi)
{
    if (phi.size() != channels.n_elements())
        throw std::invalid_argument("cascaded_channel: phase vector length mismatch");
    return channels.H_I * phi.asDiagonal() * channels.H_B;
}

CMat effective_channel(const ChannelSet &channels, const PhaseConfig &phases, const CMat &F)
{
    check_precoder(channels, phases, F);
    return cascaded_channel(channels, phases.phi()) * F;
}

CMat effective_channel_two_term(const ChannelSet &channels, const PhaseConfig &phases, const CMat &F)
{
    check_precoder(channels, phases, F);
    CMat h1 = channels.H_I1 * phases.phi1().asDiagonal() * channels.H_B1;
    CMat h2 = channels.H_I2 * phases.phi2().asDiagonal() * channels.H_B2;
    return h1 * F + h2 * F;
}

double channel_gain(const ChannelSet &channels, const PhaseConfig &phases, const CMat &F)
{
    return effective_channel(channels, phases, F).squaredNorm();
}

double snr(const CMat &G, double pt, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("snr: sigma2 must be > 0");
    return pt / (2.0 * sigma2) * (G * G.adjoint()).trace().real();
}

std::pair<double, double> per_user_snr(const CMat &G, double pt, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("per_user_snr: sigma2 must be > 0");
    const double c = pt / (2.0 * sigma2);
    return {c * G.row(0).squaredNorm(), c * G.row(1).squaredNorm()};
}

double sum_snr_two_users(const CMat &G, double pt, double sigma2)
{
    auto [a, b] = per_user_snr(G, pt, sigma2);
    return a + b;
}

double achievable_rate(double snr_value, RateConvention convention)
{
    if (snr_value < 0.0)
        throw std::invalid_argument("achievable_rate: SNR must be >= 0");
    const double r = std::log1p(snr_value) / std::log(2.0);
    return convention == RateConvention::Half ? 0.5 * r : r;
}

std::pair<cd, cd> mrc_decode(const CMat &R, const CMat &G)
{
    if (R.rows() != G.rows() || R.cols() != 2 || G.cols() != 2)
        throw std::invalid_argument("mrc_decode: expected R with 2 slots and G with 2 columns");
    const double energy = G.squaredNorm();
    if (std::sqrt(energy) <= 1e-12)
        throw DegenerateChannelError("mrc_decode: effective channel is (numerically) zero");

    auto g1 = G.col(0);
    auto g2 = G.col(1);
    auto r1 = R.col(0);
    auto r2 = R.col(1);
    cd s1 = (g1.adjoint() * r1)(0) + (r2.adjoint() * g2)(0);
    cd s2 = (g2.adjoint() * r1)(0) - (r2.adjoint() * g1)(0);
    return {s1 / energy, s2 / energy};
}

std::pair<double, double> mismatched_sinr(const CMat &G_nominal, const CMat &G_actual, double pt, double sigma2)
{
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("mismatched_sinr: sigma2 must be > 0");
    const double energy = G_nominal.squaredNorm();
    if (energy <= 0.0)
        return {0.0, 0.0};

    auto g1 = G_nominal.col(0);
    auto g2 = G_nominal.col(1);
    auto a1 = G_actual.col(0);
    auto a2 = G_actual.col(1);
    const cd self1 = g1.dot(a1) + a2.dot(g2);
    const cd cross1 = g1.dot(a2) - a1.dot(g2);
    const cd self2 = g2.dot(a2) + a1.dot(g1);
    const cd cross2 = g2.dot(a1) - a2.dot(g1);

    const double p = pt / 2.0;
    auto sinr = [&](cd self, cd cross) {
        double interference = p * (std::norm(self - energy) + std::norm(cross));
        return p * energy * energy / (interference + sigma2 * energy);
    };
    return {sinr(self1, cross1), sinr(self2, cross2)};
}

double mismatched_rate(const CMat &G_nominal, const CMat &G_actual, double pt, double sigma2,
                       RateConvention convention)
{
    auto [a, b] = mismatched_sinr(G_nominal, G_actual, pt, sigma2);
    return 0.5 * (achievable_rate(a, convention) + achievable_rate(b, convention));
}

} // namespace irshp
