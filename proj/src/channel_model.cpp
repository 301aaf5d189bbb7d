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

#include "irshp/channel_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irshp
{

LinkGeometry LinkGeometry::uniform(double d_hb, double d_hi)
{
    LinkGeometry g;
    g.bs_irs1 = g.bs_irs2 = d_hb;
    g.irs1_user = {d_hi, d_hi};
    g.irs2_user = {d_hi, d_hi};
    g.colocated_users = true;
    return g;
}

CVec upa_response(double azimuth, double elevation, UpaDims dims, double spacing, double wavelength)
{
    if (!std::isfinite(azimuth) || !std::isfinite(elevation))
        throw std::invalid_argument("upa_response: non-finite angle");
    if (dims.width < 1 || dims.height < 1)
        throw std::invalid_argument("upa_response: grid dimensions must be >= 1");

    const double k = 2.0 * kPi * spacing / wavelength;
    const double u = std::sin(azimuth) * std::sin(elevation);
    const double v = std::cos(elevation);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.count()));

    CVec a(dims.count());
    for (int n = 0; n < dims.height; ++n)
        for (int m = 0; m < dims.width; ++m)
            a(n * dims.width + m) = std::polar(scale, k * (m * u + n * v));
    return a;
}

double path_loss(double distance, const PathLossModel &model)
{
    if (!(distance > 0.0))
        throw std::invalid_argument("path_loss: distance must be > 0");
    return model.a + 10.0 * model.b * std::log10(distance);
}

CMat gen_sv_channel(UpaDims rx, UpaDims tx, int paths, double pl_db, Rng &rng, double spacing, double wavelength,
                    std::vector<PathGains> *record)
{
    if (paths < 1)
        throw std::invalid_argument("gen_sv_channel: path count must be >= 1");
    if (rx.count() < 1 || tx.count() < 1)
        throw std::invalid_argument("gen_sv_channel: empty array");

    const double kappa2 = static_cast<double>(rx.count()) * tx.count() / paths;
    const double variance = kappa2 * std::pow(10.0, -0.1 * pl_db);

    CMat h = CMat::Zero(rx.count(), tx.count());
    for (int q = 0; q < paths; ++q)
    {
        PathGains p;
        p.alpha = rng.complex_normal(variance);
        p.aoa_azimuth = rng.uniform(0.0, 2.0 * kPi);
        p.aoa_elevation = rng.uniform(0.0, kPi);
        p.aod_azimuth = rng.uniform(0.0, 2.0 * kPi);
        p.aod_elevation = rng.uniform(0.0, kPi);
        CVec ar = upa_response(p.aoa_azimuth, p.aoa_elevation, rx, spacing, wavelength);
        CVec at = upa_response(p.aod_azimuth, p.aod_elevation, tx, spacing, wavelength);
        h.noalias() += p.alpha * ar * at.adjoint();
        if (record)
            record->push_back(p);
    }
    return h;
}

static void require_shape(const CMat &m, Eigen::Index rows, Eigen::Index cols, const char *name)
{
    if (m.rows() != rows || m.cols() != cols)
        throw std::invalid_argument(std::string("assemble: ") + name + " is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
}

ChannelSet assemble(const SystemConfig &cfg, CMat H_B1, CMat H_B2, CMat H_I1, CMat H_I2)
{
    require_shape(H_B1, cfg.r1, cfg.M, "H_B1");
    require_shape(H_B2, cfg.r2, cfg.M, "H_B2");
    require_shape(H_I1, 2, cfg.r1, "H_I1");
    require_shape(H_I2, 2, cfg.r2, "H_I2");

    ChannelSet c;
    const int r = cfg.r1 + cfg.r2;
    c.H_B.resize(r, cfg.M);
    c.H_B << H_B1, H_B2;
    c.H_I.resize(2, r);
    c.H_I << H_I1, H_I2;
    c.H_I_tilde = c.H_I.adjoint() * c.H_I;
    c.H_B1 = std::move(H_B1);
    c.H_B2 = std::move(H_B2);
    c.H_I1 = std::move(H_I1);
    c.H_I2 = std::move(H_I2);
    return c;
}

static SystemConfig shape_of(const ChannelSet &c)
{
    SystemConfig cfg;
    cfg.M = c.M();
    cfg.r1 = c.r1();
    cfg.r2 = c.r2();
    return cfg;
}

ChannelSet perturb(const ChannelSet &channels, double alpha, Rng &rng)
{
    if (alpha < 0.0)
        throw std::invalid_argument("perturb: alpha must be >= 0");
    auto bump = [&](const CMat &h) -> CMat {
        CMat delta = rng.complex_normal_matrix(static_cast<int>(h.rows()), static_cast<int>(h.cols()));
        return h + alpha * delta;
    };
    CMat b1 = bump(channels.H_B1);
    CMat b2 = bump(channels.H_B2);
    CMat i1 = bump(channels.H_I1);
    CMat i2 = bump(channels.H_I2);
    return assemble(shape_of(channels), std::move(b1), std::move(b2), std::move(i1), std::move(i2));
}

ReferenceGains reference_gains(const SystemConfig &cfg)
{
    return {std::pow(10.0, -0.1 * (path_loss(cfg.d_hb, cfg.path_loss) - cfg.gt_dbi)),
            std::pow(10.0, -0.1 * path_loss(cfg.d_hi, cfg.path_loss))};
}

namespace
{

// Path losses are shifted by the given dB offsets; the random draws do not depend on them.
ChannelSet draw(const SystemConfig &cfg, const LinkGeometry &geo, Rng &rng, double offset_b_db, double offset_i_db)
{
    // One child stream per base matrix.
    std::array<std::uint64_t, 4> seeds{};
    for (auto &s : seeds)
        s = rng.engine()();

    const auto &pl = cfg.path_loss;
    const double d = cfg.spacing;
    const double lam = cfg.wavelength;

    auto bs_link = [&](UpaDims irs, double dist, std::uint64_t seed) {
        Rng r(seed);
        return gen_sv_channel(irs, cfg.bs_dims, cfg.l_b, path_loss(dist, pl) - cfg.gt_dbi + offset_b_db, r, d, lam);
    };
    auto user_link = [&](UpaDims irs, const std::array<double, 2> &dist, std::uint64_t seed) {
        Rng r(seed);
        if (geo.colocated_users)
            return gen_sv_channel(cfg.user_dims, irs, cfg.l_i, path_loss(dist[0], pl) + offset_i_db, r, d, lam);
        CMat h(2, irs.count());
        for (int u = 0; u < 2; ++u)
            h.row(u) = gen_sv_channel({1, 1}, irs, cfg.l_i, path_loss(dist[u], pl) + offset_i_db, r, d, lam);
        return h;
    };

    CMat b1 = bs_link(cfg.irs1_dims, geo.bs_irs1, seeds[0]);
    CMat b2 = bs_link(cfg.irs2_dims, geo.bs_irs2, seeds[1]);
    CMat i1 = user_link(cfg.irs1_dims, geo.irs1_user, seeds[2]);
    CMat i2 = user_link(cfg.irs2_dims, geo.irs2_user, seeds[3]);
    return assemble(cfg, std::move(b1), std::move(b2), std::move(i1), std::move(i2));
}

} // namespace

ChannelSet generate_channels(const SystemConfig &cfg, const LinkGeometry &geometry, Rng &rng)
{
    const double ref_b = path_loss(cfg.d_hb, cfg.path_loss) - cfg.gt_dbi;
    const double ref_i = path_loss(cfg.d_hi, cfg.path_loss);
    return draw(cfg, geometry, rng, -ref_b, -ref_i);
}

ChannelSet generate_channels_physical(const SystemConfig &cfg, const LinkGeometry &geometry, Rng &rng)
{
    return draw(cfg, geometry, rng, 0.0, 0.0);
}

ChannelSet to_reference_units(const ChannelSet &physical, const SystemConfig &cfg)
{
    const auto g = reference_gains(cfg);
    const double sb = 1.0 / std::sqrt(g.bs_irs);
    const double si = 1.0 / std::sqrt(g.irs_user);
    return assemble(shape_of(physical), physical.H_B1 * sb, physical.H_B2 * sb, physical.H_I1 * si,
                    physical.H_I2 * si);
}

} // namespace irshp
