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

#include <array>
#include <vector>

namespace irshp
{

/// The four cascaded-link matrices and their stacked forms.
///
/// H_B = [H_B1; H_B2] (2R x M), H_I = [H_I1, H_I2] (2 x 2R) and H_I_tilde = H_I^H H_I.
struct ChannelSet
{
    CMat H_B1; // R1 x M
    CMat H_B2; // R2 x M
    CMat H_I1; // 2 x R1
    CMat H_I2; // 2 x R2
    CMat H_B;
    CMat H_I;
    CMat H_I_tilde;

    int M() const { return static_cast<int>(H_B1.cols()); }
    int r1() const { return static_cast<int>(H_B1.rows()); }
    int r2() const { return static_cast<int>(H_B2.rows()); }
    int n_elements() const { return r1() + r2(); }
};

/// One sampled multipath component.
struct PathGains
{
    cd alpha;
    double aoa_azimuth, aoa_elevation;
    double aod_azimuth, aod_elevation;
};

/// Distances of every hop. User rows are generated jointly when the users are co-located
/// (one 2-element receive grid), otherwise per user with its own distance.
struct LinkGeometry
{
    double bs_irs1 = 30.0;
    double bs_irs2 = 30.0;
    std::array<double, 2> irs1_user{30.0, 30.0};
    std::array<double, 2> irs2_user{30.0, 30.0};
    bool colocated_users = true;

    static LinkGeometry uniform(double d_hb, double d_hi);
};

/// Unit-norm UPA steering vector. Element (m, n), stored at index n * W + m, has phase
/// (2 pi d / lambda) (m sin(az) sin(el) + n cos(el)).
CVec upa_response(double azimuth, double elevation, UpaDims dims, double spacing, double wavelength);

/// PL(D) = a + 10 b log10(D) [dB].
double path_loss(double distance, const PathLossModel &model);

/// Extended Saleh-Valenzuela channel sum_q alpha_q a_r a_t^H with kappa^2 = n_rx n_tx / L.
CMat gen_sv_channel(UpaDims rx, UpaDims tx, int paths, double pl_db, Rng &rng, double spacing, double wavelength,
                    std::vector<PathGains> *record = nullptr);

/// Stacks the four base channels. Throws std::invalid_argument on dimension mismatch.
ChannelSet assemble(const SystemConfig &cfg, CMat H_B1, CMat H_B2, CMat H_I1, CMat H_I2);

/// Adds alpha * Delta to each base channel, Delta i.i.d. CN(0, 1), drawn independently per matrix.
ChannelSet perturb(const ChannelSet &channels, double alpha, Rng &rng);

/// Large-scale linear power gains of the reference hops (BS->IRS at d_hb with the transmit
/// antenna gain credited, IRS->user at d_hi).
struct ReferenceGains
{
    double bs_irs;
    double irs_user;
    double cascade() const { return bs_irs * irs_user; }
};
ReferenceGains reference_gains(const SystemConfig &cfg);

/// Draws all four channels for one trial. Path losses are expressed relative to the reference
/// hops, so a hop at the reference distance has unit average entry power.
ChannelSet generate_channels(const SystemConfig &cfg, const LinkGeometry &geometry, Rng &rng);

/// Same draw in physical units (absolute path loss, transmit gain applied on BS-side links).
ChannelSet generate_channels_physical(const SystemConfig &cfg, const LinkGeometry &geometry, Rng &rng);

/// Divides the BS-side and user-side hops by the reference amplitudes.
ChannelSet to_reference_units(const ChannelSet &physical, const SystemConfig &cfg);

} // namespace irshp
