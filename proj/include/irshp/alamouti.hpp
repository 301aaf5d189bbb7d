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

#include "irshp/channel_model.hpp"

#include <stdexcept>
#include <utility>

namespace irshp
{

/// Stacked reflection coefficients of both surfaces; every entry has unit modulus.
class PhaseConfig
{
  public:
    /// Throws std::invalid_argument if any |phi_r| deviates from 1 by more than 1e-12.
    PhaseConfig(CVec phi, int r1);

    static PhaseConfig ones(int r1, int r2);

    const CVec &phi() const { return phi_; }
    int r1() const { return r1_; }
    int r2() const { return static_cast<int>(phi_.size()) - r1_; }
    auto phi1() const { return phi_.head(r1_); }
    auto phi2() const { return phi_.tail(r2()); }

  private:
    CVec phi_;
    int r1_;
};

class DegenerateChannelError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class RateConvention
{
    Full, // log2(1 + SNR)
    Half  // 0.5 log2(1 + SNR), for comparisons that count both Alamouti slots
};

/// [[s1, -s2*], [s2, s1*]]
CMat encode(cd s1, cd s2);

/// G = H_I diag(phi) H_B F (2 x 2).
CMat effective_channel(const ChannelSet &channels, const PhaseConfig &phases, const CMat &F);

/// Same matrix via the per-surface sum (H_I1 Phi_1 H_B1 + H_I2 Phi_2 H_B2) F.
CMat effective_channel_two_term(const ChannelSet &channels, const PhaseConfig &phases, const CMat &F);

/// H_I diag(phi) H_B (2 x M).
CMat cascaded_channel(const ChannelSet &channels, const CVec &phi);

/// ||G||_F^2 for the given phases and precoder.
double channel_gain(const ChannelSet &channels, const PhaseConfig &phases, const CMat &F);

/// Per-symbol SNR (P_t / (2 sigma^2)) ||G||_F^2, identical for both symbols.
double snr(const CMat &G, double pt, double sigma2);

/// Per-user MRC SNRs (P_t / (2 sigma^2)) (|g_i1|^2 + |g_i2|^2).
std::pair<double, double> per_user_snr(const CMat &G, double pt, double sigma2);

/// Sum of both users' SNRs; equals snr(G) by the row decomposition of ||G||_F^2.
double sum_snr_two_users(const CMat &G, double pt, double sigma2);

double achievable_rate(double snr_value, RateConvention convention = RateConvention::Full);

/// Linear MRC combining of one Alamouti block R (rows: receivers, columns: slots).
/// Throws DegenerateChannelError when ||G||_F <= 1e-12.
std::pair<cd, cd> mrc_decode(const CMat &R, const CMat &G);

/// Per-symbol SINRs when the receiver combines with the nominal G while the block travels
/// through G_actual. Only the nominal coherent gain ||G||^2 counts as signal; the residual
/// self-term and the cross-symbol leakage are treated as interference. Equal to snr() when
/// G_actual == G.
std::pair<double, double> mismatched_sinr(const CMat &G_nominal, const CMat &G_actual, double pt, double sigma2);

/// Mean of the two symbol rates under mismatched_sinr.
double mismatched_rate(const CMat &G_nominal, const CMat &G_actual, double pt, double sigma2,
                       RateConvention convention = RateConvention::Full);

} // namespace irshp
