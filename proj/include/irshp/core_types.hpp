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

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace irshp
{
using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform planar array grid; element count is width * height.
struct UpaDims
{
    int width = 1;
    int height = 1;
    int count() const { return width * height; }
    bool operator==(const UpaDims &) const = default;
};

/// Near-square factorization (width >= height), e.g. 10 -> 5x2, 25 -> 5x5, 50 -> 10x5.
UpaDims near_square_dims(int elements);

/// Log-distance path loss PL(D) = a + 10 b log10(D), in dB.
struct PathLossModel
{
    double a = 61.4;
    double b = 2.0;
};

/// All scenario parameters. Defaults reproduce the standard 10-antenna, 2x25-element setup.
struct SystemConfig
{
    int M = 10;          // transmit antennas
    int n_rf = 2;        // RF chains
    int k = 2;           // streams / users, Alamouti needs exactly 2
    int r1 = 25;         // elements on IRS-1
    int r2 = 25;         // elements on IRS-2
    double pt_dbm = 30.0;
    double sigma2 = 1e-3; // noise power [W]
    double gt_dbi = 49.0;
    int l_b = 5;          // paths on BS -> IRS links
    int l_i = 5;          // paths on IRS -> user links
    double d_hb = 30.0;   // [m]
    double d_hi = 30.0;   // [m]
    double wavelength = 0.005; // [m]
    double spacing = 0.0025;   // [m], lambda / 2
    UpaDims bs_dims{5, 2};
    UpaDims irs1_dims{5, 5};
    UpaDims irs2_dims{5, 5};
    UpaDims user_dims{2, 1};
    PathLossModel path_loss;
    std::uint64_t seed = 1;

    int total_elements() const { return r1 + r2; }
    double pt_watts() const;

    /// Re-derives every UPA grid from the element counts (near-square).
    void reset_dims();
};

/// Thrown by validate_config; carries every violated invariant.
class ConfigError : public std::invalid_argument
{
  public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string> &violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

/// Returns cfg unchanged if all invariants hold, throws ConfigError otherwise.
SystemConfig validate_config(const SystemConfig &cfg);

/// Applies flat key/value overrides (keys equal field names, e.g. "M", "n_rf", "bs_dims=5x2").
void apply_setting(SystemConfig &cfg, const std::string &key, const std::string &value);

/// Reads a key = value file ('#' comments allowed) on top of cfg.
SystemConfig load_config_file(const std::string &path, SystemConfig cfg = {});

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);

// ------------------------------------------------------------------------
// Matrix verification. Flags are only asserted after these checks.

double hermitian_defect(const CMat &a); // ||A - A^H||_F
bool is_hermitian(const CMat &a, double rel_tol = 1e-10);
bool is_psd(const CMat &a, double rel_tol = 1e-8);
bool all_finite(const CMat &a);

/// (A + A^H) / 2
CMat hermitian_part(const CMat &a);

/// Eigenvalues in descending order with matching eigenvector columns.
struct EigenPairs
{
    RVec values;
    CMat vectors;
};
EigenPairs eig_desc(const CMat &hermitian);

// ------------------------------------------------------------------------
// Random streams. One master seed per experiment; every consumer derives its own stream.

class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Deterministic child stream keyed by (master, labels...).
    static Rng derive(std::uint64_t master, std::initializer_list<std::uint64_t> labels);

    double uniform(double lo, double hi);
    double normal();
    /// CN(0, variance): real and imaginary parts each N(0, variance / 2).
    cd complex_normal(double variance = 1.0);
    CMat complex_normal_matrix(int rows, int cols, double variance = 1.0);
    /// e^{j theta}, theta ~ U[0, 2 pi)
    cd random_phase();

    std::mt19937_64 &engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace irshp
