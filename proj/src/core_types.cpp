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

#include "irshp/core_types.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace irshp
{

UpaDims near_square_dims(int elements)
{
    if (elements < 1)
        throw std::invalid_argument("near_square_dims: element count must be >= 1");
    int width = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(elements))));
    while (elements % width != 0)
        ++width;
    return {width, elements / width};
}

double SystemConfig::pt_watts() const { return dbm_to_watts(pt_dbm); }

void SystemConfig::reset_dims()
{
    bs_dims = near_square_dims(M);
    irs1_dims = near_square_dims(r1);
    irs2_dims = near_square_dims(r2);
    user_dims = {2, 1};
}

static std::string join_violations(const std::vector<std::string> &v)
{
    std::string out = "invalid configuration:";
    for (const auto &s : v)
        out += " [" + s + "]";
    return out;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations))
{
}

SystemConfig validate_config(const SystemConfig &cfg)
{
    std::vector<std::string> bad;
    auto positive = [&](double v, const char *name) {
        if (!(v > 0.0) || !std::isfinite(v))
            bad.push_back(std::string(name) + " must be a finite positive number");
    };

    if (cfg.k != 2)
        bad.push_back("K must equal 2 (Alamouti transmits two symbols), got " + std::to_string(cfg.k));
    if (cfg.n_rf < cfg.k)
        bad.push_back("N_RF (" + std::to_string(cfg.n_rf) + ") must be >= K (" + std::to_string(cfg.k) + ")");
    if (cfg.n_rf > cfg.M)
        bad.push_back("N_RF (" + std::to_string(cfg.n_rf) + ") must be <= M (" + std::to_string(cfg.M) + ")");
    if (cfg.M < 1)
        bad.push_back("M must be >= 1");
    if (cfg.r1 < 1 || cfg.r2 < 1)
        bad.push_back("R1 and R2 must be >= 1");
    if (cfg.l_b < 1 || cfg.l_i < 1)
        bad.push_back("path counts L_B and L_I must be >= 1");
    if (!std::isfinite(cfg.pt_dbm))
        bad.push_back("P_t must be finite");
    positive(cfg.sigma2, "sigma2");
    positive(cfg.d_hb, "d_HB");
    positive(cfg.d_hi, "d_HI");
    positive(cfg.wavelength, "wavelength");
    positive(cfg.spacing, "spacing");
    if (!std::isfinite(cfg.gt_dbi))
        bad.push_back("g_t must be finite");

    auto dims_ok = [&](const UpaDims &d, int n, const char *name) {
        if (d.width < 1 || d.height < 1 || d.count() != n)
            bad.push_back(std::string(name) + " grid " + std::to_string(d.width) + "x" + std::to_string(d.height) +
                          " does not hold " + std::to_string(n) + " elements");
    };
    dims_ok(cfg.bs_dims, cfg.M, "BS");
    dims_ok(cfg.irs1_dims, cfg.r1, "IRS-1");
    dims_ok(cfg.irs2_dims, cfg.r2, "IRS-2");
    dims_ok(cfg.user_dims, 2, "user");

    if (!bad.empty())
        throw ConfigError(std::move(bad));
    return cfg;
}

static UpaDims parse_dims(const std::string &s)
{
    auto x = s.find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("expected WxH grid, got '" + s + "'");
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

void apply_setting(SystemConfig &cfg, const std::string &key, const std::string &value)
{
    // Element-count changes re-derive the matching grid; explicit *_dims keys may follow.
    if (key == "M") { cfg.M = std::stoi(value); cfg.bs_dims = near_square_dims(cfg.M); }
    else if (key == "n_rf") cfg.n_rf = std::stoi(value);
    else if (key == "K" || key == "k") cfg.k = std::stoi(value);
    else if (key == "r1") { cfg.r1 = std::stoi(value); cfg.irs1_dims = near_square_dims(cfg.r1); }
    else if (key == "r2") { cfg.r2 = std::stoi(value); cfg.irs2_dims = near_square_dims(cfg.r2); }
    else if (key == "pt_dbm") cfg.pt_dbm = std::stod(value);
    else if (key == "sigma2") cfg.sigma2 = std::stod(value);
    else if (key == "gt_dbi") cfg.gt_dbi = std::stod(value);
    else if (key == "l_b") cfg.l_b = std::stoi(value);
    else if (key == "l_i") cfg.l_i = std::stoi(value);
    else if (key == "d_hb") cfg.d_hb = std::stod(value);
    else if (key == "d_hi") cfg.d_hi = std::stod(value);
    else if (key == "wavelength") cfg.wavelength = std::stod(value);
    else if (key == "spacing") cfg.spacing = std::stod(value);
    else if (key == "bs_dims") cfg.bs_dims = parse_dims(value);
    else if (key == "irs1_dims") cfg.irs1_dims = parse_dims(value);
    else if (key == "irs2_dims") cfg.irs2_dims = parse_dims(value);
    else if (key == "user_dims") cfg.user_dims = parse_dims(value);
    else if (key == "pl_a") cfg.path_loss.a = std::stod(value);
    else if (key == "pl_b") cfg.path_loss.b = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else
        throw std::invalid_argument("unknown configuration key '" + key + "'");
}

static std::string trim(const std::string &s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

SystemConfig load_config_file(const std::string &path, SystemConfig cfg)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open configuration file '" + path + "'");
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected key = value");
        apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double hermitian_defect(const CMat &a) { return (a - a.adjoint()).norm(); }

bool is_hermitian(const CMat &a, double rel_tol)
{
    if (a.rows() != a.cols())
        return false;
    return hermitian_defect(a) <= rel_tol * std::max(a.norm(), 1e-300);
}

bool is_psd(const CMat &a, double rel_tol)
{
    if (!is_hermitian(a))
        return false;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(a), Eigen::EigenvaluesOnly);
    const RVec &ev = es.eigenvalues();
    double top = ev.size() ? ev(ev.size() - 1) : 0.0;
    double bottom = ev.size() ? ev(0) : 0.0;
    return bottom >= -rel_tol * std::max(1.0, top);
}

bool all_finite(const CMat &a) { return a.allFinite(); }

CMat hermitian_part(const CMat &a) { return 0.5 * (a + a.adjoint()); }

EigenPairs eig_desc(const CMat &hermitian)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eig_desc: eigendecomposition failed");
    const Eigen::Index n = hermitian.rows();
    EigenPairs out{RVec(n), CMat(n, n)};
    for (Eigen::Index i = 0; i < n; ++i)
    {
        out.values(i) = es.eigenvalues()(n - 1 - i);
        out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return out;
}

Rng Rng::derive(std::uint64_t master, std::initializer_list<std::uint64_t> labels)
{
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * labels.size());
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(master);
    for (auto l : labels)
        push(l);
    std::seed_seq seq(words.begin(), words.end());
    std::uint64_t seed = 0;
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    seed = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    return Rng(seed);
}

double Rng::uniform(double lo, double hi)
{
    // 53-bit mantissa from the raw engine; std::uniform_real_distribution is not portable.
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double Rng::normal() { return normal_(engine_); }

cd Rng::complex_normal(double variance)
{
    double s = std::sqrt(variance / 2.0);
    double re = normal();
    double im = normal();
    return {s * re, s * im};
}

CMat Rng::complex_normal_matrix(int rows, int cols, double variance)
{
    CMat out(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            out(i, j) = complex_normal(variance);
    return out;
}

cd Rng::random_phase() { return std::polar(1.0, uniform(0.0, 2.0 * kPi)); }

} // namespace irshp
