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

#include "irshp/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace irshp
{

void write_matrix(std::ostream &out, const std::string &name, const CMat &m)
{
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < m.cols(); ++j)
        {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
            if (j)
                out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

static bool next_content_line(std::istream &in, std::string &line)
{
    while (std::getline(in, line))
    {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#')
            continue;
        return true;
    }
    return false;
}

CMat read_matrix(std::istream &in, const std::string &expected_name)
{
    std::string line;
    if (!next_content_line(in, line))
        throw std::runtime_error("read_matrix: unexpected end of input");
    std::istringstream head(line);
    std::string name;
    long rows = -1, cols = -1;
    if (!(head >> name >> rows >> cols) || rows < 0 || cols < 0)
        throw std::runtime_error("read_matrix: malformed header '" + line + "'");
    if (!expected_name.empty() && name != expected_name)
        throw std::runtime_error("read_matrix: expected block '" + expected_name + "', found '" + name + "'");

    CMat m(rows, cols);
    for (long i = 0; i < rows; ++i)
    {
        if (!next_content_line(in, line))
            throw std::runtime_error("read_matrix: block '" + name + "' truncated");
        std::istringstream row(line);
        std::string tok;
        for (long j = 0; j < cols; ++j)
        {
            if (!(row >> tok))
                throw std::runtime_error("read_matrix: block '" + name + "' row " + std::to_string(i) + " is short");
            auto comma = tok.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("read_matrix: bad entry '" + tok + "'");
            m(i, j) = cd(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
        }
    }
    return m;
}

void write_channels(std::ostream &out, const ChannelSet &c)
{
    out << "# irshp channel set\n";
    write_matrix(out, "H_B1", c.H_B1);
    write_matrix(out, "H_B2", c.H_B2);
    write_matrix(out, "H_I1", c.H_I1);
    write_matrix(out, "H_I2", c.H_I2);
}

ChannelSet read_channels(std::istream &in)
{
    CMat b1 = read_matrix(in, "H_B1");
    CMat b2 = read_matrix(in, "H_B2");
    CMat i1 = read_matrix(in, "H_I1");
    CMat i2 = read_matrix(in, "H_I2");
    SystemConfig shape;
    shape.M = static_cast<int>(b1.cols());
    shape.r1 = static_cast<int>(b1.rows());
    shape.r2 = static_cast<int>(b2.rows());
    return assemble(shape, std::move(b1), std::move(b2), std::move(i1), std::move(i2));
}

void save_channels(const std::string &path, const ChannelSet &channels)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    write_channels(out, channels);
}

ChannelSet load_channels(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read '" + path + "'");
    return read_channels(in);
}

} // namespace irshp
