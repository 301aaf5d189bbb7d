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

#include <iosfwd>
#include <string>

namespace irshp
{

// Plain-text matrix exchange format:
//
//   <name> <rows> <cols>
//   re,im re,im ...        (one line per row, %.17g so values round-trip exactly)
//
// A channel file holds the blocks H_B1, H_B2, H_I1, H_I2 in that order; lines starting
// with '#' are comments.

void write_matrix(std::ostream &out, const std::string &name, const CMat &m);

/// Reads the next block; throws std::runtime_error on malformed input or a name mismatch
/// (an empty expected name accepts any block).
CMat read_matrix(std::istream &in, const std::string &expected_name = {});

void write_channels(std::ostream &out, const ChannelSet &channels);
ChannelSet read_channels(std::istream &in);

void save_channels(const std::string &path, const ChannelSet &channels);
ChannelSet load_channels(const std::string &path);

} // namespace irshp
