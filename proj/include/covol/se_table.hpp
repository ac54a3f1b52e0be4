// SPDX-License-Identifier: Apache-2.0
//
// covol - zero-forcing SINR fields and coherent-signal volumes for
// distributed-antenna multiuser downlinks
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

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "covol/errors.hpp"

namespace covol {

/// One link-adaptation row: the lowest SINR at which the scheme is usable
/// and the spectral efficiency it then delivers.
struct SeRow {
    double min_sinr_db;
    double se_bps_hz;
    std::string label;
};

/// Ordered SINR -> spectral-efficiency lookup (floor semantics).
struct SeTable {
    std::vector<SeRow> rows;

    void validate() const {
        if (rows.empty()) throw ConfigError("SE table is empty");
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!(rows[i].min_sinr_db > rows[i - 1].min_sinr_db) ||
                !(rows[i].se_bps_hz > rows[i - 1].se_bps_hz)) {
                throw ConfigError("SE table must be strictly increasing in SINR and SE (row " +
                                  std::to_string(i) + ")");
            }
        }
    }
};

/// Built-in table. The 5 dB -> 1.48 bps/Hz row (CQI 7, 16-QAM at 10% BLER)
/// is the anchored operating point; the other rows are conventional LTE
/// CQI calibration data and may be replaced by a user-supplied table.
inline SeTable default_se_table() {
    SeTable t;
    t.rows = {
        {-6.7, 0.1523, "CQI1/QPSK"},   {-4.7, 0.2344, "CQI2/QPSK"},
        {-2.3, 0.3770, "CQI3/QPSK"},   {0.2, 0.6016, "CQI4/QPSK"},
        {2.4, 0.8770, "CQI5/QPSK"},    {4.3, 1.1758, "CQI6/QPSK"},
        {5.0, 1.48, "CQI7/16QAM"},     {7.9, 1.9141, "CQI8/16QAM"},
        {9.8, 2.4063, "CQI9/16QAM"},   {11.7, 2.7305, "CQI10/64QAM"},
        {13.6, 3.3223, "CQI11/64QAM"}, {15.5, 3.9023, "CQI12/64QAM"},
        {17.4, 4.5234, "CQI13/64QAM"}, {19.3, 5.1152, "CQI14/64QAM"},
        {21.2, 5.5547, "CQI15/64QAM"},
    };
    return t;
}

/// Floor lookup: the SE of the highest row whose threshold is at or below
/// the input; 0 below the first row (outage), top-row SE above the last
/// (the device's maximum scheme saturates).
inline double sinr_to_se(double sinr_db, const SeTable& table) {
    table.validate();
    double se = 0.0;
    for (const SeRow& row : table.rows) {
        if (sinr_db >= row.min_sinr_db) {
            se = row.se_bps_hz;
        } else {
            break;
        }
    }
    return se;
}

}  // namespace covol
