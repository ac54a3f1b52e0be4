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

#include <stdexcept>
#include <string>

namespace covol {

/// Base class for all covol exceptions.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Config-file or scenario-description problems (unknown key, bad value,
/// violated scenario invariant). CLI maps these to exit code 2.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Vector/matrix size mismatches.
class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Rank-deficient or numerically unusable channel matrix. Carries the
/// condition estimate that tripped the check. CLI maps to exit code 3.
class SingularChannelError : public Error {
  public:
    SingularChannelError(const std::string& what, double condition)
        : Error(what), condition_estimate(condition) {}
    double condition_estimate;
};

/// User coincident with an antenna or similar zero-distance geometry.
class DegenerateGeometryError : public Error {
  public:
    explicit DegenerateGeometryError(const std::string& what) : Error(what) {}
};

/// Requested computation exceeds a configured resource cap (e.g. grid size).
class ResourceError : public Error {
  public:
    explicit ResourceError(const std::string& what) : Error(what) {}
};

/// Failed file output.
class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace covol
