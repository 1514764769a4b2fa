// Copyright 2026 The qndm-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNDM_ERROR_HPP
#define QNDM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qndm {

/// Invalid user-facing configuration (bad sizes, empty grids, lambda = 0, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (dimension or index mismatch).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Normalization calibration did not converge.
struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A closed-form variance was requested at a point where it diverges.
struct SingularError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Filesystem or parse failure on an input/output artifact.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string &what) {
    if (!ok) {
        throw ContractError(what);
    }
}

inline void require_config(bool ok, const std::string &what) {
    if (!ok) {
        throw ConfigError(what);
    }
}

}  // namespace qndm

#endif
