// Copyright 2026 The qcflate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qcflate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: unparseable text, bad JSON, out-of-range arguments.
class InputError : public Error {
public:
    using Error::Error;
};

/// Well-formed input that violates a semantic constraint (basis, coupling,
/// calibration invariants, unsupported simulation mode).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to converge or lost precision.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace qcflate
