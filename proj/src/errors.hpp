// Copyright 2026 The nmgauss Authors
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

// errors.hpp — exception taxonomy shared by all nmgauss modules.
//
// invalid_argument  -> malformed inputs (bad shapes, negative weights, bad CSV)
// domain_error      -> structurally valid inputs outside an operation's domain
//                      (t < t0, evaluation outside a tabulated hull, ...)
// numeric_error     -> a numerical procedure failed to converge to tolerance
// consistency_error -> two independent internal routes disagree beyond tolerance

#pragma once

#include <stdexcept>
#include <string>

namespace nmg {

// Quadrature or iteration failed to reach the requested tolerance.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// Two redundant computations of the same quantity disagree.
class consistency_error : public std::runtime_error {
 public:
  consistency_error(const std::string& what, double discrepancy)
      : std::runtime_error(what), discrepancy_(discrepancy) {}

  double discrepancy() const { return discrepancy_; }

 private:
  double discrepancy_;
};

}  // namespace nmg
