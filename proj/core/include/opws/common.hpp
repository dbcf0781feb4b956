// Copyright 2026 The opws Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared numeric types and the error hierarchy used across the library.

#ifndef OPWS_COMMON_HPP_
#define OPWS_COMMON_HPP_

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace opws {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e^{2 pi i x}
inline cplx cis2pi(double x) {
  const double a = kTwoPi * x;
  return {std::cos(a), std::sin(a)};
}

/// Normalized sinc, sin(pi x) / (pi x).
inline double sinc(double x) {
  if (std::abs(x) < 1e-8) {
    const double px = kPi * x;
    return 1.0 - px * px / 6.0;
  }
  return std::sin(kPi * x) / (kPi * x);
}

// Inputs violate a precondition: grid mismatch, insufficient coverage,
// out-of-range parameters.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SizeMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A linear system is singular or its condition exceeds the configured cap.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace opws

#endif  // OPWS_COMMON_HPP_
