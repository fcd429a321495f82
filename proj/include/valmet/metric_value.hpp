/* Copyright 2026 The valmet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace valmet {

/// Base class of every error the engine raises. NaN metric values are not
/// errors; they are returned as MetricValue with a reason.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument (out-of-range class, beta <= 0, bad cutoff ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Inputs with incompatible shapes (length or dimension mismatch).
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A lookup target outside the span of a curve.
class RangeError : public Error {
 public:
  using Error::Error;
};

enum class NanReason { zero_denominator, empty_set, undefined };

std::string_view to_string(NanReason reason);
NanReason nan_reason_from_string(std::string_view name);

/// A metric value that is either finite/infinite real or NaN with a reason.
struct MetricValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::optional<NanReason> nan_reason = NanReason::undefined;

  static MetricValue of(double v) { return {v, std::nullopt}; }
  static MetricValue nan(NanReason reason) {
    return {std::numeric_limits<double>::quiet_NaN(), reason};
  }

  bool defined() const { return !nan_reason.has_value(); }
  explicit operator bool() const { return defined(); }

  friend bool operator==(const MetricValue& a, const MetricValue& b) {
    if (a.defined() != b.defined()) return false;
    if (!a.defined()) return *a.nan_reason == *b.nan_reason;
    return a.value == b.value;
  }
};

/// num / den, or NaN(zero_denominator) when den == 0.
inline MetricValue ratio(double num, double den) {
  if (den == 0.0) return MetricValue::nan(NanReason::zero_denominator);
  return MetricValue::of(num / den);
}

inline MetricValue ratio(int64_t num, int64_t den) {
  return ratio(static_cast<double>(num), static_cast<double>(den));
}

}  // namespace valmet
