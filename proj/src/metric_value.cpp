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

#include "valmet/metric_value.hpp"

namespace valmet {

std::string_view to_string(NanReason reason) {
  switch (reason) {
    case NanReason::zero_denominator:
      return "zero_denominator";
    case NanReason::empty_set:
      return "empty_set";
    case NanReason::undefined:
      return "undefined";
  }
  return "undefined";
}

NanReason nan_reason_from_string(std::string_view name) {
  if (name == "zero_denominator") return NanReason::zero_denominator;
  if (name == "empty_set") return NanReason::empty_set;
  if (name == "undefined") return NanReason::undefined;
  throw ParameterError("unknown NaN reason '" + std::string(name) + "'");
}

}  // namespace valmet
