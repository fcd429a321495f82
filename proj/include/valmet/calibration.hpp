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

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "valmet/confusion.hpp"
#include "valmet/metric_value.hpp"

namespace valmet {

enum class BinningKind { equal_width, equal_frequency, custom };

std::string_view to_string(BinningKind kind);
BinningKind binning_kind_from_string(std::string_view name);

/// Bins are (lo, hi] except the first, which is [lo, hi].
struct BinningScheme {
  BinningKind kind = BinningKind::equal_width;
  int n_bins = 10;
  std::vector<double> edges;  // custom only: strictly increasing, 0 ... 1

  void validate() const;
  /// Concrete edges. equal_frequency places edge b at the ceil(b*n/B)-th
  /// smallest confidence and drops duplicates, so it may yield fewer bins.
  std::vector<double> resolve(std::span<const double> confidences) const;
};

/// Index of the bin holding `v` under the convention above.
size_t bin_index(std::span<const double> edges, double v);

struct CalibrationBin {
  double lo = 0.0;
  double hi = 0.0;
  int64_t count = 0;
  double mean_confidence = 0.0;
  double accuracy = 0.0;
};

struct BinnedCalibration {
  MetricValue ece;
  MetricValue mce;
  std::vector<CalibrationBin> bins;
};

/// ECE/MCE of confidences against 0/1 outcomes. Empty bins are skipped.
BinnedCalibration binned_calibration(std::span<const double> confidence,
                                     std::span<const uint8_t> outcome,
                                     const BinningScheme& scheme);

/// Top-label ECE/MCE: confidence is the max score, correct when the arg-max
/// (lowest class on ties) equals the reference.
BinnedCalibration ece_mce(std::span<const ClassScores> items, const BinningScheme& scheme);

/// Mean over classes of the per-class binned error of score_k against the
/// indicator of class k.
MetricValue cwce(std::span<const ClassScores> items, const BinningScheme& scheme);

struct CanonicalGroup {
  std::vector<double> scores;
  int64_t count = 0;
  std::vector<double> empirical;  // class frequencies within the group
  double l1 = 0.0;
};

struct CanonicalCalibration {
  /// Size-weighted half L1 distance (total variation), in [0,1].
  MetricValue value;
  std::vector<CanonicalGroup> groups;  // sorted by score vector
};

/// Groups items by exact score vector.
CanonicalCalibration canonical_ce_exact(std::span<const ClassScores> items);

struct ProperScores {
  MetricValue brier;  // multi-class sum over classes, in [0,2]
  MetricValue nll;
  bool nll_infinite = false;  // some true-class score was 0
};

ProperScores proper_scores(std::span<const ClassScores> items);

/// Mean equal-width ECE of a perfectly calibrated model: confidences are
/// uniform on [0,1], outcomes Bernoulli(confidence). Trial t draws from its
/// own generator seeded by (seed, t), so the result does not depend on the
/// number of threads.
double calibration_bias_sim(int64_t n, int64_t trials, uint64_t seed, int n_bins = 10);
double calibration_bias_sim_serial(int64_t n, int64_t trials, uint64_t seed, int n_bins = 10);

}  // namespace valmet
