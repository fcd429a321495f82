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

#include "valmet/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <random>

#include "valmet/kernels/parallel.hpp"

namespace valmet {

std::string_view to_string(BinningKind kind) {
  switch (kind) {
    case BinningKind::equal_width: return "equal_width";
    case BinningKind::equal_frequency: return "equal_frequency";
    case BinningKind::custom: return "custom";
  }
  return "equal_width";
}

BinningKind binning_kind_from_string(std::string_view name) {
  for (auto k : {BinningKind::equal_width, BinningKind::equal_frequency, BinningKind::custom}) {
    if (to_string(k) == name) return k;
  }
  throw ParameterError("unknown binning scheme '" + std::string(name) + "'");
}

void BinningScheme::validate() const {
  if (kind != BinningKind::custom) {
    if (n_bins < 1) throw ParameterError("number of bins must be positive");
    return;
  }
  if (edges.size() < 2 || edges.front() != 0.0 || edges.back() != 1.0) {
    throw ParameterError("custom bin edges must start at 0 and end at 1");
  }
  for (size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw ParameterError("bin edges must be strictly increasing");
  }
}

std::vector<double> BinningScheme::resolve(std::span<const double> confidences) const {
  validate();
  if (kind == BinningKind::custom) return edges;
  std::vector<double> e{0.0};
  if (kind == BinningKind::equal_width) {
    for (int b = 1; b < n_bins; ++b) e.push_back(static_cast<double>(b) / n_bins);
  } else if (!confidences.empty()) {
    std::vector<double> sorted(confidences.begin(), confidences.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<int64_t>(sorted.size());
    for (int b = 1; b < n_bins; ++b) {
      const int64_t rank = (static_cast<int64_t>(b) * n + n_bins - 1) / n_bins;  // ceil(b*n/B)
      const double edge = sorted[static_cast<size_t>(std::max<int64_t>(rank, 1) - 1)];
      if (edge > e.back() && edge < 1.0) e.push_back(edge);
    }
  }
  e.push_back(1.0);
  return e;
}

size_t bin_index(std::span<const double> edges, double v) {
  const auto it = std::lower_bound(edges.begin() + 1, edges.end(), v);
  const auto b = static_cast<size_t>(it - (edges.begin() + 1));
  return std::min(b, edges.size() - 2);
}

BinnedCalibration binned_calibration(std::span<const double> confidence,
                                     std::span<const uint8_t> outcome,
                                     const BinningScheme& scheme) {
  if (confidence.size() != outcome.size()) throw ShapeError("confidences and outcomes differ in length");
  for (double c : confidence) {
    if (!(c >= 0.0 && c <= 1.0)) throw ParameterError("confidence outside [0,1]");
  }
  const auto edges = scheme.resolve(confidence);
  const size_t nb = edges.size() - 1;
  std::vector<double> conf_sum(nb, 0.0), hit_sum(nb, 0.0);
  std::vector<int64_t> count(nb, 0);
  for (size_t i = 0; i < confidence.size(); ++i) {
    const size_t b = bin_index(edges, confidence[i]);
    conf_sum[b] += confidence[i];
    hit_sum[b] += outcome[i] ? 1.0 : 0.0;
    ++count[b];
  }
  BinnedCalibration out;
  if (confidence.empty()) {
    out.ece = out.mce = MetricValue::nan(NanReason::empty_set);
  }
  const double n = static_cast<double>(confidence.size());
  double ece = 0.0, mce = 0.0;
  for (size_t b = 0; b < nb; ++b) {
    CalibrationBin bin{edges[b], edges[b + 1], count[b], 0.0, 0.0};
    if (count[b] > 0) {
      const double c = static_cast<double>(count[b]);
      bin.mean_confidence = conf_sum[b] / c;
      bin.accuracy = hit_sum[b] / c;
      const double gap = std::abs(bin.accuracy - bin.mean_confidence);
      ece += c / n * gap;
      mce = std::max(mce, gap);
    }
    out.bins.push_back(bin);
  }
  if (!confidence.empty()) {
    out.ece = MetricValue::of(ece);
    out.mce = MetricValue::of(mce);
  }
  return out;
}

BinnedCalibration ece_mce(std::span<const ClassScores> items, const BinningScheme& scheme) {
  std::vector<double> conf;
  std::vector<uint8_t> correct;
  for (const auto& it : items) {
    it.validate();
    const int k = argmax_class(it.scores);
    conf.push_back(it.scores[static_cast<size_t>(k)]);
    correct.push_back(k == it.ref_class ? 1 : 0);
  }
  return binned_calibration(conf, correct, scheme);
}

MetricValue cwce(std::span<const ClassScores> items, const BinningScheme& scheme) {
  if (items.empty()) return MetricValue::nan(NanReason::empty_set);
  const int c = items.front().num_classes();
  for (const auto& it : items) {
    it.validate();
    if (it.num_classes() != c) throw ShapeError("items disagree on the number of classes");
  }
  double sum = 0.0;
  std::vector<double> conf(items.size());
  std::vector<uint8_t> hit(items.size());
  for (int k = 0; k < c; ++k) {
    for (size_t i = 0; i < items.size(); ++i) {
      conf[i] = items[i].scores[static_cast<size_t>(k)];
      hit[i] = items[i].ref_class == k ? 1 : 0;
    }
    sum += binned_calibration(conf, hit, scheme).ece.value;
  }
  return MetricValue::of(sum / c);
}

CanonicalCalibration canonical_ce_exact(std::span<const ClassScores> items) {
  CanonicalCalibration out;
  if (items.empty()) {
    out.value = MetricValue::nan(NanReason::empty_set);
    return out;
  }
  const size_t c = items.front().scores.size();
  std::map<std::vector<double>, std::vector<int64_t>> groups;
  for (const auto& it : items) {
    it.validate();
    if (it.scores.size() != c) throw ShapeError("items disagree on the number of classes");
    auto& counts = groups[it.scores];
    counts.resize(c, 0);
    ++counts[static_cast<size_t>(it.ref_class)];
  }
  const double n = static_cast<double>(items.size());
  double total = 0.0;
  for (const auto& [scores, counts] : groups) {
    CanonicalGroup g;
    g.scores = scores;
    for (int64_t k : counts) g.count += k;
    for (size_t k = 0; k < c; ++k) {
      g.empirical.push_back(static_cast<double>(counts[k]) / static_cast<double>(g.count));
      g.l1 += std::abs(scores[k] - g.empirical.back());
    }
    total += static_cast<double>(g.count) / n * 0.5 * g.l1;
    out.groups.push_back(std::move(g));
  }
  out.value = MetricValue::of(total);
  return out;
}

ProperScores proper_scores(std::span<const ClassScores> items) {
  ProperScores out;
  if (items.empty()) {
    out.brier = out.nll = MetricValue::nan(NanReason::empty_set);
    return out;
  }
  double brier = 0.0, nll = 0.0;
  for (const auto& it : items) {
    it.validate();
    for (int k = 0; k < it.num_classes(); ++k) {
      const double d = it.scores[static_cast<size_t>(k)] - (k == it.ref_class ? 1.0 : 0.0);
      brier += d * d;
    }
    const double p = it.scores[static_cast<size_t>(it.ref_class)];
    if (p <= 0.0) {
      out.nll_infinite = true;
    } else {
      nll -= std::log(p);
    }
  }
  const double n = static_cast<double>(items.size());
  out.brier = MetricValue::of(brier / n);
  out.nll = MetricValue::of(out.nll_infinite ? std::numeric_limits<double>::infinity() : nll / n);
  return out;
}

namespace {

double one_trial(int64_t n, uint64_t seed, int64_t trial, const BinningScheme& scheme) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(trial), static_cast<uint32_t>(trial >> 32)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> conf(static_cast<size_t>(n));
  std::vector<uint8_t> outcome(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    conf[static_cast<size_t>(i)] = unif(gen);
    outcome[static_cast<size_t>(i)] = unif(gen) < conf[static_cast<size_t>(i)] ? 1 : 0;
  }
  return binned_calibration(conf, outcome, scheme).ece.value;
}

void check_sim_args(int64_t n, int64_t trials) {
  if (n < 1) throw ParameterError("simulation needs n >= 1");
  if (trials < 1) throw ParameterError("simulation needs at least one trial");
}

}  // namespace

double calibration_bias_sim(int64_t n, int64_t trials, uint64_t seed, int n_bins) {
  check_sim_args(n, trials);
  const BinningScheme scheme{BinningKind::equal_width, n_bins, {}};
  std::vector<double> ece(static_cast<size_t>(trials));
  kernels::parallel_for(trials, [&](int64_t t) {
    ece[static_cast<size_t>(t)] = one_trial(n, seed, t, scheme);
  });
  double sum = 0.0;
  for (double e : ece) sum += e;
  return sum / static_cast<double>(trials);
}

double calibration_bias_sim_serial(int64_t n, int64_t trials, uint64_t seed, int n_bins) {
  check_sim_args(n, trials);
  const BinningScheme scheme{BinningKind::equal_width, n_bins, {}};
  double sum = 0.0;
  for (int64_t t = 0; t < trials; ++t) sum += one_trial(n, seed, t, scheme);
  return sum / static_cast<double>(trials);
}

}  // namespace valmet
