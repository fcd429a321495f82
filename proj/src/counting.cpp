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

#include "valmet/counting.hpp"

#include <cmath>
#include <cstdlib>

namespace valmet {

CostMatrix::CostMatrix(int num_classes) : classes_(num_classes) {
  if (num_classes < 2) throw ParameterError("cost matrix needs C >= 2");
  values_.assign(static_cast<size_t>(num_classes) * num_classes, 1.0);
  for (int k = 0; k < num_classes; ++k) values_[static_cast<size_t>(k) * num_classes + k] = 0.0;
}

CostMatrix::CostMatrix(int num_classes, std::vector<double> row_major)
    : classes_(num_classes), values_(std::move(row_major)) {
  if (num_classes < 2) throw ParameterError("cost matrix needs C >= 2");
  if (values_.size() != static_cast<size_t>(num_classes) * num_classes) {
    throw ShapeError("cost matrix expects C*C entries");
  }
  for (double v : values_) {
    if (!(v >= 0.0) || std::isinf(v)) throw ParameterError("costs must be finite and non-negative");
  }
}

CostMatrix CostMatrix::ordinal(int num_classes) {
  std::vector<double> v;
  for (int i = 0; i < num_classes; ++i)
    for (int j = 0; j < num_classes; ++j) v.push_back(std::abs(i - j));
  return CostMatrix(num_classes, std::move(v));
}

CostMatrix CostMatrix::quadratic(int num_classes) {
  std::vector<double> v;
  const double span = num_classes - 1;
  for (int i = 0; i < num_classes; ++i)
    for (int j = 0; j < num_classes; ++j) v.push_back(((i - j) / span) * ((i - j) / span));
  return CostMatrix(num_classes, std::move(v));
}

MetricValue sensitivity(const BinaryConfusion& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
MetricValue specificity(const BinaryConfusion& cm) { return ratio(cm.tn, cm.tn + cm.fp); }
MetricValue ppv(const BinaryConfusion& cm) { return ratio(cm.tp, cm.tp + cm.fp); }
MetricValue npv(const BinaryConfusion& cm) { return ratio(cm.tn, cm.tn + cm.fn); }

MetricValue accuracy(const BinaryConfusion& cm) {
  if (cm.total() == 0) return MetricValue::nan(NanReason::empty_set);
  return ratio(cm.tp + cm.tn, cm.total());
}

PerClassRates per_class_rates(const BinaryConfusion& cm) {
  return {sensitivity(cm), specificity(cm), ppv(cm), npv(cm)};
}

MetricValue f_beta(const BinaryConfusion& cm, double beta) {
  if (!(beta > 0.0) || std::isinf(beta)) throw ParameterError("beta must be positive");
  const double b2 = beta * beta;
  const double tp = static_cast<double>(cm.tp);
  return ratio((1.0 + b2) * tp, (1.0 + b2) * tp + b2 * static_cast<double>(cm.fn) +
                                    static_cast<double>(cm.fp));
}

MetricValue lr_plus(const BinaryConfusion& cm) {
  const MetricValue sens = sensitivity(cm);
  if (!sens) return sens;
  const MetricValue spec = specificity(cm);
  if (!spec) return spec;
  return ratio(sens.value, 1.0 - spec.value);
}

PredictiveValues prevalence_corrected_pv(double sens, double spec, double prevalence) {
  for (double v : {sens, spec, prevalence}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("rates and prevalence must lie in [0,1]");
  }
  PredictiveValues pv;
  // Without positives (negatives) in the population the positive (negative)
  // predictive value is reported as undefined rather than a degenerate 0.
  if (prevalence == 0.0) {
    pv.ppv = MetricValue::nan(NanReason::empty_set);
  } else {
    pv.ppv = ratio(sens * prevalence, sens * prevalence + (1.0 - spec) * (1.0 - prevalence));
  }
  if (prevalence == 1.0) {
    pv.npv = MetricValue::nan(NanReason::empty_set);
  } else {
    pv.npv = ratio(spec * (1.0 - prevalence), spec * (1.0 - prevalence) + (1.0 - sens) * prevalence);
  }
  return pv;
}

MultiClassSummary multiclass_summary(const MultiConfusion& m) {
  MultiClassSummary s;
  const int64_t total = m.total();
  if (total == 0) {
    s.accuracy = s.balanced_accuracy = s.youden_j = MetricValue::nan(NanReason::empty_set);
    return s;
  }
  s.accuracy = ratio(m.trace(), total);
  double sum = 0.0;
  int used = 0;
  for (int k = 0; k < m.num_classes(); ++k) {
    const int64_t row = m.row_sum(k);
    if (row == 0) {
      s.excluded_classes.push_back(k);
      continue;
    }
    sum += static_cast<double>(m.at(k, k)) / static_cast<double>(row);
    ++used;
  }
  s.balanced_accuracy = ratio(sum, static_cast<double>(used));
  if (s.balanced_accuracy) {
    s.youden_j = MetricValue::of(2.0 * s.balanced_accuracy.value - 1.0);
  } else {
    s.youden_j = s.balanced_accuracy;
  }
  return s;
}

MetricValue mcc(const MultiConfusion& m) {
  const double s = static_cast<double>(m.total());
  if (s == 0.0) return MetricValue::nan(NanReason::empty_set);
  const double c = static_cast<double>(m.trace());
  double pt = 0.0, pp = 0.0, tt = 0.0;
  for (int k = 0; k < m.num_classes(); ++k) {
    const double p = static_cast<double>(m.col_sum(k));
    const double t = static_cast<double>(m.row_sum(k));
    pt += p * t;
    pp += p * p;
    tt += t * t;
  }
  const double a = s * s - pp;
  const double b = s * s - tt;
  if (a == 0.0 || b == 0.0) return MetricValue::nan(NanReason::zero_denominator);
  return MetricValue::of((c * s - pt) / std::sqrt(a * b));
}

MetricValue mcc(const BinaryConfusion& cm) {
  const double tp = static_cast<double>(cm.tp), tn = static_cast<double>(cm.tn);
  const double fp = static_cast<double>(cm.fp), fn = static_cast<double>(cm.fn);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return MetricValue::nan(NanReason::zero_denominator);
  return MetricValue::of((tp * tn - fp * fn) / std::sqrt(den));
}

MetricValue kappa(const MultiConfusion& m, const std::optional<CostMatrix>& weights) {
  const int c = m.num_classes();
  if (weights && weights->num_classes() != c) {
    throw ShapeError("weight matrix does not match the confusion matrix");
  }
  const double total = static_cast<double>(m.total());
  if (total == 0.0) return MetricValue::nan(NanReason::empty_set);

  std::vector<double> rows(c), cols(c);
  for (int k = 0; k < c; ++k) {
    rows[k] = static_cast<double>(m.row_sum(k));
    cols[k] = static_cast<double>(m.col_sum(k));
  }
  if (!weights) {
    const double po = static_cast<double>(m.trace()) / total;
    double pe = 0.0;
    for (int k = 0; k < c; ++k) pe += rows[k] * cols[k];
    pe /= total * total;
    if (pe == 1.0) return MetricValue::nan(NanReason::zero_denominator);
    return MetricValue::of((po - pe) / (1.0 - pe));
  }
  double observed = 0.0, expected = 0.0;
  for (int i = 0; i < c; ++i) {
    for (int j = 0; j < c; ++j) {
      observed += weights->at(i, j) * static_cast<double>(m.at(i, j));
      expected += weights->at(i, j) * rows[i] * cols[j] / total;
    }
  }
  if (expected == 0.0) return MetricValue::nan(NanReason::zero_denominator);
  return MetricValue::of(1.0 - observed / expected);
}

ExpectedCost expected_cost(const MultiConfusion& m, const CostMatrix& costs,
                           std::optional<std::span<const double>> priors) {
  const int c = m.num_classes();
  if (costs.num_classes() != c) throw ShapeError("cost matrix does not match the confusion matrix");
  if (priors) {
    if (static_cast<int>(priors->size()) != c) throw ShapeError("one prior per class expected");
    double sum = 0.0;
    for (double p : *priors) {
      if (!(p >= 0.0)) throw ParameterError("priors must be non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ParameterError("priors must sum to 1");
  }
  ExpectedCost ec;
  const double total = static_cast<double>(m.total());
  if (total == 0.0) {
    ec.value = MetricValue::nan(NanReason::empty_set);
    return ec;
  }
  double sum = 0.0;
  for (int i = 0; i < c; ++i) {
    const double row = static_cast<double>(m.row_sum(i));
    if (row == 0.0) {
      ec.excluded_classes.push_back(i);
      continue;
    }
    const double prior = priors ? (*priors)[i] : row / total;
    double risk = 0.0;
    for (int j = 0; j < c; ++j) risk += costs.at(i, j) * static_cast<double>(m.at(i, j)) / row;
    sum += prior * risk;
  }
  ec.value = MetricValue::of(sum);
  return ec;
}

MetricValue net_benefit(const BinaryConfusion& cm, double threshold_probability) {
  const double pt = threshold_probability;
  if (!(pt > 0.0 && pt < 1.0)) throw ParameterError("threshold probability must lie in (0,1)");
  const double n = static_cast<double>(cm.total());
  if (n == 0.0) return MetricValue::nan(NanReason::empty_set);
  return MetricValue::of(static_cast<double>(cm.tp) / n -
                         static_cast<double>(cm.fp) / n * (pt / (1.0 - pt)));
}

}  // namespace valmet
