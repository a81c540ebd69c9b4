/*
 * Copyright 2026 The SBSR Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// Retrieval quality measures over class-judged rankings, following the
// Princeton Shape Benchmark conventions.

#ifndef SBSR_METRICS_H_
#define SBSR_METRICS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sbsr/feature_index.h"

namespace sbsr {

inline constexpr std::size_t kPrPoints = 20;  // recall 0.05, 0.10, ..., 1.00
inline constexpr std::size_t kEMeasureDepth = 32;

struct RelevanceJudgedList {
  std::string query_id;
  std::string query_class;
  std::vector<std::uint8_t> rel;  // 1 where the hit at that rank is relevant
  std::size_t relevant_total = 0;  // R: relevant items in the whole gallery

  bool evaluable() const { return relevant_total > 0 && !rel.empty(); }
};

// Judges a complete ranking: a hit is relevant when its class equals
// `query_class`, and R is the number of relevant hits.
RelevanceJudgedList judge(const RankedList& ranked, const std::string& query_class,
                          const std::function<const std::string&(const std::string&)>& class_of);

double average_precision(const RelevanceJudgedList& list);
double nearest_neighbor(const RelevanceJudgedList& list);

struct Tiers {
  double first = 0.0;
  double second = 0.0;
};
Tiers tiers(const RelevanceJudgedList& list);

double e_measure(const RelevanceJudgedList& list);
double ndcg(const RelevanceJudgedList& list);

using PrCurve = std::array<double, kPrPoints>;

// Precision at each relevant hit, made non-increasing by taking the best
// precision at any higher recall, then linearly interpolated onto the
// recall grid. Recall below the first hit keeps the first value; recall
// never reached scores 0.
PrCurve pr_curve(const RelevanceJudgedList& list);
PrCurve mean_pr_curve(std::span<const RelevanceJudgedList> lists);

struct MetricsReport {
  double nn = 0.0;
  double ft = 0.0;
  double st = 0.0;
  double e = 0.0;
  double dcg = 0.0;
  double map = 0.0;
  PrCurve pr{};
  std::size_t queries = 0;   // evaluated
  std::size_t excluded = 0;  // R = 0 or empty ranking

  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

// Means over evaluable queries. Throws Unevaluable when there are none.
MetricsReport evaluate_all(std::span<const RelevanceJudgedList> lists);

}  // namespace sbsr

#endif  // SBSR_METRICS_H_
