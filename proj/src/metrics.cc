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


#include "sbsr/metrics.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "sbsr/errors.h"

namespace sbsr {
namespace {

double recall_grid(std::size_t k) { return static_cast<double>(k + 1) / kPrPoints; }

}  // namespace

RelevanceJudgedList judge(const RankedList& ranked, const std::string& query_class,
                          const std::function<const std::string&(const std::string&)>& class_of) {
  RelevanceJudgedList out{ranked.query_id, query_class, {}, 0};
  out.rel.reserve(ranked.hits.size());
  for (const Hit& h : ranked.hits) {
    const bool relevant = class_of(h.target_id) == query_class;
    out.rel.push_back(relevant ? 1 : 0);
    out.relevant_total += relevant ? 1 : 0;
  }
  return out;
}

double average_precision(const RelevanceJudgedList& list) {
  double sum = 0.0;
  std::size_t found = 0;
  for (std::size_t k = 0; k < list.rel.size(); ++k) {
    if (!list.rel[k]) continue;
    ++found;
    sum += static_cast<double>(found) / static_cast<double>(k + 1);
  }
  return list.relevant_total == 0 ? 0.0 : sum / static_cast<double>(list.relevant_total);
}

double nearest_neighbor(const RelevanceJudgedList& list) {
  return !list.rel.empty() && list.rel.front() ? 1.0 : 0.0;
}

Tiers tiers(const RelevanceJudgedList& list) {
  const std::size_t r = list.relevant_total;
  if (r == 0) return {};
  std::size_t in_first = 0;
  std::size_t in_second = 0;
  for (std::size_t k = 0; k < list.rel.size() && k < 2 * r; ++k) {
    if (!list.rel[k]) continue;
    ++in_second;
    if (k < r) ++in_first;
  }
  const double denom = static_cast<double>(r);
  return {static_cast<double>(in_first) / denom,
          std::min(1.0, static_cast<double>(in_second) / denom)};
}

double e_measure(const RelevanceJudgedList& list) {
  const std::size_t depth = std::min(kEMeasureDepth, list.rel.size());
  if (depth == 0 || list.relevant_total == 0) return 0.0;
  const auto hits = static_cast<double>(std::count(list.rel.begin(), list.rel.begin() + static_cast<long>(depth), 1));
  const double p = hits / static_cast<double>(depth);
  const double r = hits / static_cast<double>(list.relevant_total);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double ndcg(const RelevanceJudgedList& list) {
  if (list.relevant_total == 0) return 0.0;
  auto discount = [](std::size_t rank) {  // rank is 1-based
    return rank == 1 ? 1.0 : 1.0 / std::log2(static_cast<double>(rank));
  };
  double dcg = 0.0;
  for (std::size_t k = 0; k < list.rel.size(); ++k) {
    if (list.rel[k]) dcg += discount(k + 1);
  }
  double ideal = 0.0;
  for (std::size_t k = 1; k <= list.relevant_total; ++k) ideal += discount(k);
  return dcg / ideal;
}

PrCurve pr_curve(const RelevanceJudgedList& list) {
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t found = 0;
  for (std::size_t k = 0; k < list.rel.size(); ++k) {
    if (!list.rel[k]) continue;
    ++found;
    recall.push_back(static_cast<double>(found) / static_cast<double>(list.relevant_total));
    precision.push_back(static_cast<double>(found) / static_cast<double>(k + 1));
  }
  PrCurve curve{};
  if (recall.empty()) return curve;
  for (std::size_t i = precision.size() - 1; i-- > 0;) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }
  std::size_t seg = 0;
  for (std::size_t g = 0; g < kPrPoints; ++g) {
    const double r = recall_grid(g);
    if (r <= recall.front()) {
      curve[g] = precision.front();
      continue;
    }
    if (r > recall.back()) break;  // remaining grid points stay 0
    while (recall[seg + 1] < r) ++seg;
    const double t = (r - recall[seg]) / (recall[seg + 1] - recall[seg]);
    curve[g] = precision[seg] + t * (precision[seg + 1] - precision[seg]);
  }
  return curve;
}

PrCurve mean_pr_curve(std::span<const RelevanceJudgedList> lists) {
  PrCurve mean{};
  std::size_t used = 0;
  for (const RelevanceJudgedList& list : lists) {
    if (!list.evaluable()) continue;
    const PrCurve c = pr_curve(list);
    for (std::size_t g = 0; g < kPrPoints; ++g) mean[g] += c[g];
    ++used;
  }
  if (used > 0) {
    for (double& v : mean) v /= static_cast<double>(used);
  }
  return mean;
}

MetricsReport evaluate_all(std::span<const RelevanceJudgedList> lists) {
  MetricsReport report;
  for (const RelevanceJudgedList& list : lists) {
    if (!list.evaluable()) {
      ++report.excluded;
      continue;
    }
    ++report.queries;
    report.nn += nearest_neighbor(list);
    const Tiers t = tiers(list);
    report.ft += t.first;
    report.st += t.second;
    report.e += e_measure(list);
    report.dcg += ndcg(list);
    report.map += average_precision(list);
  }
  if (report.queries == 0) {
    throw Unevaluable("no evaluable queries (" + std::to_string(report.excluded) +
                      " excluded)");
  }
  const auto n = static_cast<double>(report.queries);
  for (double* v : {&report.nn, &report.ft, &report.st, &report.e, &report.dcg, &report.map}) {
    *v /= n;
  }
  report.pr = mean_pr_curve(lists);
  return report;
}

nlohmann::ordered_json MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["NN"] = nn;
  j["FT"] = ft;
  j["ST"] = st;
  j["E"] = e;
  j["DCG"] = dcg;
  j["mAP"] = map;
  j["PR"] = pr;
  j["queries"] = queries;
  j["excluded"] = excluded;
  return j;
}

std::string MetricsReport::to_table() const {
  std::string out = fmt::format("{:>8}{:>8}{:>8}{:>8}{:>8}{:>8}\n", "NN", "FT", "ST", "E",
                                "DCG", "mAP");
  out += fmt::format("{:>8.3f}{:>8.3f}{:>8.3f}{:>8.3f}{:>8.3f}{:>8.3f}\n", nn, ft, st, e,
                     dcg, map);
  out += "\nrecall   precision\n";
  for (std::size_t g = 0; g < kPrPoints; ++g) {
    out += fmt::format("{:>6.2f}   {:.3f}\n", recall_grid(g), pr[g]);
  }
  out += fmt::format("\n{} queries evaluated, {} excluded\n", queries, excluded);
  return out;
}

}  // namespace sbsr
