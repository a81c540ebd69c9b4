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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <spdlog/spdlog.h>
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sbsr/binary_io.h"
#include "sbsr/feature_index.h"
#include "sbsr/image.h"
#include "sbsr/loss.h"
#include "sbsr/metrics.h"
#include "sbsr/network.h"
#include "sbsr/pairs.h"
#include "sbsr/pipeline.h"
#include "support/generators.h"
#include "support/oracles.h"

namespace {

using namespace sbsr;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> check;  // fills a one-line detail
};

bool gradient_suite(std::string& detail) {
  const auto start = Clock::now();
  const std::string cmd = std::string(SBSR_UNIT_TESTS) +
                          " --gtest_filter='*FiniteDifferences*' --gtest_brief=1 >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const double elapsed = seconds_since(start);
  const bool ok = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  detail = fmt::format("finite-difference tests {} in {:.1f} s", ok ? "passed" : "failed", elapsed);
  return ok && elapsed < 60.0;
}

bool architecture(std::string& detail) {
  const auto params = NetworkParams<float>::initialized(1);
  std::mt19937_64 rng(1);
  ForwardTrace<float> trace;
  const Tensor out =
      net_forward(params, testing_support::random_tensor<float>({1, 100, 100}, rng, 0, 1), &trace);
  detail = fmt::format("{} {} {} -> {}", to_string(trace.pooled[0].shape()),
                       to_string(trace.pooled[1].shape()), to_string(trace.pooled[2].shape()),
                       to_string(out.shape()));
  return trace.pooled[0].shape() == Shape{32, 22, 22} &&
         trace.pooled[1].shape() == Shape{64, 8, 8} &&
         trace.pooled[2].shape() == Shape{256, 3, 3} && out.shape() == Shape{64};
}

bool loss_identities(std::string& detail) {
  std::mt19937_64 rng(2);
  const auto f = testing_support::random_vector(64, rng, -1, 1);
  auto g = f;
  g[0] += 1.0;
  g[5] -= 1.0;  // L1 distance 2
  const double same_similar = contrastive_loss<double>(f, f, PairLabel::kSimilar).loss;
  const double same_dissimilar = contrastive_loss<double>(f, f, PairLabel::kDissimilar).loss;
  const double at_two = contrastive_loss<double>(f, g, PairLabel::kSimilar).loss;
  const double combined = combined_loss<double>(f, f, f, f, PairLabel::kDissimilar).loss;
  detail = fmt::format("L(f,f,0)={} L(f,f,1)={} L(D=2,0)={} combined={}", same_similar,
                       same_dissimilar, at_two, combined);
  return std::abs(same_similar) <= 1e-6 && std::abs(same_dissimilar - 10.0) <= 1e-6 &&
         std::abs(at_two - 20.0) <= 1e-6 && std::abs(combined - 30.0) <= 1e-6;
}

RelevanceJudgedList judged(const std::vector<int>& rel) {
  RelevanceJudgedList l;
  for (int r : rel) {
    l.rel.push_back(static_cast<std::uint8_t>(r));
    l.relevant_total += static_cast<std::size_t>(r);
  }
  return l;
}

bool metric_oracle(std::string& detail) {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    std::vector<int> rel(n);
    for (int& r : rel) r = static_cast<int>(rng() % 2);
    rel[rng() % n] = 1;
    const auto l = judged(rel);
    const oracle::Metrics o = oracle::metrics(rel);
    const PrCurve pr = pr_curve(l);
    for (double diff : {nearest_neighbor(l) - o.nn, tiers(l).first - o.ft, tiers(l).second - o.st,
                        e_measure(l) - o.e, ndcg(l) - o.dcg, average_precision(l) - o.ap}) {
      worst = std::max(worst, std::abs(diff));
    }
    for (std::size_t g = 0; g < kPrPoints; ++g) worst = std::max(worst, std::abs(pr[g] - o.pr[g]));
  }
  const auto fixture = judged({1, 0, 1, 0, 0});
  const double ap = average_precision(fixture);
  const Tiers t = tiers(fixture);
  const double dcg = ndcg(fixture);
  detail = fmt::format("max deviation {:.2e} over 100 instances; fixture AP {:.4f} FT {} ST {} NDCG {:.4f}",
                       worst, ap, t.first, t.second, dcg);
  return worst <= 1e-9 && std::abs(ap - 0.8333) < 5e-5 && t.first == 0.5 && t.second == 1.0 &&
         std::abs(dcg - 0.8155) < 5e-5;
}

bool toy_end_to_end(std::string& detail) {
  testing_support::TempDir dir;
  const auto start = Clock::now();
  generate_toy_dataset(dir.path(), {7, 40, 10});
  TrainConfig config;
  config.manifest = dir / "train.jsonl";
  config.checkpoint = dir / "toy.ckpt";
  config.epochs = 5;
  config.seed = 1;
  const auto log = run_train(config);
  run_extract(config.checkpoint, dir / "test.jsonl", dir / "toy.idx");
  const MetricsReport cross = run_eval(dir / "toy.idx", dir / "test.jsonl", EvalMode::kCross);
  const MetricsReport view = run_eval(dir / "toy.idx", dir / "test.jsonl", EvalMode::kView);
  const double elapsed = seconds_since(start);

  std::string losses;
  bool decreasing = true;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const double loss = log[i]["mean_loss"].get<double>();
    losses += fmt::format("{}{:.2f}", i ? " " : "", loss);
    if (i > 0 && loss >= log[i - 1]["mean_loss"].get<double>()) decreasing = false;
  }
  fmt::print("INFO  toy epoch losses [{}] {}\n", losses,
             decreasing ? "strictly decreasing" : "not strictly decreasing");
  detail = fmt::format("cross NN {:.3f} mAP {:.3f}, view NN {:.3f}, {:.0f} s", cross.nn, cross.map,
                       view.nn, elapsed);
  return cross.nn >= 0.90 && cross.map >= 0.80 && view.nn >= 0.95 && elapsed < 600.0;
}

bool pair_arithmetic(std::string& detail) {
  DatasetManifest m;
  for (int c = 0; c < 2; ++c) {
    const std::string cls = "c" + std::to_string(c);
    for (int s = 0; s < 5; ++s) m.entries.push_back({cls + "_s" + std::to_string(s), cls, Domain::kSketch, "x", {}});
    m.entries.push_back({cls + "_v1", cls, Domain::kView, "x", cls});
    m.entries.push_back({cls + "_v2", cls, Domain::kView, "x", cls});
  }
  std::mt19937_64 rng(4);
  const auto pairs = sample_pairs(m, 2, 20, rng);
  std::size_t similar = 0;
  for (const PairSpec& p : pairs) similar += p.y == PairLabel::kSimilar;
  detail = fmt::format("{} pairs, {} dissimilar : {} similar", pairs.size(), pairs.size() - similar,
                       similar);
  return pairs.size() == 220 && similar == 20;
}

bool latency(std::string& detail) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  const SiameseModel model = SiameseModel::create(5);
  FeatureIndex index;
  for (int m = 0; m < 5000; ++m) {
    for (int v = 1; v <= 2; ++v) {
      IndexEntry e{"m" + std::to_string(m) + "_v" + std::to_string(v), "c", Domain::kView,
                   "m" + std::to_string(m), {}};
      for (float& x : e.feature) x = u(rng);
      index.entries.push_back(std::move(e));
    }
  }
  const ModelGallery gallery(index);
  std::vector<GrayImage> queries;
  for (int i = 0; i < 21; ++i) queries.push_back(testing_support::random_sketch(rng));
  std::vector<double> ms;
  std::size_t top = 0;
  for (const GrayImage& q : queries) {
    const auto start = Clock::now();
    const Feature f = embed(model.sketch_net(), preprocess(q));
    const RankedList ranked = gallery.rank(f);
    ms.push_back(seconds_since(start) * 1000.0);
    top += ranked.hits.size();
  }
  std::sort(ms.begin(), ms.end());
  detail = fmt::format("{} entries; preprocess+embed+rank median {:.2f} ms, max {:.2f} ms",
                       index.entries.size(), ms[ms.size() / 2], ms.back());
  return top == queries.size() * 5000 && ms[ms.size() / 2] < 10.0;
}

bool determinism(std::string& detail) {
  testing_support::TempDir dir;
  std::string index_bytes[2];
  std::string metrics_json[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path root = dir / ("run" + std::to_string(run));
    generate_toy_dataset(root, {11, 6, 2});
    TrainConfig config;
    config.manifest = root / "train.jsonl";
    config.checkpoint = root / "m.ckpt";
    config.epochs = 2;
    config.seed = 3;
    run_train(config);
    run_extract(config.checkpoint, root / "test.jsonl", root / "m.idx");
    index_bytes[run] = read_file_bytes(root / "m.idx");
    metrics_json[run] = run_eval(root / "m.idx", root / "test.jsonl", EvalMode::kCross).to_json().dump();
  }
  const bool same_index = index_bytes[0] == index_bytes[1];
  const bool same_metrics = metrics_json[0] == metrics_json[1];
  detail = fmt::format("index bytes {}, metric JSON {}", same_index ? "identical" : "differ",
                       same_metrics ? "identical" : "differ");
  return same_index && same_metrics;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<Criterion> criteria = {
      {"gradient suite", gradient_suite},
      {"architecture conformance", architecture},
      {"loss identities", loss_identities},
      {"metric oracle equivalence", metric_oracle},
      {"toy end-to-end", toy_end_to_end},
      {"pair-sampling arithmetic", pair_arithmetic},
      {"retrieval latency", latency},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    fmt::print("{}  {}: {}\n", ok ? "PASS" : "FAIL", c.name, detail);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
