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

#include "sbsr/trainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "sbsr/errors.h"
#include "sbsr/parallel.h"

namespace sbsr {
namespace {

// Images per backward chunk. Fixed so the reduction order is independent
// of the worker count.
constexpr std::size_t kBackwardChunk = 8;

struct BatchImage {
  Domain domain;
  std::uint32_t index;
};

Domain branch_domain(Branch b) {
  return (b == Branch::kSketch1 || b == Branch::kSketch2) ? Domain::kSketch
                                                          : Domain::kView;
}

// Deduplicates the images referenced by a minibatch.
class BatchImages {
 public:
  std::size_t slot_of(Domain d, std::uint32_t index) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(d) << 32) | static_cast<std::uint64_t>(index);
    auto [it, inserted] = slots_.try_emplace(key, items_.size());
    if (inserted) items_.push_back({d, index});
    return it->second;
  }
  const std::vector<BatchImage>& items() const { return items_; }

 private:
  std::unordered_map<std::uint64_t, std::size_t> slots_;
  std::vector<BatchImage> items_;
};

const Tensor& image_for(const ImageBank& bank, const BatchImage& item) {
  const auto& pool = item.domain == Domain::kSketch ? bank.sketches : bank.views;
  if (item.index >= pool.size()) {
    throw std::out_of_range("pair references " +
                            std::string(domain_name(item.domain)) + " image " +
                            std::to_string(item.index) + " of " +
                            std::to_string(pool.size()));
  }
  return pool[item.index];
}

}  // namespace

EpochStats train_epoch(SiameseModel& model, const ImageBank& images,
                       std::span<const PairRecord> pairs, float learning_rate,
                       const TrainOptions& options, std::mt19937_64& rng,
                       std::size_t epoch_index) {
  if (options.batch_size == 0) {
    throw std::invalid_argument("train_epoch: batch size must be positive");
  }
  EpochStats stats;
  stats.epoch = epoch_index;
  if (pairs.empty()) return stats;

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  const std::vector<LossTerm> terms = loss_terms(options.loss);
  double total_loss = 0.0;

  for (std::size_t begin = 0; begin < order.size(); begin += options.batch_size) {
    const std::size_t end = std::min(order.size(), begin + options.batch_size);

    BatchImages batch;
    std::vector<std::array<std::size_t, 4>> pair_slots;
    pair_slots.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
      const PairRecord& p = pairs[order[k]];
      pair_slots.push_back({batch.slot_of(Domain::kSketch, p.s1),
                            batch.slot_of(Domain::kSketch, p.s2),
                            batch.slot_of(Domain::kView, p.v1),
                            batch.slot_of(Domain::kView, p.v2)});
    }
    const std::vector<BatchImage>& items = batch.items();

    std::vector<ForwardTrace<float>> traces(items.size());
    parallel_for(items.size(), [&](std::size_t i) {
      net_forward(model.net(items[i].domain), image_for(images, items[i]),
                  &traces[i]);
    });

    std::vector<std::vector<float>> upstream(items.size(),
                                             std::vector<float>(kFeatureDim, 0.0f));
    for (std::size_t k = begin; k < end; ++k) {
      const std::size_t pair_index = order[k];
      const PairRecord& p = pairs[pair_index];
      const auto& slots = pair_slots[k - begin];
      const CombinedResult<float> r = combined_loss<float>(
          traces[slots[0]].features.data(), traces[slots[1]].features.data(),
          traces[slots[2]].features.data(), traces[slots[3]].features.data(),
          p.y, options.loss);
      if (!std::isfinite(r.loss)) {
        throw TrainingDiverged(epoch_index, pair_index,
                               "non-finite loss " + std::to_string(r.loss));
      }
      total_loss += static_cast<double>(r.loss);
      (p.y == PairLabel::kSimilar ? stats.similar : stats.dissimilar)++;

      for (std::size_t t = 0; t < terms.size(); ++t) {
        const Domain da = branch_domain(terms[t].a);
        const Domain db = branch_domain(terms[t].b);
        const float weight = model.slot(da) == model.slot(db) ? 0.5f : 1.0f;
        std::vector<float>& ga = upstream[slots[static_cast<std::size_t>(terms[t].a)]];
        std::vector<float>& gb = upstream[slots[static_cast<std::size_t>(terms[t].b)]];
        for (std::size_t d = 0; d < kFeatureDim; ++d) {
          ga[d] += weight * r.terms[t].grad_a[d];
          gb[d] += weight * r.terms[t].grad_b[d];
        }
      }
    }

    const std::size_t chunks = (items.size() + kBackwardChunk - 1) / kBackwardChunk;
    const std::size_t net_slots = model.slot_count();
    std::vector<std::vector<ParamGrads<float>>> chunk_grads(chunks);
    parallel_for(chunks, [&](std::size_t c) {
      std::vector<ParamGrads<float>> grads(net_slots, ParamGrads<float>::zeros());
      const std::size_t first = c * kBackwardChunk;
      const std::size_t last = std::min(items.size(), first + kBackwardChunk);
      for (std::size_t i = first; i < last; ++i) {
        const std::size_t s = model.slot(items[i].domain);
        net_backward(model.slot_params(s), traces[i], std::span<const float>(upstream[i]),
                     grads[s]);
        traces[i] = {};
      }
      chunk_grads[c] = std::move(grads);
    });

    const float inv_batch = 1.0f / static_cast<float>(end - begin);
    for (std::size_t s = 0; s < net_slots; ++s) {
      ParamGrads<float> total = std::move(chunk_grads[0][s]);
      for (std::size_t c = 1; c < chunks; ++c) total.add_scaled(chunk_grads[c][s], 1.0f);
      total.scale(inv_batch);
      try {
        sgd_step(model.slot_params(s), total, learning_rate);
      } catch (const NonFiniteError& e) {
        throw TrainingDiverged(epoch_index, order[begin], e.what());
      }
    }
  }

  stats.pairs = pairs.size();
  stats.mean_loss = total_loss / static_cast<double>(pairs.size());
  return stats;
}

float scheduled_learning_rate(float base, std::size_t epoch) {
  return base * static_cast<float>(std::pow(0.9, static_cast<double>(epoch / 5)));
}

std::size_t default_epochs(std::string_view profile) {
  if (profile == "psb" || profile == "sbsr") return 50;
  if (profile == "shrec13") return 20;
  throw std::invalid_argument("unknown dataset profile: " + std::string(profile));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void train(SiameseModel& model, const ImageBank& images,
           const PairSource& pair_source, const TrainLoopConfig& config,
           const EpochCallback& on_epoch) {
  const std::size_t start = model.completed_epochs();
  for (std::size_t epoch = start; epoch < start + config.epochs; ++epoch) {
    const PairBatch pairs = pair_source(epoch);
    std::mt19937_64 rng(derive_seed(config.seed, epoch));
    EpochStats stats =
        train_epoch(model, images, pairs,
                    scheduled_learning_rate(config.learning_rate, epoch),
                    config.options, rng, epoch);
    model.set_completed_epochs(epoch + 1);
    if (on_epoch) on_epoch(stats, model);
  }
}

}  // namespace sbsr
