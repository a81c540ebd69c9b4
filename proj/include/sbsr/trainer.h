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

// Minibatch SGD over (s1, s2, v1, v2, y) quadruples.
//
// Gradient routing: within one loss term the two branch gradients that
// land in the same network are averaged (factor 1/2); a branch that is
// the only one of its term to reach a network keeps factor 1. The
// per-network gradient is then averaged over the minibatch before the
// SGD step.
//
// Each distinct image of a minibatch is forwarded and backpropagated once
// with the summed upstream gradient of all its occurrences. Backward work
// is split into fixed-size chunks reduced in chunk order, so results do
// not depend on the worker count.

#ifndef SBSR_TRAINER_H_
#define SBSR_TRAINER_H_

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "sbsr/loss.h"
#include "sbsr/siamese.h"
#include "sbsr/tensor.h"

namespace sbsr {

// Preprocessed [1,100,100] network inputs, addressed by PairRecord.
struct ImageBank {
  std::vector<Tensor> sketches;
  std::vector<Tensor> views;
};

struct PairRecord {
  std::uint32_t s1 = 0;
  std::uint32_t s2 = 0;
  std::uint32_t v1 = 0;
  std::uint32_t v2 = 0;
  PairLabel y = PairLabel::kSimilar;
};

using PairBatch = std::vector<PairRecord>;

struct TrainOptions {
  std::size_t batch_size = 64;
  CombinedOptions loss;
};

struct EpochStats {
  std::size_t epoch = 0;
  double mean_loss = 0.0;
  std::size_t pairs = 0;
  std::size_t similar = 0;
  std::size_t dissimilar = 0;
};

// One pass over `pairs` in an rng-shuffled order. An empty pair list
// leaves the model unchanged. Throws TrainingDiverged with the index of
// the offending pair (into `pairs`) on a non-finite loss.
EpochStats train_epoch(SiameseModel& model, const ImageBank& images,
                       std::span<const PairRecord> pairs, float learning_rate,
                       const TrainOptions& options, std::mt19937_64& rng,
                       std::size_t epoch_index = 0);

// base * 0.9^floor(epoch / 5), epochs counted from 0.
float scheduled_learning_rate(float base, std::size_t epoch);

// Default epoch budget of a dataset profile: 50 for "psb"/"sbsr", 20 for
// "shrec13". Throws std::invalid_argument for unknown profiles.
std::size_t default_epochs(std::string_view profile);

struct TrainLoopConfig {
  std::size_t epochs = 0;
  float learning_rate = 0.001f;
  std::uint64_t seed = 1;
  TrainOptions options;
};

// Produces the fresh pairing for an absolute epoch number.
using PairSource = std::function<PairBatch(std::size_t epoch)>;
using EpochCallback =
    std::function<void(const EpochStats&, const SiameseModel&)>;

// Runs exactly `config.epochs` epochs continuing from
// model.completed_epochs(), then returns. Epoch k uses an rng seeded from
// (seed, k) so resumed runs reproduce uninterrupted ones.
void train(SiameseModel& model, const ImageBank& images,
           const PairSource& pair_source, const TrainLoopConfig& config,
           const EpochCallback& on_epoch = {});

// Mixes an epoch (or other stream) index into a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sbsr

#endif  // SBSR_TRAINER_H_
