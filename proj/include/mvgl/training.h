// Copyright 2026 The MVGL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MVGL_TRAINING_H_
#define MVGL_TRAINING_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "mvgl/codec.h"
#include "mvgl/image.h"
#include "mvgl/network.h"

namespace mvgl {

struct TrainingConfig {
  size_t batch_size = 64;
  size_t crop = 96;
  double lr0 = 0.001;
  size_t lr_half_period = 500;  // epochs
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  size_t patience = 50;  // epochs without validation improvement
  size_t max_epochs = 100000;
  uint64_t seed = 0;
  // Share of the dataset held out for early-stopping validation.
  double validation_fraction = 0.1;
  // Keep (false) or drop (true) the last partial batch of an epoch.
  bool drop_last = false;
  // Worker threads for per-sample gradients; 0 = hardware concurrency.
  // Results do not depend on this value.
  size_t threads = 0;
};

// Throws Error(kConfig) when the recipe is unusable for `net`.
void ValidateTrainingConfig(const TrainingConfig& cfg, const NetworkConfig& net);

struct PatchPair {
  ImageTensor degraded;
  ImageTensor target;
  size_t y = 0;  // top-left of the crop in the (possibly padded) source
  size_t x = 0;
};

// Adam moments, flattened in weights-file parameter order.
struct OptimizerState {
  std::vector<float> m;
  std::vector<float> v;
  uint64_t t = 0;

  static OptimizerState Fresh(size_t parameter_count) {
    return {std::vector<float>(parameter_count, 0.0f),
            std::vector<float>(parameter_count, 0.0f), 0};
  }
};

// One mean per channel over every pixel of every image.
std::array<double, 3> ComputeChannelMeans(std::span<const ImageTensor> images);

// Same uniformly drawn window from both images. Images smaller than `size`
// are reflect-padded up to it first.
PatchPair SampleCrop(const ImageTensor& pristine, const ImageTensor& degraded,
                     size_t size, std::mt19937_64& rng);

template <typename T>
double MseLoss(const PlanarImage<T>& pred, const PlanarImage<T>& target);

// Mean over the batch of MseLoss(NetworkForward(degraded), target), and its
// exact gradient with respect to every convolution weight and bias.
// `grads` is overwritten and takes m's shapes.
template <typename T>
double Backward(const ModelWeightsT<T>& m, std::span<const PatchPair> batch,
                ModelWeightsT<T>* grads, size_t threads = 1);

// Bias-corrected Adam on flat arrays; increments *t before the update.
template <typename T>
void AdamUpdate(std::span<T> params, std::span<const T> grads, std::span<T> m,
                std::span<T> v, uint64_t* t, double lr, double beta1,
                double beta2, double epsilon);

void AdamStep(const ModelWeights& grads, double lr, const TrainingConfig& cfg,
              OptimizerState* state, ModelWeights* weights);

// lr0 * 2^-floor(epoch / lr_half_period).
double LearningRateAt(size_t epoch, const TrainingConfig& cfg);

struct EpochRecord {
  size_t epoch = 0;
  double lr = 0;
  double train_loss = 0;
  double val_psnr = 0;
};

struct TrainingResult {
  ModelWeights weights;  // best-validation weights
  std::vector<EpochRecord> history;
  size_t best_epoch = 0;
  double best_val_psnr = 0;
  OptimizerState optimizer;  // state at the final epoch
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Trains on matched (pristine, degraded) pairs. Each epoch draws one crop per
// training image, shuffles, and steps Adam per batch; stops after `patience`
// epochs without a strictly better validation PSNR or at max_epochs.
TrainingResult TrainOnPairs(std::span<const ImageTensor> pristine,
                            std::span<const ImageTensor> degraded,
                            const NetworkConfig& net, const TrainingConfig& cfg,
                            const EpochCallback& on_epoch = {});

// Degrades every image once through `codec` at `quality`, then trains.
TrainingResult Train(std::span<const ImageTensor> dataset,
                     const NetworkConfig& net, const TrainingConfig& cfg,
                     const Codec& codec, double quality,
                     const EpochCallback& on_epoch = {});

// Mean per-image PSNR of the network output (clamped to [0, 255]).
double ValidationPsnr(const ModelWeights& m,
                      std::span<const ImageTensor> pristine,
                      std::span<const ImageTensor> degraded);

}  // namespace mvgl

#endif  // MVGL_TRAINING_H_
