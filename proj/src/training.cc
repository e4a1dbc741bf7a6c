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

#include "mvgl/training.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <thread>

#include "mvgl/errors.h"
#include "mvgl/metrics.h"

namespace mvgl {

void ValidateTrainingConfig(const TrainingConfig& cfg,
                            const NetworkConfig& net) {
  ValidateConfig(net);
  if (cfg.batch_size < 1) throw Error(ErrorCode::kConfig, "batch_size must be >= 1");
  if (cfg.crop < net.kernel) {
    throw Error(ErrorCode::kConfig, "crop must be at least the kernel size");
  }
  if (cfg.patience < 1) throw Error(ErrorCode::kConfig, "patience must be >= 1");
  if (cfg.lr_half_period < 1) {
    throw Error(ErrorCode::kConfig, "lr_half_period must be >= 1");
  }
  if (!(cfg.beta1 > 0 && cfg.beta1 < 1 && cfg.beta2 > 0 && cfg.beta2 < 1)) {
    throw Error(ErrorCode::kConfig, "Adam betas must lie in (0, 1)");
  }
  if (!(cfg.lr0 >= 0) || !(cfg.epsilon > 0)) {
    throw Error(ErrorCode::kConfig, "lr0 must be >= 0 and epsilon > 0");
  }
  if (!(cfg.validation_fraction > 0 && cfg.validation_fraction < 1)) {
    throw Error(ErrorCode::kConfig, "validation_fraction must lie in (0, 1)");
  }
}

std::array<double, 3> ComputeChannelMeans(std::span<const ImageTensor> images) {
  if (images.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "channel means of empty dataset");
  }
  std::array<double, 3> sums{};
  double count = 0;
  for (const ImageTensor& img : images) {
    if (img.channels() != 3) {
      throw Error(ErrorCode::kShape, "channel means need 3-channel images");
    }
    for (size_t c = 0; c < 3; ++c) {
      double s = 0;
      for (float v : img.Plane(c)) s += v;
      sums[c] += s;
    }
    count += double(img.plane_size());
  }
  for (double& s : sums) s /= count;
  return sums;
}

PatchPair SampleCrop(const ImageTensor& pristine, const ImageTensor& degraded,
                     size_t size, std::mt19937_64& rng) {
  if (!pristine.SameShape(degraded)) {
    throw Error(ErrorCode::kShape, "crop: pristine/degraded shape mismatch");
  }
  const ImageTensor* src_p = &pristine;
  const ImageTensor* src_d = &degraded;
  ImageTensor pad_p, pad_d;
  if (pristine.height() < size || pristine.width() < size) {
    pad_p = ReflectPad(pristine, size, size);
    pad_d = ReflectPad(degraded, size, size);
    src_p = &pad_p;
    src_d = &pad_d;
  }
  std::uniform_int_distribution<size_t> dy(0, src_p->height() - size);
  std::uniform_int_distribution<size_t> dx(0, src_p->width() - size);
  PatchPair out;
  out.y = dy(rng);
  out.x = dx(rng);
  const Rect r{out.y, out.x, size, size};
  out.degraded = Crop(*src_d, r);
  out.target = Crop(*src_p, r);
  return out;
}

template <typename T>
double MseLoss(const PlanarImage<T>& pred, const PlanarImage<T>& target) {
  if (!pred.SameShape(target)) {
    throw Error(ErrorCode::kShape, "mse: shape mismatch");
  }
  auto a = pred.data();
  auto b = target.data();
  double sum = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = double(a[i]) - double(b[i]);
    sum += d * d;
  }
  return sum / double(a.size());
}

namespace {

template <typename T>
void ZeroLike(const ModelWeightsT<T>& m, ModelWeightsT<T>* out) {
  *out = ModelWeightsT<T>::Zeros(m.config);
  out->channel_means = {};
}

template <typename T>
void Accumulate(const ModelWeightsT<T>& src, ModelWeightsT<T>* dst) {
  std::vector<const ConvWeightsT<T>*> from;
  src.ForEachConv([&](const ConvWeightsT<T>& c) { from.push_back(&c); });
  size_t i = 0;
  dst->ForEachConv([&](ConvWeightsT<T>& c) {
    const ConvWeightsT<T>& s = *from[i++];
    for (size_t j = 0; j < c.weights.size(); ++j) c.weights[j] += s.weights[j];
    for (size_t j = 0; j < c.bias.size(); ++j) c.bias[j] += s.bias[j];
  });
}

// Forward + backward for one sample; gradient contributions are scaled by
// `weight` (1 / batch size) and added to *grads. Returns the sample's MSE.
template <typename T>
double BackwardSample(const ModelWeightsT<T>& m, const PatchPair& sample,
                      T weight, ModelWeightsT<T>* grads) {
  const PlanarImage<T> degraded = ConvertImage<T>(sample.degraded);
  const PlanarImage<T> target = ConvertImage<T>(sample.target);
  if (degraded.channels() != 3 || !degraded.SameShape(target)) {
    throw Error(ErrorCode::kShape, "backward: bad patch shapes");
  }
  const T block_scale = T(m.config.block_scale);
  const T global_scale = T(m.config.global_scale);

  PlanarImage<T> x = degraded;
  for (size_t c = 0; c < 3; ++c) {
    for (T& v : x.Plane(c)) v -= m.channel_means[c];
  }
  const PlanarImage<T> h = Conv2D(x, m.head);
  std::vector<PlanarImage<T>> block_in;
  std::vector<PlanarImage<T>> block_pre;
  block_in.reserve(m.blocks.size());
  block_pre.reserve(m.blocks.size());
  PlanarImage<T> cur = h;
  for (const auto& b : m.blocks) {
    block_in.push_back(cur);
    block_pre.push_back(Conv2D(cur, b.conv1));
    const PlanarImage<T> branch = Conv2D(Selu(block_pre.back()), b.conv2);
    auto d = cur.data();
    auto s = branch.data();
    for (size_t i = 0; i < d.size(); ++i) d[i] += block_scale * s[i];
  }
  PlanarImage<T> body = Conv2D(cur, m.tail);
  {
    auto d = body.data();
    auto s = h.data();
    for (size_t i = 0; i < d.size(); ++i) d[i] += s[i];
  }
  const PlanarImage<T> y = Conv2D(body, m.output);

  // d(loss)/d(y): loss = mean((degraded + g*y - target)^2).
  PlanarImage<T> grad_y(3, y.height(), y.width());
  double loss = 0;
  const T norm = T(2) * weight / T(y.size());
  {
    auto gy = grad_y.data();
    auto yv = y.data();
    auto dv = degraded.data();
    auto tv = target.data();
    for (size_t i = 0; i < gy.size(); ++i) {
      const T out = dv[i] + global_scale * yv[i];
      const T diff = out - tv[i];
      loss += double(diff) * double(diff);
      gy[i] = norm * diff * global_scale;
    }
  }
  loss /= double(y.size());

  PlanarImage<T> grad_body;
  Conv2DBackward(body, m.output, grad_y, &grads->output, &grad_body);
  PlanarImage<T> grad_cur;
  Conv2DBackward(cur, m.tail, grad_body, &grads->tail, &grad_cur);
  for (size_t bi = m.blocks.size(); bi-- > 0;) {
    const auto& b = m.blocks[bi];
    PlanarImage<T> grad_branch = grad_cur;
    for (T& v : grad_branch.data()) v *= block_scale;
    PlanarImage<T> grad_act;
    Conv2DBackward(Selu(block_pre[bi]), b.conv2, grad_branch,
                   &grads->blocks[bi].conv2, &grad_act);
    {
      auto ga = grad_act.data();
      auto pre = block_pre[bi].data();
      for (size_t i = 0; i < ga.size(); ++i) ga[i] *= SeluDerivative(pre[i]);
    }
    PlanarImage<T> grad_in;
    Conv2DBackward(block_in[bi], b.conv1, grad_act, &grads->blocks[bi].conv1,
                   &grad_in);
    auto gc = grad_cur.data();
    auto gi = grad_in.data();
    for (size_t i = 0; i < gc.size(); ++i) gc[i] += gi[i];
  }
  {
    auto gc = grad_cur.data();
    auto gb = grad_body.data();
    for (size_t i = 0; i < gc.size(); ++i) gc[i] += gb[i];
  }
  Conv2DBackward<T>(x, m.head, grad_cur, &grads->head, nullptr);
  return loss;
}

size_t ResolveThreads(size_t threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

template <typename T>
double Backward(const ModelWeightsT<T>& m, std::span<const PatchPair> batch,
                ModelWeightsT<T>* grads, size_t threads) {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  ZeroLike(m, grads);
  const T weight = T(1) / T(batch.size());
  const size_t workers = std::min(ResolveThreads(threads), batch.size());
  double loss = 0;
  if (workers <= 1) {
    for (const PatchPair& p : batch) loss += BackwardSample(m, p, weight, grads);
    return loss / double(batch.size());
  }
  // Per-sample gradients in waves; summed in sample order so the result is
  // independent of the worker count.
  std::vector<ModelWeightsT<T>> partial(workers);
  std::vector<double> partial_loss(workers);
  for (size_t start = 0; start < batch.size(); start += workers) {
    const size_t count = std::min(workers, batch.size() - start);
    std::vector<std::thread> pool;
    for (size_t w = 0; w < count; ++w) {
      pool.emplace_back([&, w] {
        ZeroLike(m, &partial[w]);
        partial_loss[w] = BackwardSample(m, batch[start + w], weight, &partial[w]);
      });
    }
    for (auto& t : pool) t.join();
    for (size_t w = 0; w < count; ++w) {
      Accumulate(partial[w], grads);
      loss += partial_loss[w];
    }
  }
  return loss / double(batch.size());
}

template <typename T>
void AdamUpdate(std::span<T> params, std::span<const T> grads, std::span<T> m,
                std::span<T> v, uint64_t* t, double lr, double beta1,
                double beta2, double epsilon) {
  if (grads.size() != params.size() || m.size() != params.size() ||
      v.size() != params.size()) {
    throw Error(ErrorCode::kShape, "adam: array length mismatch");
  }
  ++*t;
  const double bc1 = 1.0 - std::pow(beta1, double(*t));
  const double bc2 = 1.0 - std::pow(beta2, double(*t));
  for (size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    const double mi = beta1 * double(m[i]) + (1.0 - beta1) * g;
    const double vi = beta2 * double(v[i]) + (1.0 - beta2) * g * g;
    m[i] = T(mi);
    v[i] = T(vi);
    const double m_hat = mi / bc1;
    const double v_hat = vi / bc2;
    params[i] = T(double(params[i]) - lr * m_hat / (std::sqrt(v_hat) + epsilon));
  }
}

void AdamStep(const ModelWeights& grads, double lr, const TrainingConfig& cfg,
              OptimizerState* state, ModelWeights* weights) {
  const size_t count = weights->parameter_count();
  if (state->m.size() != count || state->v.size() != count ||
      grads.parameter_count() != count) {
    throw Error(ErrorCode::kShape, "adam: optimizer state does not match model");
  }
  std::vector<const ConvWeights*> g;
  grads.ForEachConv([&](const ConvWeights& c) { g.push_back(&c); });
  // Each conv is stepped as its own slice; t advances once per step.
  const uint64_t t0 = state->t;
  size_t offset = 0;
  size_t idx = 0;
  weights->ForEachConv([&](ConvWeights& c) {
    const ConvWeights& gc = *g[idx++];
    for (auto [p, q] : {std::pair{&c.weights, &gc.weights},
                        std::pair{&c.bias, &gc.bias}}) {
      uint64_t t = t0;
      std::span<float> ms(state->m.data() + offset, p->size());
      std::span<float> vs(state->v.data() + offset, p->size());
      AdamUpdate<float>(*p, *q, ms, vs, &t, lr, cfg.beta1, cfg.beta2,
                        cfg.epsilon);
      offset += p->size();
    }
  });
  state->t = t0 + 1;
}

double LearningRateAt(size_t epoch, const TrainingConfig& cfg) {
  return cfg.lr0 * std::ldexp(1.0, -int(epoch / cfg.lr_half_period));
}

double ValidationPsnr(const ModelWeights& m,
                      std::span<const ImageTensor> pristine,
                      std::span<const ImageTensor> degraded) {
  double total = 0;
  for (size_t i = 0; i < pristine.size(); ++i) {
    ImageTensor out = NetworkForward(degraded[i], m);
    for (float& v : out.data()) v = std::clamp(v, 0.0f, 255.0f);
    total += Psnr(out, pristine[i]);
  }
  return total / double(pristine.size());
}

TrainingResult TrainOnPairs(std::span<const ImageTensor> pristine,
                            std::span<const ImageTensor> degraded,
                            const NetworkConfig& net, const TrainingConfig& cfg,
                            const EpochCallback& on_epoch) {
  ValidateTrainingConfig(cfg, net);
  if (pristine.size() != degraded.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "pristine/degraded dataset sizes differ");
  }
  const size_t n = pristine.size();
  if (n < 2) {
    throw Error(ErrorCode::kConfig,
                "need at least 2 images (training + validation)");
  }
  const size_t n_val = std::clamp<size_t>(
      size_t(std::lround(double(n) * cfg.validation_fraction)), 1, n - 1);
  const size_t n_train = n - n_val;
  if (n_train < cfg.batch_size) {
    throw Error(ErrorCode::kConfig,
                "training split (" + std::to_string(n_train) +
                    " images) is smaller than one batch (" +
                    std::to_string(cfg.batch_size) + ")");
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  {
    std::mt19937_64 split_rng(cfg.seed);
    std::shuffle(order.begin(), order.end(), split_rng);
  }
  std::vector<ImageTensor> train_p, train_d, val_p, val_d;
  for (size_t i = 0; i < n; ++i) {
    const size_t k = order[i];
    if (!pristine[k].SameShape(degraded[k]) || pristine[k].channels() != 3) {
      throw Error(ErrorCode::kShape, "dataset image " + std::to_string(k) +
                                         ": bad shape");
    }
    auto& p = i < n_train ? train_p : val_p;
    auto& d = i < n_train ? train_d : val_d;
    p.push_back(pristine[k]);
    d.push_back(degraded[k]);
  }

  TrainingResult result;
  ModelWeights weights = InitWeights(net, cfg.seed);
  const auto means = ComputeChannelMeans(train_p);
  for (size_t c = 0; c < 3; ++c) weights.channel_means[c] = float(means[c]);
  OptimizerState opt = OptimizerState::Fresh(weights.parameter_count());

  result.weights = weights;
  result.best_val_psnr = -std::numeric_limits<double>::infinity();
  size_t since_best = 0;
  ModelWeights grads;
  for (size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    std::seed_seq seq{uint64_t(cfg.seed), uint64_t(epoch), uint64_t(0x6d76676c)};
    std::mt19937_64 rng(seq);
    std::vector<PatchPair> crops;
    crops.reserve(n_train);
    for (size_t i = 0; i < n_train; ++i) {
      crops.push_back(SampleCrop(train_p[i], train_d[i], cfg.crop, rng));
    }
    std::shuffle(crops.begin(), crops.end(), rng);

    const double lr = LearningRateAt(epoch, cfg);
    double loss_sum = 0;
    size_t batches = 0;
    for (size_t start = 0; start < crops.size(); start += cfg.batch_size) {
      const size_t count = std::min(cfg.batch_size, crops.size() - start);
      if (count < cfg.batch_size && cfg.drop_last) break;
      std::span<const PatchPair> batch(crops.data() + start, count);
      loss_sum += Backward(weights, batch, &grads, cfg.threads);
      AdamStep(grads, lr, cfg, &opt, &weights);
      ++batches;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.train_loss = loss_sum / double(batches);
    rec.val_psnr = ValidationPsnr(weights, val_p, val_d);
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (rec.val_psnr > result.best_val_psnr) {
      result.best_val_psnr = rec.val_psnr;
      result.best_epoch = epoch;
      result.weights = weights;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  result.optimizer = std::move(opt);
  return result;
}

TrainingResult Train(std::span<const ImageTensor> dataset,
                     const NetworkConfig& net, const TrainingConfig& cfg,
                     const Codec& codec, double quality,
                     const EpochCallback& on_epoch) {
  if (dataset.empty()) throw Error(ErrorCode::kConfig, "empty dataset");
  std::vector<ImageTensor> degraded;
  degraded.reserve(dataset.size());
  for (const ImageTensor& img : dataset) {
    degraded.push_back(codec.Decode(codec.Encode(img, quality)));
  }
  return TrainOnPairs(dataset, degraded, net, cfg, on_epoch);
}

template double MseLoss(const PlanarImage<float>&, const PlanarImage<float>&);
template double MseLoss(const PlanarImage<double>&, const PlanarImage<double>&);
template double Backward(const ModelWeightsT<float>&, std::span<const PatchPair>,
                         ModelWeightsT<float>*, size_t);
template double Backward(const ModelWeightsT<double>&,
                         std::span<const PatchPair>, ModelWeightsT<double>*,
                         size_t);
template void AdamUpdate(std::span<float>, std::span<const float>,
                         std::span<float>, std::span<float>, uint64_t*, double,
                         double, double, double);
template void AdamUpdate(std::span<double>, std::span<const double>,
                         std::span<double>, std::span<double>, uint64_t*,
                         double, double, double, double);

}  // namespace mvgl
