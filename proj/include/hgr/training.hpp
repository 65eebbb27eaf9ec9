#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hgr/network.hpp"

namespace hgr::nn {

struct TrainConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch = 32;
  int epochs = 100;
  std::uint64_t seed = 0;
  double clip_norm = 5.0;  // global-norm clip; 0 disables
  bool track_accuracy = true;  // extra inference pass per epoch

  /// Throws InvalidConfig.
  void validate() const;
};

struct AdamState {
  Parameters m;
  Parameters v;
  long step = 0;
};

AdamState make_adam_state(const Parameters& params);

/// One bias-corrected Adam update; increments `state.step`.
void adam_step(Parameters& params, const Parameters& grads, AdamState& state,
               const TrainConfig& config);

/// Rescales `grads` in place so its global L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
double clip_global_norm(Parameters& grads, double max_norm);

struct EpochLog {
  int epoch = 0;  // 1-based
  double loss = 0.0;  // mean minibatch loss over the epoch
  double train_accuracy = 0.0;  // inference-mode accuracy, NaN when not tracked
};

struct TrainResult {
  std::vector<EpochLog> epochs;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Minibatch Adam over seeded shuffles. Standardizers are fitted on `data`
/// before the first epoch. Throws EmptyDataset.
TrainResult train(NetworkModel& model, std::span<const Sample> data, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

struct Prediction {
  int label = 0;
  Vector probabilities;
};

/// Argmax of the inference-mode forward pass; ties go to the lowest id.
Prediction predict(const NetworkModel& model, const Sample& sample);
std::vector<Prediction> predict_all(const NetworkModel& model, std::span<const Sample> data);

int argmax_lowest(const Eigen::Ref<const Vector>& p);

/// FNV-1a over the parameter bytes; for determinism checks.
std::uint64_t parameter_checksum(const Parameters& params);

}  // namespace hgr::nn
