#include "hgr/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <numeric>
#include <random>

#include "hgr/error.hpp"
#include "hgr/rng.hpp"

namespace hgr::nn {

void TrainConfig::validate() const {
  if (!(lr >= 0.0) || !(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) ||
      !(epsilon > 0.0)) {
    throw Error(Errc::InvalidConfig, "invalid Adam hyperparameters");
  }
  if (batch < 1 || epochs < 0) {
    throw Error(Errc::InvalidConfig, "batch must be >= 1 and epochs >= 0");
  }
  if (!(clip_norm >= 0.0)) {
    throw Error(Errc::InvalidConfig, "clip must be >= 0");
  }
}

AdamState make_adam_state(const Parameters& params) {
  return {zeros_like(params), zeros_like(params), 0};
}

void adam_step(Parameters& params, const Parameters& grads, AdamState& state,
               const TrainConfig& config) {
  ++state.step;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  auto p = params.blocks();
  const auto g = grads.blocks();
  auto m = state.m.blocks();
  auto v = state.v.blocks();
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw Error(Errc::ShapeMismatch, "optimizer state does not match parameters");
  }
  for (std::size_t b = 0; b < p.size(); ++b) {
    for (std::size_t i = 0; i < p[b].size(); ++i) {
      const double gi = g[b][i];
      m[b][i] = config.beta1 * m[b][i] + (1.0 - config.beta1) * gi;
      v[b][i] = config.beta2 * v[b][i] + (1.0 - config.beta2) * gi * gi;
      const double m_hat = m[b][i] / c1;
      const double v_hat = v[b][i] / c2;
      p[b][i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
}

double clip_global_norm(Parameters& grads, double max_norm) {
  const double norm = std::sqrt(grads.squared_norm());
  if (max_norm > 0.0 && norm > max_norm) {
    grads *= max_norm / norm;
  }
  return norm;
}

int argmax_lowest(const Eigen::Ref<const Vector>& p) {
  int best = 0;
  for (Eigen::Index i = 1; i < p.size(); ++i) {
    if (p(i) > p(best)) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

namespace {

double accuracy_on(const NetworkModel& model, std::span<const Sample> data) {
  const auto predictions = predict_all(model, data);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    correct += predictions[i].label == data[i].label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace

TrainResult train(NetworkModel& model, std::span<const Sample> data, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  if (data.empty()) {
    throw Error(Errc::EmptyDataset, "no training samples");
  }
  config.validate();
  for (const auto& s : data) {
    if (s.label < 0 || s.label >= model.config.classes) {
      throw Error(Errc::LabelOutOfRange, "training label outside 0..C-1", s.label);
    }
  }
  fit_standardizers(model, data);
  AdamState adam = make_adam_state(model.params);
  std::mt19937_64 shuffle_rng(derive_seed(config.seed, {0x5b0ff1e}));
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  std::uint64_t step = 0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch));
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const Batch batch = make_batch(model, data, idx);
      BatchResult r = batch_gradients(model, batch, true, derive_seed(config.seed, {0xd0, step++}));
      clip_global_norm(r.gradients, config.clip_norm);
      adam_step(model.params, r.gradients, adam, config);
      loss_sum += r.loss;
      ++batches;
    }
    EpochLog log;
    log.epoch = epoch;
    log.loss = loss_sum / batches;
    log.train_accuracy = config.track_accuracy ? accuracy_on(model, data)
                                               : std::numeric_limits<double>::quiet_NaN();
    result.epochs.push_back(log);
    if (on_epoch) {
      on_epoch(log);
    }
  }
  return result;
}

Prediction predict(const NetworkModel& model, const Sample& sample) {
  const Batch batch = make_batch(model, std::span<const Sample>(&sample, 1));
  const Matrix probs = forward(model, batch, false);
  Prediction p;
  p.probabilities = probs.row(0).transpose();
  p.label = argmax_lowest(p.probabilities);
  return p;
}

std::vector<Prediction> predict_all(const NetworkModel& model, std::span<const Sample> data) {
  std::vector<Prediction> out(data.size());
  std::vector<std::exception_ptr> errors(data.size());
  const auto n = static_cast<std::ptrdiff_t>(data.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto s = static_cast<std::size_t>(i);
    try {
      out[s] = predict(model, data[s]);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

std::uint64_t parameter_checksum(const Parameters& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto block : params.blocks()) {
    for (double x : block) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

}  // namespace hgr::nn
