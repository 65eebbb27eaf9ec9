#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hgr/features.hpp"
#include "hgr/lstm.hpp"

namespace hgr::nn {

struct BranchConfig {
  int input_dim = 0;
  int lstm_hidden = 100;  // per direction
  int lstm_layers = 2;
  int fc_out = 128;
  bool enabled = true;
};

/// Three recurrent branches (global, finger, skeleton), concatenated into a
/// fully connected head ending in a softmax over `classes`.
struct NetworkConfig {
  std::array<BranchConfig, kBranchCount> branches;
  std::vector<int> head_hidden{256, 128};  // the final C-wide layer is implicit
  int classes = 14;
  double dropout = 0.3;
  bool bidirectional = true;

  /// Throws InvalidConfig.
  void validate() const;
  int concat_width() const;
  int directions() const { return bidirectional ? 2 : 1; }
};

struct DenseParams {
  Matrix weight;  // out x in
  Vector bias;
};

struct BranchParams {
  std::vector<LstmParams> forward;   // one per layer
  std::vector<LstmParams> backward;  // empty when unidirectional
  DenseParams fc;
};

/// All trainable tensors. Block order (used by the optimizer and the
/// checkpoint payload): per enabled branch, per layer, forward then backward
/// {w_input, w_recurrent, bias}; then the branch FC {weight, bias}; then each
/// head layer {weight, bias}. Matrices are column-major.
struct Parameters {
  std::array<BranchParams, kBranchCount> branches;
  std::vector<DenseParams> head;

  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;
  std::size_t size() const;
  void set_zero();
  Parameters& operator+=(const Parameters& other);
  Parameters& operator*=(double factor);
  double squared_norm() const;
};

Parameters zeros_like(const Parameters& p);

/// Per-dimension z-scoring fitted on training data; empty means identity.
struct Standardizer {
  Vector mean;
  Vector scale;

  bool empty() const { return mean.size() == 0; }
};

struct NetworkModel {
  NetworkConfig config;
  Parameters params;
  std::array<Standardizer, kBranchCount> norm;
  std::uint64_t seed = 0;
};

/// Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)]; LSTM
/// forget-gate biases start at +1.
NetworkModel init_model(const NetworkConfig& config, std::uint64_t seed);

/// One sequence: per-branch inputs as dims x T (one column per frame).
struct Sample {
  std::array<Matrix, kBranchCount> inputs;
  int label = 0;  // 0-based class
};

Sample make_sample(const FeatureStreams& streams, int label);

/// Fits z-scoring for the global and finger branches on `data`; the
/// skeleton branch is already normalized and stays identity.
void fit_standardizers(NetworkModel& model, std::span<const Sample> data);

/// Padded minibatch. Inputs are standardized with the model's statistics
/// and zero-padded to the longest sample; masks mark the valid prefix.
struct Batch {
  std::array<std::vector<Matrix>, kBranchCount> inputs;
  std::vector<std::vector<std::uint8_t>> masks;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
};

Batch make_batch(const NetworkModel& model, std::span<const Sample> data,
                 std::span<const std::size_t> indices);
Batch make_batch(const NetworkModel& model, std::span<const Sample> data);

/// Class probabilities, batch x C. Dropout (inverted) only when
/// `train_mode`; masks are drawn from `dropout_seed` and the sample position
/// so that repeated calls reproduce them.
Matrix forward(const NetworkModel& model, const Batch& batch, bool train_mode,
               std::uint64_t dropout_seed = 0);

/// Mean over rows of -log(max(p[label], 1e-12)).
double cross_entropy(const Matrix& probabilities, std::span<const int> labels);

struct BatchResult {
  Parameters gradients;  // d(mean loss)/d(params)
  double loss = 0.0;
  Matrix probabilities;  // batch x C
};

/// Exact gradients under the dropout masks implied by `dropout_seed`.
/// OpenMP across samples; samples are accumulated into a fixed number of
/// lanes that are summed in order, so results do not depend on thread count.
BatchResult batch_gradients(const NetworkModel& model, const Batch& batch, bool train_mode,
                            std::uint64_t dropout_seed = 0);

/// Single-threaded reference for batch_gradients.
BatchResult batch_gradients_serial(const NetworkModel& model, const Batch& batch, bool train_mode,
                                   std::uint64_t dropout_seed = 0);

inline constexpr int kGradientLanes = 8;

}  // namespace hgr::nn
