#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

namespace hgr::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Gate rows are stacked [input, forget, cell, output], each `hidden` tall.
struct LstmParams {
  Matrix w_input;      // 4h x d
  Matrix w_recurrent;  // 4h x h
  Vector bias;         // 4h

  int hidden() const { return static_cast<int>(w_recurrent.cols()); }
  int input_dim() const { return static_cast<int>(w_input.cols()); }
};

enum class Direction { Forward, Backward };

/// Everything BPTT needs from one run over a sequence. Columns are time
/// steps; steps past `length` hold the masked-step values (forward: copy of
/// the last valid state; backward: the zero initial state).
struct LstmTrace {
  Matrix gates;   // 4h x T, post-activation
  Matrix cells;   // h x T
  Matrix hidden;  // h x T
  int length = 0;
  Direction direction = Direction::Forward;
};

/// Runs the recurrence over the first `length` columns of `inputs` (d x T).
LstmTrace lstm_run(const LstmParams& params, const Eigen::Ref<const Matrix>& inputs, int length,
                   Direction direction);

/// Masked forward pass returning hidden states (h x T). The mask must be a
/// valid prefix: ones then zeros. Throws ShapeMismatch or InvalidMask.
Matrix lstm_forward(const LstmParams& params, const Matrix& inputs,
                    std::span<const std::uint8_t> mask, Direction direction);

/// Length of the valid prefix; throws InvalidMask when the mask has holes.
int mask_length(std::span<const std::uint8_t> mask);

/// Backpropagation through time. `d_hidden` (h x T) is dLoss/dh_t from the
/// layer output only; recurrent contributions are handled here. Gradients
/// are accumulated into `grads`; `d_inputs` (d x T) is overwritten when
/// non-null.
void lstm_backward(const LstmParams& params, const Eigen::Ref<const Matrix>& inputs,
                   const LstmTrace& trace, const Eigen::Ref<const Matrix>& d_hidden,
                   LstmParams& grads, Matrix* d_inputs);

}  // namespace hgr::nn
