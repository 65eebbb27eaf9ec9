#include "hgr/lstm.hpp"

#include "hgr/error.hpp"

namespace hgr::nn {

namespace {

inline Eigen::Index step_at(int k, int length, Direction dir) {
  return dir == Direction::Forward ? k : length - 1 - k;
}

template <class Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& x) {
  return 1.0 / (1.0 + (-x).exp());
}

}  // namespace

int mask_length(std::span<const std::uint8_t> mask) {
  int length = 0;
  while (length < static_cast<int>(mask.size()) && mask[static_cast<std::size_t>(length)] != 0) {
    ++length;
  }
  for (std::size_t t = static_cast<std::size_t>(length); t < mask.size(); ++t) {
    if (mask[t] != 0) {
      throw Error(Errc::InvalidMask, "mask is not a prefix of valid steps", static_cast<int>(t));
    }
  }
  return length;
}

LstmTrace lstm_run(const LstmParams& params, const Eigen::Ref<const Matrix>& inputs, int length,
                   Direction direction) {
  const Eigen::Index h = params.hidden();
  const Eigen::Index steps = inputs.cols();
  if (inputs.rows() != params.input_dim() || length < 0 || length > steps) {
    throw Error(Errc::ShapeMismatch, "LSTM input has wrong shape");
  }
  LstmTrace tr;
  tr.length = length;
  tr.direction = direction;
  tr.gates = Matrix::Zero(4 * h, steps);
  tr.cells = Matrix::Zero(h, steps);
  tr.hidden = Matrix::Zero(h, steps);
  if (length == 0) {
    return tr;
  }
  // Input contribution for all valid steps at once.
  Matrix pre = params.w_input * inputs.leftCols(length);
  pre.colwise() += params.bias;

  Vector h_prev = Vector::Zero(h);
  Vector c_prev = Vector::Zero(h);
  Vector z(4 * h);
  for (int k = 0; k < length; ++k) {
    const Eigen::Index t = step_at(k, length, direction);
    z.noalias() = pre.col(t);
    z.noalias() += params.w_recurrent * h_prev;
    auto gate = tr.gates.col(t);
    gate.segment(0, h) = sigmoid(z.segment(0, h).array()).matrix();
    gate.segment(h, h) = sigmoid(z.segment(h, h).array()).matrix();
    gate.segment(2 * h, h) = z.segment(2 * h, h).array().tanh().matrix();
    gate.segment(3 * h, h) = sigmoid(z.segment(3 * h, h).array()).matrix();
    tr.cells.col(t) = (gate.segment(h, h).array() * c_prev.array() +
                       gate.segment(0, h).array() * gate.segment(2 * h, h).array())
                          .matrix();
    tr.hidden.col(t) =
        (gate.segment(3 * h, h).array() * tr.cells.col(t).array().tanh()).matrix();
    h_prev = tr.hidden.col(t);
    c_prev = tr.cells.col(t);
  }
  if (direction == Direction::Forward) {
    for (Eigen::Index t = length; t < steps; ++t) {
      tr.hidden.col(t) = tr.hidden.col(length - 1);
      tr.cells.col(t) = tr.cells.col(length - 1);
    }
  }
  return tr;
}

Matrix lstm_forward(const LstmParams& params, const Matrix& inputs,
                    std::span<const std::uint8_t> mask, Direction direction) {
  if (static_cast<Eigen::Index>(mask.size()) != inputs.cols()) {
    throw Error(Errc::ShapeMismatch, "mask length differs from sequence length");
  }
  return lstm_run(params, inputs, mask_length(mask), direction).hidden;
}

void lstm_backward(const LstmParams& params, const Eigen::Ref<const Matrix>& inputs,
                   const LstmTrace& tr, const Eigen::Ref<const Matrix>& d_hidden,
                   LstmParams& grads, Matrix* d_inputs) {
  const Eigen::Index h = params.hidden();
  const int length = tr.length;
  if (d_inputs != nullptr) {
    d_inputs->setZero(inputs.rows(), inputs.cols());
  }
  if (length == 0) {
    return;
  }
  Matrix d_pre(4 * h, length);
  Matrix h_prev_all = Matrix::Zero(h, length);
  Vector dh_next = Vector::Zero(h);
  Vector dc_next = Vector::Zero(h);
  Vector zeros = Vector::Zero(h);
  for (int k = length - 1; k >= 0; --k) {
    const Eigen::Index t = step_at(k, length, tr.direction);
    const bool has_prev = k > 0;
    const Eigen::Index tp = has_prev ? step_at(k - 1, length, tr.direction) : 0;
    const Vector c_prev = has_prev ? Vector(tr.cells.col(tp)) : zeros;
    if (has_prev) {
      h_prev_all.col(t) = tr.hidden.col(tp);
    }
    const auto gate = tr.gates.col(t);
    const auto i = gate.segment(0, h).array();
    const auto f = gate.segment(h, h).array();
    const auto g = gate.segment(2 * h, h).array();
    const auto o = gate.segment(3 * h, h).array();
    const Eigen::ArrayXd tc = tr.cells.col(t).array().tanh();

    const Eigen::ArrayXd dh = d_hidden.col(t).array() + dh_next.array();
    const Eigen::ArrayXd dc = dc_next.array() + dh * o * (1.0 - tc * tc);
    auto dz = d_pre.col(t);
    dz.segment(0, h) = (dc * g * i * (1.0 - i)).matrix();
    dz.segment(h, h) = (dc * c_prev.array() * f * (1.0 - f)).matrix();
    dz.segment(2 * h, h) = (dc * i * (1.0 - g * g)).matrix();
    dz.segment(3 * h, h) = (dh * tc * o * (1.0 - o)).matrix();
    dc_next = (dc * f).matrix();
    dh_next.noalias() = params.w_recurrent.transpose() * dz;
  }
  grads.w_input.noalias() += d_pre * inputs.leftCols(length).transpose();
  grads.w_recurrent.noalias() += d_pre * h_prev_all.transpose();
  grads.bias += d_pre.rowwise().sum();
  if (d_inputs != nullptr) {
    d_inputs->leftCols(length).noalias() = params.w_input.transpose() * d_pre;
  }
}

}  // namespace hgr::nn
