#include "hgr/network.hpp"

#include <cmath>
#include <exception>
#include <random>

#include "hgr/error.hpp"
#include "hgr/rng.hpp"

namespace hgr::nn {

void NetworkConfig::validate() const {
  if (classes < 2) {
    throw Error(Errc::InvalidConfig, "need at least two classes", classes);
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw Error(Errc::InvalidConfig, "dropout must be in [0, 1)");
  }
  bool any = false;
  for (const auto& b : branches) {
    if (!b.enabled) {
      continue;
    }
    any = true;
    if (b.input_dim < 1 || b.lstm_hidden < 1 || b.lstm_layers < 1 || b.fc_out < 1) {
      throw Error(Errc::InvalidConfig, "branch sizes must be >= 1");
    }
  }
  if (!any) {
    throw Error(Errc::InvalidConfig, "at least one branch must be enabled");
  }
  for (int w : head_hidden) {
    if (w < 1) {
      throw Error(Errc::InvalidConfig, "head widths must be >= 1", w);
    }
  }
}

int NetworkConfig::concat_width() const {
  int width = 0;
  for (const auto& b : branches) {
    width += b.enabled ? b.fc_out : 0;
  }
  return width;
}

namespace {

template <class Params, class Span, class F>
void for_each_block(Params& p, F&& f) {
  auto lstm = [&](auto& l) {
    f(Span(l.w_input.data(), static_cast<std::size_t>(l.w_input.size())));
    f(Span(l.w_recurrent.data(), static_cast<std::size_t>(l.w_recurrent.size())));
    f(Span(l.bias.data(), static_cast<std::size_t>(l.bias.size())));
  };
  auto dense = [&](auto& d) {
    f(Span(d.weight.data(), static_cast<std::size_t>(d.weight.size())));
    f(Span(d.bias.data(), static_cast<std::size_t>(d.bias.size())));
  };
  for (auto& b : p.branches) {
    if (b.forward.empty()) {
      continue;  // disabled branch
    }
    for (std::size_t l = 0; l < b.forward.size(); ++l) {
      lstm(b.forward[l]);
      if (!b.backward.empty()) {
        lstm(b.backward[l]);
      }
    }
    dense(b.fc);
  }
  for (auto& d : p.head) {
    dense(d);
  }
}

}  // namespace

std::vector<std::span<double>> Parameters::blocks() {
  std::vector<std::span<double>> out;
  for_each_block<Parameters, std::span<double>>(*this, [&](std::span<double> s) { out.push_back(s); });
  return out;
}

std::vector<std::span<const double>> Parameters::blocks() const {
  std::vector<std::span<const double>> out;
  for_each_block<const Parameters, std::span<const double>>(
      *this, [&](std::span<const double> s) { out.push_back(s); });
  return out;
}

std::size_t Parameters::size() const {
  std::size_t n = 0;
  for (auto s : blocks()) {
    n += s.size();
  }
  return n;
}

void Parameters::set_zero() {
  for (auto s : blocks()) {
    std::fill(s.begin(), s.end(), 0.0);
  }
}

Parameters& Parameters::operator+=(const Parameters& other) {
  auto dst = blocks();
  const auto src = other.blocks();
  if (dst.size() != src.size()) {
    throw Error(Errc::ShapeMismatch, "parameter sets differ in structure");
  }
  for (std::size_t b = 0; b < dst.size(); ++b) {
    if (dst[b].size() != src[b].size()) {
      throw Error(Errc::ShapeMismatch, "parameter blocks differ in size");
    }
    Eigen::Map<Vector>(dst[b].data(), static_cast<Eigen::Index>(dst[b].size())) +=
        Eigen::Map<const Vector>(src[b].data(), static_cast<Eigen::Index>(src[b].size()));
  }
  return *this;
}

Parameters& Parameters::operator*=(double factor) {
  for (auto s : blocks()) {
    Eigen::Map<Vector>(s.data(), static_cast<Eigen::Index>(s.size())) *= factor;
  }
  return *this;
}

double Parameters::squared_norm() const {
  double sum = 0.0;
  for (auto s : blocks()) {
    sum += Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size())).squaredNorm();
  }
  return sum;
}

Parameters zeros_like(const Parameters& p) {
  Parameters z = p;
  z.set_zero();
  return z;
}

NetworkModel init_model(const NetworkConfig& config, std::uint64_t seed) {
  config.validate();
  NetworkModel model;
  model.config = config;
  model.seed = seed;
  std::mt19937_64 rng(derive_seed(seed, {0x1a17}));
  auto fill = [&](auto& m, double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      m.data()[i] = dist(rng);
    }
  };
  auto make_lstm = [&](int in, int h) {
    LstmParams l;
    l.w_input.resize(4 * h, in);
    l.w_recurrent.resize(4 * h, h);
    l.bias.resize(4 * h);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in + h));
    fill(l.w_input, bound);
    fill(l.w_recurrent, bound);
    fill(l.bias, bound);
    l.bias.segment(h, h).setOnes();
    return l;
  };
  auto make_dense = [&](int in, int out) {
    DenseParams d;
    d.weight.resize(out, in);
    d.bias.resize(out);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    fill(d.weight, bound);
    fill(d.bias, bound);
    return d;
  };
  const int dirs = config.directions();
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    const BranchConfig& bc = config.branches[k];
    if (!bc.enabled) {
      continue;
    }
    BranchParams& bp = model.params.branches[k];
    for (int l = 0; l < bc.lstm_layers; ++l) {
      const int in = l == 0 ? bc.input_dim : dirs * bc.lstm_hidden;
      bp.forward.push_back(make_lstm(in, bc.lstm_hidden));
      if (config.bidirectional) {
        bp.backward.push_back(make_lstm(in, bc.lstm_hidden));
      }
    }
    bp.fc = make_dense(dirs * bc.lstm_hidden, bc.fc_out);
  }
  int width = config.concat_width();
  for (int w : config.head_hidden) {
    model.params.head.push_back(make_dense(width, w));
    width = w;
  }
  model.params.head.push_back(make_dense(width, config.classes));
  return model;
}

Sample make_sample(const FeatureStreams& streams, int label) {
  Sample s;
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    s.inputs[k] = streams.streams[k].transpose();
  }
  s.label = label;
  return s;
}

void fit_standardizers(NetworkModel& model, std::span<const Sample> data) {
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    model.norm[k] = {};
    if (k == static_cast<std::size_t>(FeatureKind::Skeleton) || !model.config.branches[k].enabled ||
        data.empty()) {
      continue;
    }
    const Eigen::Index dims = data.front().inputs[k].rows();
    Vector sum = Vector::Zero(dims);
    double count = 0.0;
    for (const auto& s : data) {
      sum += s.inputs[k].rowwise().sum();
      count += static_cast<double>(s.inputs[k].cols());
    }
    const Vector mean = sum / count;
    Vector sq = Vector::Zero(dims);
    for (const auto& s : data) {
      sq += (s.inputs[k].colwise() - mean).rowwise().squaredNorm();
    }
    Vector scale = (sq / count).cwiseSqrt();
    for (Eigen::Index d = 0; d < dims; ++d) {
      if (!(scale(d) > 1e-8)) {
        scale(d) = 1.0;
      }
    }
    model.norm[k] = {mean, scale};
  }
}

Batch make_batch(const NetworkModel& model, std::span<const Sample> data,
                 std::span<const std::size_t> indices) {
  Batch batch;
  Eigen::Index longest = 0;
  for (std::size_t i : indices) {
    longest = std::max(longest, data[i].inputs[0].cols());
  }
  for (std::size_t i : indices) {
    const Sample& s = data[i];
    const Eigen::Index len = s.inputs[0].cols();
    for (std::size_t k = 0; k < kBranchCount; ++k) {
      if (!model.config.branches[k].enabled) {
        batch.inputs[k].emplace_back();
        continue;
      }
      if (s.inputs[k].cols() != len || s.inputs[k].rows() != model.config.branches[k].input_dim) {
        throw Error(Errc::ShapeMismatch, "sample stream shape does not match the model");
      }
      Matrix padded = Matrix::Zero(s.inputs[k].rows(), longest);
      const Standardizer& n = model.norm[k];
      if (n.empty()) {
        padded.leftCols(len) = s.inputs[k];
      } else {
        padded.leftCols(len) =
            ((s.inputs[k].colwise() - n.mean).array().colwise() / n.scale.array()).matrix();
      }
      batch.inputs[k].push_back(std::move(padded));
    }
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(longest), 0);
    std::fill(mask.begin(), mask.begin() + len, 1);
    batch.masks.push_back(std::move(mask));
    batch.labels.push_back(s.label);
  }
  return batch;
}

Batch make_batch(const NetworkModel& model, std::span<const Sample> data) {
  std::vector<std::size_t> all(data.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = i;
  }
  return make_batch(model, data, all);
}

namespace {

/// Inverted dropout masks: entries are 0 or 1 / (1 - rate).
class Dropout {
 public:
  Dropout(std::uint64_t seed, double rate) : rng_(seed), rate_(rate) {}

  Matrix mask(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    if (rate_ <= 0.0) {
      m.setOnes();
      return m;
    }
    const double keep = 1.0 - rate_;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
      m.data()[i] = u < keep ? 1.0 / keep : 0.0;
    }
    return m;
  }

  Vector vec(Eigen::Index n) { return mask(n, 1); }

 private:
  std::mt19937_64 rng_;
  double rate_;
};

struct BranchTrace {
  std::vector<LstmTrace> fwd;
  std::vector<LstmTrace> bwd;
  std::vector<Matrix> layer_inputs;  // inputs of layers 1.., after dropout
  std::vector<Matrix> layer_masks;   // dropout masks on outputs of layers 0..L-2 (valid cols)
  Vector summary;                    // after dropout
  Vector summary_mask;
  Vector fc_pre;
  Vector fc_mask;
  Vector fc_out;
};

struct SampleTrace {
  int length = 0;
  std::array<BranchTrace, kBranchCount> branches;
  std::vector<Vector> head_in;
  std::vector<Vector> head_pre;
  std::vector<Vector> head_mask;
  Vector probs;
};

Vector relu(const Vector& x) { return x.cwiseMax(0.0); }

Vector relu_grad_mask(const Vector& pre) {
  return (pre.array() > 0.0).cast<double>().matrix();
}

SampleTrace forward_sample(const NetworkModel& model, const Batch& batch, std::size_t s,
                           bool train_mode, std::uint64_t dropout_seed) {
  const NetworkConfig& cfg = model.config;
  Dropout drop(derive_seed(dropout_seed, {static_cast<std::uint64_t>(s)}),
               train_mode ? cfg.dropout : 0.0);
  SampleTrace tr;
  tr.length = mask_length(batch.masks[s]);
  if (tr.length == 0) {
    throw Error(Errc::InvalidMask, "sample has no valid steps", static_cast<int>(s));
  }
  const int len = tr.length;
  const int dirs = cfg.directions();

  Vector concat(cfg.concat_width());
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    const BranchConfig& bc = cfg.branches[k];
    if (!bc.enabled) {
      continue;
    }
    const BranchParams& bp = model.params.branches[k];
    BranchTrace& bt = tr.branches[k];
    const Eigen::Index h = bc.lstm_hidden;
    bt.layer_inputs.reserve(static_cast<std::size_t>(bc.lstm_layers));
    const Matrix* x = &batch.inputs[k][s];
    for (int l = 0; l < bc.lstm_layers; ++l) {
      const auto li = static_cast<std::size_t>(l);
      bt.fwd.push_back(lstm_run(bp.forward[li], *x, len, Direction::Forward));
      if (cfg.bidirectional) {
        bt.bwd.push_back(lstm_run(bp.backward[li], *x, len, Direction::Backward));
      }
      if (l + 1 < bc.lstm_layers) {
        Matrix next(dirs * h, x->cols());
        next.topRows(h) = bt.fwd.back().hidden;
        if (cfg.bidirectional) {
          next.bottomRows(h) = bt.bwd.back().hidden;
        }
        Matrix mask = drop.mask(dirs * h, len);
        next.leftCols(len).array() *= mask.array();
        bt.layer_masks.push_back(std::move(mask));
        bt.layer_inputs.push_back(std::move(next));
        x = &bt.layer_inputs.back();
      }
    }
    Vector summary(dirs * h);
    summary.head(h) = bt.fwd.back().hidden.col(len - 1);
    if (cfg.bidirectional) {
      summary.tail(h) = bt.bwd.back().hidden.col(0);
    }
    bt.summary_mask = drop.vec(dirs * h);
    bt.summary = summary.cwiseProduct(bt.summary_mask);
    bt.fc_pre = bp.fc.weight * bt.summary + bp.fc.bias;
    bt.fc_mask = drop.vec(bc.fc_out);
    bt.fc_out = relu(bt.fc_pre).cwiseProduct(bt.fc_mask);
    concat.segment(offset, bc.fc_out) = bt.fc_out;
    offset += bc.fc_out;
  }

  Vector x = std::move(concat);
  const std::size_t layers = model.params.head.size();
  for (std::size_t i = 0; i < layers; ++i) {
    const DenseParams& d = model.params.head[i];
    tr.head_in.push_back(x);
    tr.head_pre.push_back(d.weight * x + d.bias);
    if (i + 1 < layers) {
      tr.head_mask.push_back(drop.vec(d.weight.rows()));
      x = relu(tr.head_pre.back()).cwiseProduct(tr.head_mask.back());
    }
  }
  const Vector& logits = tr.head_pre.back();
  const Eigen::ArrayXd e = (logits.array() - logits.maxCoeff()).exp();
  tr.probs = (e / e.sum()).matrix();
  return tr;
}

void backward_sample(const NetworkModel& model, const Batch& batch, std::size_t s,
                     const SampleTrace& tr, double weight, Parameters& grads) {
  const NetworkConfig& cfg = model.config;
  const int label = batch.labels[s];
  Vector d = tr.probs;
  d(label) -= 1.0;
  d *= weight;

  Vector d_concat;
  for (std::size_t i = model.params.head.size(); i-- > 0;) {
    const DenseParams& p = model.params.head[i];
    DenseParams& g = grads.head[i];
    g.weight.noalias() += d * tr.head_in[i].transpose();
    g.bias += d;
    Vector dx = p.weight.transpose() * d;
    if (i > 0) {
      d = dx.cwiseProduct(tr.head_mask[i - 1]).cwiseProduct(relu_grad_mask(tr.head_pre[i - 1]));
    } else {
      d_concat = std::move(dx);
    }
  }

  const int len = tr.length;
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    const BranchConfig& bc = cfg.branches[k];
    if (!bc.enabled) {
      continue;
    }
    const BranchParams& bp = model.params.branches[k];
    BranchParams& bg = grads.branches[k];
    const BranchTrace& bt = tr.branches[k];
    const Eigen::Index h = bc.lstm_hidden;

    const Vector d_fc = d_concat.segment(offset, bc.fc_out)
                            .cwiseProduct(bt.fc_mask)
                            .cwiseProduct(relu_grad_mask(bt.fc_pre));
    offset += bc.fc_out;
    bg.fc.weight.noalias() += d_fc * bt.summary.transpose();
    bg.fc.bias += d_fc;
    const Vector d_summary = (bp.fc.weight.transpose() * d_fc).cwiseProduct(bt.summary_mask);

    const Eigen::Index steps = batch.inputs[k][s].cols();
    Matrix d_fwd = Matrix::Zero(h, steps);
    Matrix d_bwd;
    d_fwd.col(len - 1) = d_summary.head(h);
    if (cfg.bidirectional) {
      d_bwd = Matrix::Zero(h, steps);
      d_bwd.col(0) = d_summary.tail(h);
    }
    for (int l = bc.lstm_layers - 1; l >= 0; --l) {
      const auto li = static_cast<std::size_t>(l);
      const Matrix& x = l == 0 ? batch.inputs[k][s] : bt.layer_inputs[li - 1];
      Matrix dx_f;
      Matrix dx_b;
      const bool need_dx = l > 0;
      lstm_backward(bp.forward[li], x, bt.fwd[li], d_fwd, bg.forward[li],
                    need_dx ? &dx_f : nullptr);
      if (cfg.bidirectional) {
        lstm_backward(bp.backward[li], x, bt.bwd[li], d_bwd, bg.backward[li],
                      need_dx ? &dx_b : nullptr);
      }
      if (need_dx) {
        if (cfg.bidirectional) {
          dx_f += dx_b;
        }
        dx_f.leftCols(len).array() *= bt.layer_masks[li - 1].array();
        d_fwd = dx_f.topRows(h);
        if (cfg.bidirectional) {
          d_bwd = dx_f.bottomRows(h);
        }
      }
    }
  }
}

double sample_loss(const Vector& probs, int label) {
  return -std::log(std::max(probs(label), 1e-12));
}

void check_labels(const NetworkModel& model, const Batch& batch) {
  for (int label : batch.labels) {
    if (label < 0 || label >= model.config.classes) {
      throw Error(Errc::LabelOutOfRange, "label outside 0..C-1", label);
    }
  }
}

void check_batch(const NetworkModel& model, const Batch& batch) {
  const std::size_t n = batch.size();
  if (batch.masks.size() != n) {
    throw Error(Errc::ShapeMismatch, "batch masks and labels differ in count");
  }
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    if (!model.config.branches[k].enabled) {
      continue;
    }
    if (batch.inputs[k].size() != n) {
      throw Error(Errc::ShapeMismatch, "batch stream count differs from labels");
    }
    for (std::size_t s = 0; s < n; ++s) {
      const Matrix& x = batch.inputs[k][s];
      if (x.rows() != model.config.branches[k].input_dim ||
          x.cols() != static_cast<Eigen::Index>(batch.masks[s].size())) {
        throw Error(Errc::ShapeMismatch, "batch input shape mismatch", static_cast<int>(s));
      }
    }
  }
}

}  // namespace

Matrix forward(const NetworkModel& model, const Batch& batch, bool train_mode,
               std::uint64_t dropout_seed) {
  check_batch(model, batch);
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
  Matrix probs(n, model.config.classes);
  std::vector<std::exception_ptr> errors(batch.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto s = static_cast<std::size_t>(i);
    try {
      probs.row(i) = forward_sample(model, batch, s, train_mode, dropout_seed).probs.transpose();
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return probs;
}

double cross_entropy(const Matrix& probabilities, std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != probabilities.rows() || labels.empty()) {
    throw Error(Errc::ShapeMismatch, "label count differs from probability rows");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int y = labels[i];
    if (y < 0 || y >= probabilities.cols()) {
      throw Error(Errc::LabelOutOfRange, "label outside 0..C-1", y);
    }
    sum += -std::log(std::max(probabilities(static_cast<Eigen::Index>(i), y), 1e-12));
  }
  return sum / static_cast<double>(labels.size());
}

BatchResult batch_gradients(const NetworkModel& model, const Batch& batch, bool train_mode,
                            std::uint64_t dropout_seed) {
  check_batch(model, batch);
  check_labels(model, batch);
  const std::size_t n = batch.size();
  if (n == 0) {
    throw Error(Errc::EmptyDataset, "empty batch");
  }
  const int lanes = static_cast<int>(std::min<std::size_t>(kGradientLanes, n));
  const double weight = 1.0 / static_cast<double>(n);
  std::vector<Parameters> acc(static_cast<std::size_t>(lanes), zeros_like(model.params));
  std::vector<double> losses(n);
  BatchResult out;
  out.probabilities.resize(static_cast<Eigen::Index>(n), model.config.classes);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(lanes));
#pragma omp parallel for schedule(static, 1)
  for (int lane = 0; lane < lanes; ++lane) {
    try {
      for (std::size_t s = static_cast<std::size_t>(lane); s < n; s += static_cast<std::size_t>(lanes)) {
        const SampleTrace tr = forward_sample(model, batch, s, train_mode, dropout_seed);
        backward_sample(model, batch, s, tr, weight, acc[static_cast<std::size_t>(lane)]);
        losses[s] = sample_loss(tr.probs, batch.labels[s]);
        out.probabilities.row(static_cast<Eigen::Index>(s)) = tr.probs.transpose();
      }
    } catch (...) {
      errors[static_cast<std::size_t>(lane)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  for (std::size_t lane = 1; lane < acc.size(); ++lane) {
    acc[0] += acc[lane];
  }
  out.gradients = std::move(acc[0]);
  for (double l : losses) {
    out.loss += l;
  }
  out.loss /= static_cast<double>(n);
  return out;
}

BatchResult batch_gradients_serial(const NetworkModel& model, const Batch& batch, bool train_mode,
                                   std::uint64_t dropout_seed) {
  check_batch(model, batch);
  check_labels(model, batch);
  const std::size_t n = batch.size();
  if (n == 0) {
    throw Error(Errc::EmptyDataset, "empty batch");
  }
  const double weight = 1.0 / static_cast<double>(n);
  BatchResult out;
  out.gradients = zeros_like(model.params);
  out.probabilities.resize(static_cast<Eigen::Index>(n), model.config.classes);
  for (std::size_t s = 0; s < n; ++s) {
    const SampleTrace tr = forward_sample(model, batch, s, train_mode, dropout_seed);
    backward_sample(model, batch, s, tr, weight, out.gradients);
    out.loss += sample_loss(tr.probs, batch.labels[s]);
    out.probabilities.row(static_cast<Eigen::Index>(s)) = tr.probs.transpose();
  }
  out.loss /= static_cast<double>(n);
  return out;
}

}  // namespace hgr::nn
