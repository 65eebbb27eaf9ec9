#include "hgr/pipeline.hpp"

#include <sstream>

#include "hgr/error.hpp"
#include "hgr/rng.hpp"

namespace hgr {

const char* to_string(BranchMode mode) noexcept {
  switch (mode) {
    case BranchMode::Full:
      return "full";
    case BranchMode::MotionOnly:
      return "motion";
    case BranchMode::SkeletonOnly:
      return "skeleton";
  }
  return "?";
}

BranchMode branch_mode_from_string(const std::string& name) {
  if (name == "full") return BranchMode::Full;
  if (name == "motion") return BranchMode::MotionOnly;
  if (name == "skeleton") return BranchMode::SkeletonOnly;
  throw Error(Errc::InvalidConfig, "unknown branch mode '" + name + "'");
}

void apply_config(PipelineConfig& config, const KeyValueConfig& values) {
  static const char* const kKnown[] = {
      "lstm_hidden", "lstm_layers", "fc_out",   "head_hidden", "dropout",       "bidirectional",
      "clip",        "lr",          "beta1",    "beta2",       "epsilon",       "batch",
      "epochs",      "dad_bins",    "sigma_scale", "lags",     "euler",         "rho_reference",
      "fine_gestures", "mode"};
  for (const auto& [key, value] : values.values()) {
    bool known = false;
    for (const char* k : kKnown) {
      known = known || key == k;
    }
    if (!known) {
      throw Error(Errc::InvalidConfig, "unknown config key '" + key + "'");
    }
  }
  auto& net = config.network;
  for (auto& b : net.branches) {
    if (auto v = values.get_int("lstm_hidden")) b.lstm_hidden = *v;
    if (auto v = values.get_int("lstm_layers")) b.lstm_layers = *v;
    if (auto v = values.get_int("fc_out")) b.fc_out = *v;
  }
  if (auto v = values.get_int_list("head_hidden")) net.head_hidden = *v;
  if (auto v = values.get_double("dropout")) net.dropout = *v;
  if (auto v = values.get_bool("bidirectional")) net.bidirectional = *v;

  auto& tr = config.train;
  if (auto v = values.get_double("clip")) tr.clip_norm = *v;
  if (auto v = values.get_double("lr")) tr.lr = *v;
  if (auto v = values.get_double("beta1")) tr.beta1 = *v;
  if (auto v = values.get_double("beta2")) tr.beta2 = *v;
  if (auto v = values.get_double("epsilon")) tr.epsilon = *v;
  if (auto v = values.get_int("batch")) tr.batch = *v;
  if (auto v = values.get_int("epochs")) tr.epochs = *v;

  auto& g = config.features.global;
  if (auto v = values.get_int("dad_bins")) g.bins = *v;
  if (auto v = values.get_double("sigma_scale")) g.sigma_scale = *v;
  if (auto v = values.get_int_list("lags")) g.lags = *v;
  if (auto v = values.get("euler")) {
    if (*v == "xyz") {
      g.euler = EulerConvention::XYZ;
    } else if (*v == "zyx") {
      g.euler = EulerConvention::ZYX;
    } else {
      throw Error(Errc::InvalidConfig, "euler must be xyz or zyx");
    }
  }
  if (auto v = values.get("rho_reference")) {
    if (*v == "world") {
      g.rho_reference = RhoReference::World;
    } else if (*v == "first_frame") {
      g.rho_reference = RhoReference::FirstFrame;
    } else {
      throw Error(Errc::InvalidConfig, "rho_reference must be world or first_frame");
    }
  }
  if (auto v = values.get_int_list("fine_gestures")) {
    config.categories.fine = std::set<int>(v->begin(), v->end());
    config.categories.validate();
  }
  if (auto v = values.get("mode")) config.mode = branch_mode_from_string(*v);

  if (g.bins < 1 || !(g.sigma_scale > 0.0)) {
    throw Error(Errc::InvalidConfig, "dad_bins must be >= 1 and sigma_scale > 0");
  }
  for (int lag : g.lags) {
    if (lag < 1) {
      throw Error(Errc::InvalidConfig, "lags must be >= 1", lag);
    }
  }
  tr.validate();
  network_config(config).validate();
}

nn::NetworkConfig network_config(const PipelineConfig& config) {
  if (config.classes != 14 && config.classes != 28) {
    throw Error(Errc::InvalidConfig, "classes must be 14 or 28", config.classes);
  }
  nn::NetworkConfig net = config.network;
  net.classes = config.classes;
  const auto dims = config.features.dims();
  for (std::size_t k = 0; k < kBranchCount; ++k) {
    net.branches[k].input_dim = dims[k];
  }
  const bool motion = config.mode != BranchMode::SkeletonOnly;
  const bool skeleton = config.mode != BranchMode::MotionOnly;
  net.branches[0].enabled = motion;
  net.branches[1].enabled = motion;
  net.branches[2].enabled = skeleton;
  return net;
}

int class_label(const SequenceInfo& info, int classes) {
  if (info.gesture < 1 || info.gesture > 14) {
    throw Error(Errc::LabelOutOfRange, "gesture id outside 1..14", info.gesture);
  }
  if (classes == 14) {
    return info.gesture;
  }
  if (classes == 28) {
    if (info.finger < 1 || info.finger > 2) {
      throw Error(Errc::LabelOutOfRange, "28-class labels need finger configuration 1 or 2",
                  info.finger);
    }
    return GestureLabel{info.gesture, info.finger}.gesture_28();
  }
  throw Error(Errc::LabelOutOfRange, "classes must be 14 or 28", classes);
}

EvaluationReport run_loocv(const std::vector<FeatureStreams>& features, const PipelineConfig& config,
                           std::optional<int> subject_count, const ProgressCallback& progress) {
  if (features.empty()) {
    throw Error(Errc::EmptyDataset, "no sequences to evaluate");
  }
  const nn::NetworkConfig net = network_config(config);
  net.validate();
  config.categories.validate();

  DatasetIndex index;
  std::vector<nn::Sample> samples;
  samples.reserve(features.size());
  for (const auto& f : features) {
    index.entries.push_back({f.info.gesture, f.info.finger, f.info.subject, f.info.trial, {}});
    samples.push_back(nn::make_sample(f, class_label(f.info, config.classes) - 1));
  }
  const auto splits = make_loocv_splits(index, subject_count);

  std::vector<SplitResult> results;
  for (const auto& split : splits) {
    const int subject = split.held_out_subject;
    try {
      if (split.train.empty()) {
        throw Error(Errc::EmptyDataset, "no training data");
      }
      std::vector<nn::Sample> train_set;
      std::vector<nn::Sample> test_set;
      for (std::size_t i : split.train) {
        train_set.push_back(samples[i]);
      }
      for (std::size_t i : split.test) {
        test_set.push_back(samples[i]);
      }
      const std::uint64_t seed = derive_seed(config.train.seed, {static_cast<std::uint64_t>(subject)});
      nn::NetworkModel model = nn::init_model(net, seed);
      nn::TrainConfig tc = config.train;
      tc.seed = seed;
      tc.track_accuracy = false;
      const auto log = nn::train(model, train_set, tc);
      const auto predictions = nn::predict_all(model, test_set);
      std::vector<int> predicted;
      std::vector<int> truth;
      for (std::size_t i = 0; i < test_set.size(); ++i) {
        predicted.push_back(predictions[i].label + 1);
        truth.push_back(test_set[i].label + 1);
      }
      results.push_back(score_split(subject, std::move(predicted), std::move(truth),
                                    config.categories, config.classes));
      if (progress) {
        std::ostringstream msg;
        msg << "split " << subject << ": train " << train_set.size() << ", test "
            << test_set.size() << ", accuracy " << results.back().both;
        if (!log.epochs.empty()) {
          msg << ", final loss " << log.epochs.back().loss;
        }
        progress(msg.str());
      }
    } catch (const Error& e) {
      throw Error(e.code(), "split " + std::to_string(subject) + ": " + e.message(), subject,
                  e.where());
    }
  }
  return make_report(std::move(results), config.classes);
}

EvaluationReport run_loocv(const std::vector<SkeletonSequence>& sequences,
                           const PipelineConfig& config, std::optional<int> subject_count,
                           const ProgressCallback& progress) {
  return run_loocv(extract_all(sequences, config.features), config, subject_count, progress);
}

EvaluationReport run_loocv(const DatasetIndex& index, const PipelineConfig& config,
                           std::optional<int> subject_count, const ProgressCallback& progress) {
  std::vector<SkeletonSequence> sequences(index.entries.size());
  for (std::size_t i = 0; i < index.entries.size(); ++i) {
    sequences[i] = load_sequence(index.entries[i], config.features.layout);
  }
  return run_loocv(sequences, config, subject_count, progress);
}

}  // namespace hgr
