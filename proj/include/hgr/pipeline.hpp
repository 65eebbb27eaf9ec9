#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hgr/config.hpp"
#include "hgr/dataset.hpp"
#include "hgr/evaluation.hpp"
#include "hgr/features.hpp"
#include "hgr/training.hpp"

namespace hgr {

/// Which classifier branches are active.
enum class BranchMode { Full, MotionOnly, SkeletonOnly };

const char* to_string(BranchMode mode) noexcept;
/// "full", "motion" or "skeleton"; throws InvalidConfig otherwise.
BranchMode branch_mode_from_string(const std::string& name);

struct PipelineConfig {
  FeatureOptions features;
  nn::NetworkConfig network;  // input dims and classes are filled in by network_config()
  nn::TrainConfig train;
  int classes = 14;
  BranchMode mode = BranchMode::Full;
  GestureCategoryMap categories;
};

/// Applies `key = value` overrides. Recognized keys:
///   lstm_hidden, lstm_layers, fc_out, head_hidden, dropout, bidirectional,
///   clip, lr, beta1, beta2, epsilon, batch, epochs, dad_bins, sigma_scale,
///   lags, euler (xyz|zyx), rho_reference (world|first_frame), fine_gestures,
///   mode (full|motion|skeleton).
/// Throws InvalidConfig on unknown keys or bad values.
void apply_config(PipelineConfig& config, const KeyValueConfig& values);

/// Network configuration with branch dims, enabled flags and classes set.
nn::NetworkConfig network_config(const PipelineConfig& config);

/// 1-based class id: the gesture for 14 classes, 2(g-1)+f for 28.
/// Throws LabelOutOfRange when the metadata does not fit the label space.
int class_label(const SequenceInfo& info, int classes);

using ProgressCallback = std::function<void(const std::string&)>;

/// Leave-one-subject-out over subjects 1..subject_count (default: largest
/// id present). Each split trains a fresh model on its training subjects
/// only, seeded by derive_seed(train.seed, {subject}). Errors are rethrown
/// with the split's subject in Error::where().
EvaluationReport run_loocv(const std::vector<FeatureStreams>& features, const PipelineConfig& config,
                           std::optional<int> subject_count = std::nullopt,
                           const ProgressCallback& progress = {});
EvaluationReport run_loocv(const std::vector<SkeletonSequence>& sequences,
                           const PipelineConfig& config,
                           std::optional<int> subject_count = std::nullopt,
                           const ProgressCallback& progress = {});
EvaluationReport run_loocv(const DatasetIndex& index, const PipelineConfig& config,
                           std::optional<int> subject_count = std::nullopt,
                           const ProgressCallback& progress = {});

}  // namespace hgr
