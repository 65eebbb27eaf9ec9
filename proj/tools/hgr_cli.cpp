#include <omp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hgr/checkpoint.hpp"
#include "hgr/dataset.hpp"
#include "hgr/error.hpp"
#include "hgr/feature_io.hpp"
#include "hgr/pipeline.hpp"
#include "hgr/report.hpp"
#include "hgr/synth.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

hgr::PipelineConfig load_pipeline_config(const std::string& path) {
  hgr::PipelineConfig config;
  if (!path.empty()) {
    hgr::apply_config(config, hgr::KeyValueConfig::load(path));
  }
  return config;
}

void set_jobs(int jobs) {
  if (jobs > 0) {
    omp_set_num_threads(jobs);
  }
}

std::vector<hgr::FeatureKind> parse_kinds(const std::string& list) {
  std::vector<hgr::FeatureKind> kinds;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = hgr::trim(item);
    if (item.empty()) {
      continue;
    }
    try {
      kinds.push_back(hgr::feature_kind_from_string(item));
    } catch (const hgr::Error&) {
      throw UsageError("unknown feature kind '" + item + "' (expected global, finger, skeleton)");
    }
  }
  if (kinds.empty()) {
    throw UsageError("--features needs at least one kind");
  }
  return kinds;
}

int cmd_extract(const std::string& dataset, const std::string& out, const std::string& features,
                const std::string& config_path) {
  const auto kinds = parse_kinds(features);
  const auto config = load_pipeline_config(config_path);
  const auto index = hgr::scan_dataset(dataset);
  std::vector<hgr::SkeletonSequence> sequences;
  sequences.reserve(index.entries.size());
  for (const auto& e : index.entries) {
    sequences.push_back(hgr::load_sequence(e, config.features.layout));
  }
  const auto streams = hgr::extract_all(sequences, config.features);
  const std::size_t n = hgr::write_feature_dir(streams, kinds, out);
  std::cout << "wrote " << n << " feature files for " << streams.size() << " sequences to " << out
            << '\n';
  return 0;
}

int cmd_train(const std::string& features, int classes, std::uint64_t seed,
              const std::string& config_path, const std::string& out, std::string log_path) {
  auto config = load_pipeline_config(config_path);
  config.classes = classes;
  config.train.seed = seed;
  const auto streams = hgr::read_feature_dir(features, config.features.dims());
  std::vector<hgr::nn::Sample> samples;
  samples.reserve(streams.size());
  for (const auto& s : streams) {
    samples.push_back(hgr::nn::make_sample(s, hgr::class_label(s.info, classes) - 1));
  }
  auto model = hgr::nn::init_model(hgr::network_config(config), seed);
  if (log_path.empty()) {
    log_path = out + ".epochs.csv";
  }
  std::ofstream log(log_path, std::ios::binary);
  if (!log) {
    throw hgr::Error(hgr::Errc::IoError, "cannot open " + log_path + " for writing");
  }
  log << "epoch,loss,train_accuracy\n";
  hgr::nn::train(model, samples, config.train, [&](const hgr::nn::EpochLog& e) {
    log << e.epoch << ',' << std::fixed << std::setprecision(6) << e.loss << ','
        << e.train_accuracy << '\n';
    std::cerr << "epoch " << e.epoch << " loss " << e.loss << " accuracy " << e.train_accuracy
              << '\n';
  });
  hgr::nn::save_checkpoint(model, std::filesystem::path(out));
  std::cout << "trained on " << samples.size() << " sequences; checkpoint " << out << ", log "
            << log_path << '\n';
  return 0;
}

int cmd_loocv(const std::string& dataset, int classes, std::uint64_t seed, const std::string& out,
              const std::string& config_path, const std::string& mode, int subjects) {
  auto config = load_pipeline_config(config_path);
  config.classes = classes;
  config.train.seed = seed;
  if (!mode.empty()) {
    config.mode = hgr::branch_mode_from_string(mode);
  }
  const auto index = hgr::scan_dataset(dataset);
  const auto report = hgr::run_loocv(
      index, config, subjects > 0 ? std::optional<int>(subjects) : std::nullopt,
      [](const std::string& line) { std::cerr << line << '\n'; });
  hgr::write_report(report, out);
  hgr::write_summary_text(report, std::cout);
  return 0;
}

int cmd_synth(const std::string& out, int subjects, int trials, std::uint64_t seed,
              int finger_configs, const std::string& scripts_path, double noise) {
  std::vector<hgr::GestureScript> scripts;
  if (scripts_path.empty()) {
    scripts = hgr::builtin_scripts();
  } else {
    std::ifstream in(scripts_path);
    if (!in) {
      throw hgr::Error(hgr::Errc::IoError, "cannot open " + scripts_path);
    }
    scripts = hgr::parse_scripts(in);
  }
  hgr::SynthOptions options;
  options.subjects = subjects;
  options.trials = trials;
  options.seed = seed;
  options.finger_configs = finger_configs;
  options.noise_sigma = noise;
  const auto sequences = hgr::generate_dataset(scripts, options);
  hgr::export_dhg_tree(sequences, out);
  std::cout << "wrote " << sequences.size() << " sequences to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hand gesture recognition from skeleton sequences"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 0;
  app.add_option("--jobs", jobs, "OpenMP worker threads (default: runtime default)")
      ->check(CLI::NonNegativeNumber);

  std::string dataset;
  std::string out;
  std::string config_path;
  std::string features = "global,finger,skeleton";
  int classes = 14;
  std::uint64_t seed = 0;

  auto* extract = app.add_subcommand("extract", "Write per-sequence feature files");
  extract->add_option("--dataset", dataset, "DHG-format dataset root")->required();
  extract->add_option("--out", out, "Output directory")->required();
  extract->add_option("--features", features, "Comma-separated kinds: global,finger,skeleton")
      ->capture_default_str();
  extract->add_option("--config", config_path, "key = value config file");

  std::string features_dir;
  std::string log_path;
  auto* train = app.add_subcommand("train", "Train a classifier on extracted features");
  train->add_option("--features", features_dir, "Feature directory from 'extract'")->required();
  train->add_option("--classes", classes, "14 or 28")->check(CLI::IsMember({14, 28}))
      ->capture_default_str();
  train->add_option("--seed", seed, "Random seed")->capture_default_str();
  train->add_option("--config", config_path, "key = value config file");
  train->add_option("--out", out, "Checkpoint path")->required();
  train->add_option("--log", log_path, "Epoch log CSV (default: <out>.epochs.csv)");

  std::string mode;
  int subjects = 0;
  auto* loocv = app.add_subcommand("loocv", "Leave-one-subject-out evaluation");
  loocv->add_option("--dataset", dataset, "DHG-format dataset root")->required();
  loocv->add_option("--classes", classes, "14 or 28")->check(CLI::IsMember({14, 28}))
      ->capture_default_str();
  loocv->add_option("--seed", seed, "Random seed")->capture_default_str();
  loocv->add_option("--out", out, "Report directory")->required();
  loocv->add_option("--config", config_path, "key = value config file");
  loocv->add_option("--mode", mode, "Branches: full, motion or skeleton")
      ->check(CLI::IsMember({"full", "motion", "skeleton"}));
  loocv->add_option("--subjects", subjects, "Number of subjects (default: largest id)")
      ->check(CLI::NonNegativeNumber);

  int synth_subjects = 4;
  int trials = 5;
  int finger_configs = 1;
  std::string scripts_path;
  double noise = 0.001;
  std::uint64_t synth_seed = 1;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic DHG-format dataset");
  synth->add_option("--out", out, "Output root")->required();
  synth->add_option("--subjects", synth_subjects, "Subjects")->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--trials", trials, "Trials per subject and script")
      ->check(CLI::PositiveNumber)->capture_default_str();
  synth->add_option("--seed", synth_seed, "Random seed")->capture_default_str();
  synth->add_option("--finger-configs", finger_configs, "1 or 2")->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  synth->add_option("--scripts", scripts_path, "Gesture script file (default: built-in)");
  synth->add_option("--noise", noise, "Joint noise sigma in meters")
      ->check(CLI::NonNegativeNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  set_jobs(jobs);
  try {
    if (*extract) return cmd_extract(dataset, out, features, config_path);
    if (*train) return cmd_train(features_dir, classes, seed, config_path, out, log_path);
    if (*loocv) return cmd_loocv(dataset, classes, seed, out, config_path, mode, subjects);
    if (*synth) {
      return cmd_synth(out, synth_subjects, trials, synth_seed, finger_configs, scripts_path,
                       noise);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const hgr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
