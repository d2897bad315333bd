#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bregnas/data.hpp"
#include "bregnas/model.hpp"
#include "bregnas/optim.hpp"
#include "bregnas/regularizer.hpp"

namespace bregnas {

/// Full description of one experiment. Defaults reproduce the reference
/// restoration setup; every field can be overridden from the config file or
/// the CLI.
struct RunConfig {
  std::string task = "denoise";  // denoise | deblur
  std::size_t layers = 6;
  std::size_t width = 784;
  std::string regularizer = "rows";  // rows | skip_rows
  bool positive_skips = false;
  double mu = 0.07;
  double delta = 1.0;
  double eta = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t batch_size = 128;
  std::size_t epochs = 100;
  std::size_t seeds = 10;
  std::uint64_t seed_offset = 0;
  double init_density = 0.01;
  std::string init_scheme = "he";  // he | xavier
  bool rescale_variance = true;
  std::string final_activation = "relu";  // relu | linear
  double noise_std = 0.05;
  std::size_t blur_size = 9;
  double blur_sigma = 5.0;
  bool resample_noise = false;
  std::size_t train_subset = 0;  // 0 = full split
  std::size_t test_subset = 0;
  bool save_checkpoints = true;
  std::string data_dir = "data";
  std::string out_dir = "out";

  void validate() const;
  Task task_kind() const;
  FinalActivation final_act() const;
  HyperParams hyper() const { return {eta, beta1, beta2, eps, delta}; }
  CorruptionSpec corruption() const { return {task_kind(), noise_std, blur_size, blur_sigma}; }
};

std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Everything recorded for one training run. Aggregates are recomputable
/// from these records alone.
struct SeedRecord {
  std::uint64_t seed = 0;
  std::vector<std::size_t> widths;  // L+1 entries; entry 0 is the input width
  std::vector<double> tau;          // final skip scalars, packed lower-triangular
  double test_mse = 0.0;
  std::vector<double> train_loss;               // mean minibatch loss per epoch
  std::vector<std::size_t> active_rows_trace;   // total active rows per epoch
  std::vector<std::size_t> active_skips_trace;  // active skip count per epoch
};

struct Aggregate {
  bool complete = false;
  std::size_t runs = 0;
  // Per layer (input prepended): min, q1, median, q3, max of the widths.
  std::vector<std::array<double, 5>> width_quartiles;
  Tensor mean_connectivity;  // L x L lower-triangular
  double test_mse_mean = 0.0;
  double test_mse_std = 0.0;  // population standard deviation
};

struct ArchReport {
  RunConfig config;
  std::vector<SeedRecord> records;
  std::vector<std::string> failures;
  Aggregate aggregate;
};

/// Masked sparse initialization: every weight row is drawn whole with
/// probability init_density and left exactly zero otherwise; active rows use
/// He (std sqrt(2/d)) or Xavier (std sqrt(1/d)) normals, with the variance
/// rescaled by 1/density when rescale_variance is set. Biases and skip
/// scalars start at zero.
DenseResidualNet sparse_init(const RunConfig& config, Rng& rng);

Regularizer build_regularizer(const RunConfig& config);

/// One training run on pre-loaded clean splits. Corruption, init, and
/// batching streams derive from the seed. Aborts with a diagnostic
/// checkpoint (when save_checkpoints is set) on a step error.
std::pair<DenseResidualNet, SeedRecord> train_one(const RunConfig& config, std::uint64_t seed,
                                                  const Dataset& train_clean,
                                                  const Dataset& test_clean);

/// Convenience overload that loads the data itself.
std::pair<DenseResidualNet, SeedRecord> train_one(const RunConfig& config, std::uint64_t seed);

/// Runs all seeds (seed_offset .. seed_offset+seeds-1), aggregates, and
/// persists report.json, widths.csv, connectivity.csv, loss_curve.csv plus
/// per-seed records (and checkpoints) under config.out_dir. Per-seed
/// failures are recorded and mark the aggregate incomplete.
ArchReport run_experiment(const RunConfig& config);

Aggregate aggregate_records(const RunConfig& config, const std::vector<SeedRecord>& records,
                            bool complete);

/// Mean squared error of the net's reconstructions over a paired set,
/// evaluated in file order with the configured batch size.
double evaluate_mse(const DenseResidualNet& net, const PairedDataset& pairs,
                    std::size_t batch_size);

// Report persistence (report.json + CSV tables + per-seed records).
void save_report(const ArchReport& report);
std::string report_to_json(const ArchReport& report);
ArchReport report_from_json(const std::string& text);
std::string seed_record_to_json(const SeedRecord& record);
SeedRecord seed_record_from_json(const std::string& text);

/// Re-aggregates a previously written output directory from its per-seed
/// record files and rewrites the report artifacts.
ArchReport reaggregate_dir(const std::string& out_dir);

}  // namespace bregnas
