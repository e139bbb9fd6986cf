#pragma once
// Batch runner: build data, train under a defense, evaluate an attack grid,
// and write CSV/JSON artifacts. Also the fading-Gaussian study and the
// table writer.

#include "lsr/attacks.hpp"
#include "lsr/data.hpp"
#include "lsr/network.hpp"
#include "lsr/smoothing.hpp"
#include "lsr/training.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace lsr {

inline constexpr const char* kVersion = "1.0.0";

enum class DatasetKind { mnist, moons, gaussian };
enum class DefenseKind { none, ls, pgd };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::mnist;
  std::filesystem::path path;     // mnist: directory with the four IDX files
  std::size_t train_n = 10000;    // mnist subset sizes; moons/gaussian sample sizes
  std::size_t test_n = 2000;
  double noise = 0.1;             // moons
  std::size_t dim = 10;           // gaussian (fading schedule)
};

struct ModelSpec {
  std::vector<std::size_t> hidden;  // empty = linear
};

struct DefenseSpec {
  DefenseKind kind = DefenseKind::none;
  SmoothingConfig smoothing;  // ls
  PgdTraining pgd;            // pgd
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  DatasetSpec dataset;
  ModelSpec model;
  DefenseSpec defense;
  std::optional<double> lr;  // default depends on the model
  int epochs = 5;
  std::size_t batch_size = kDefaultBatchSize;
  std::vector<AttackConfig> attacks;
  EvalOptions eval;
  std::filesystem::path output_dir;  // empty = nothing written

  /// Throws ConfigError on unknown keys or values of the wrong type, and
  /// DomainError for out-of-range values.
  static ExperimentConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  void validate() const;
  bool model_is_linear() const noexcept;
  TrainConfig train_config() const;
  /// "Normal classifier", "ALS", "PGD training", ...
  std::string defense_label() const;
};

/// FNV-1a 64 over the canonical JSON of the config (output_dir excluded),
/// as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct SplitData {
  Dataset train;
  Dataset test;
};

/// MNIST: uniform subsets of the official train/test files drawn with seeds
/// derived from `seed`. Synthetic sets: independent draws.
SplitData load_experiment_data(const DatasetSpec& spec, std::uint64_t seed);

DenseNetwork build_model(const ModelSpec& spec, std::size_t input_dim, std::size_t classes,
                         std::uint64_t seed);

/// Report plus the (defense, alpha) it came from.
struct LabeledReport {
  std::string defense;
  std::optional<double> alpha;
  EvalReport report;
};

nlohmann::json report_to_json(const LabeledReport& r);
LabeledReport report_from_json(const nlohmann::json& doc);

struct ExperimentResult {
  LabeledReport report;
  DenseNetwork model;
  TrainStats stats;
  std::string hash;
};

/// Writes results.csv, report.json, model.json and manifest.json into
/// cfg.output_dir when set. Module errors are rethrown with the config hash
/// prepended to the message.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// One CSV line per (defense, attack, epsilon); a "clean" row carries the
/// standard accuracy.
std::string results_csv(const LabeledReport& r);

struct Table {
  std::string name;  // attack name or "standard"
  std::string csv;
};

/// One table per attack plus a standard-accuracy table. Rows are (defense,
/// alpha), columns are the epsilons seen for that attack. A trailing "*"
/// marks the best value in a column (all ties), "!" marks values below
/// 1/K; a best value below 1/K is not starred. Cells for epsilons a report
/// did not evaluate stay empty. Throws ConfigError for an empty list or
/// mixed class counts.
std::vector<Table> make_tables(const std::vector<LabeledReport>& reports);

struct GaussianStudyConfig {
  std::size_t dim = 10;
  std::vector<double> alphas{0.01, 0.1, 0.4};
  std::vector<double> eps_grid;  // empty = 0, 0.02, ..., 0.6
  std::uint64_t seed = 0;
  std::size_t n = 20000;
  int epochs = 50;
  double lr = 0.1;
  std::size_t cloud_n = 2000;  // d = 2 sample cloud
  std::filesystem::path output_dir;
};

struct Curve {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (eps, accuracy)
};

struct GaussianStudyResult {
  std::vector<Curve> curves;
  std::vector<std::pair<std::string, std::vector<double>>> weights;
};

/// Curves for the Bayes, optimal-robust and ALS-trained (one per alpha)
/// classifiers, all evaluated in closed form. Writes curves/<name>.txt as
/// "eps accuracy" lines, weights.csv, and the d = 2 cloud (samples_d2.txt,
/// "x1 x2 y") with boundaries_d2.txt ("w1 w2" for (1,1) and (4,1)).
GaussianStudyResult run_gaussian_study(const GaussianStudyConfig& cfg);

}  // namespace lsr
