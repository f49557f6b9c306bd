#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqvpr/hog.hpp"
#include "seqvpr/metrics.hpp"

namespace seqvpr {

/// Where a dataset's ground truth comes from: a CSV file, or index alignment
/// with a frame tolerance.
struct GroundTruthSource {
  std::optional<std::filesystem::path> csv;
  std::size_t aligned_tolerance = 2;
};

/// Parameters of a generated (image-free) dataset.
struct SyntheticSpec {
  std::size_t places = 200;
  std::size_t dim = 256;
  double sigma = 1.0;
  double encode_time_per_frame_sec = 1e-3;
};

struct DatasetSpec {
  std::string name;
  std::filesystem::path query_dir;
  std::filesystem::path ref_dir;
  GroundTruthSource gt;
  std::optional<SyntheticSpec> synthetic;
};

enum class TechniqueKind { hog, import, synthetic };

/// A technique is either the built-in HOG encoder, a set of precomputed
/// descriptor files, or the descriptors of a synthetic dataset.
///
/// Import paths are templates. `{dataset}` expands to the dataset name,
/// `{traverse}` to "query" or "reference", and `{traverse_dir}` to the
/// dataset's query_dir or ref_dir.
struct TechniqueSpec {
  std::string name;
  TechniqueKind kind = TechniqueKind::hog;
  HogParams hog;
  std::string data;      // import: SVPR1 path template
  std::string manifest;  // import: manifest template; hog: optional timing manifest
  std::optional<double> encode_time_per_frame_sec;  // fixed t_e, overrides measurement
};

inline const std::vector<std::size_t> kDefaultKValues{1, 2, 5, 10, 15};

struct ExperimentConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<TechniqueSpec> techniques;
  std::vector<std::size_t> k_values = kDefaultKValues;
  CostModel cost_model = CostModel::naive;
  std::filesystem::path output_dir = "results";
  std::uint64_t seed = 0;
  std::size_t workers = 0;  // 0 = hardware concurrency
  std::filesystem::path base_dir;  // resolves relative template expansions
};

/// Sorts, deduplicates and inserts the K=1 baseline. Throws on K=0 or an
/// empty list.
std::vector<std::size_t> normalize_k_values(std::vector<std::size_t> k_values);

/// "paper" = {1, 2, 5, 10, 15}; "full" = 1..15.
std::vector<std::size_t> k_sweep(std::string_view name);

/// Parses a JSON config. Relative paths are resolved against base_dir.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string expand_path_template(std::string_view pattern, const DatasetSpec& dataset, bool query_traverse);

/// Wall-clock measurement, kept out of the reproducible summary.
struct TimingRecord {
  std::string dataset;
  std::string technique;
  std::string stage;
  std::size_t k = 0;  // 0 for stages that do not depend on K
  double seconds = 0.0;
  std::string source;  // measured, manifest, config or synthetic
};

struct ExperimentResult {
  std::vector<MetricsReport> reports;  // ordered by (dataset, technique, K) in config order
  std::vector<TimingRecord> timings;
};

/// Validates every input path up front, computes descriptors and the
/// similarity matrix once per (technique, dataset), then evaluates every K.
/// Cells that cannot run (K too large, technique not applicable) are
/// reported with `skipped` set instead of aborting the run.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Writes summary.json, summary.csv, timings.csv, per-cell PR curve CSVs and
/// three SVG plots per dataset under output_dir.
void emit_reports(const std::vector<MetricsReport>& reports, const std::filesystem::path& output_dir,
                  const std::vector<TimingRecord>& timings = {});

}  // namespace seqvpr
