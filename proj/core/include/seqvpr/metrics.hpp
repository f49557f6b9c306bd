#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqvpr/dataset.hpp"
#include "seqvpr/matcher.hpp"

namespace seqvpr {

/// Correctness of one query window's best match, with its match score.
struct Label {
  bool correct = false;
  double score = 0.0;
};

struct PrPoint {
  double threshold = 0.0;
  double precision = 1.0;
  double recall = 0.0;
};

/// Points ordered by descending threshold, starting at a sentinel above the
/// highest score. Recall is non-decreasing along the list.
struct PrCurve {
  std::vector<PrPoint> points;
  double auc = 0.0;
};

/// Window i is correct iff best_ref_window[i] lies in the ground-truth range
/// of query frame i (the window's first frame).
std::vector<Label> label_matches(const SequenceMatchSet& matches, const GroundTruth& gt);

/// Accepts windows with score >= threshold. Empty denominators give 1.0.
PrPoint precision_recall(std::span<const Label> labels, double threshold);

/// Trapezoidal area under (recall, precision) points, with (0, first
/// precision) prepended. Points must be ordered by non-decreasing recall.
double trapezoid_auc(std::span<const PrPoint> points);

/// Full threshold sweep. A labeling with no correct window has AUC 0.
PrCurve pr_curve(std::span<const Label> labels);

/// Precision when every window is accepted: #correct / #windows.
double p_at_r100(std::span<const Label> labels);

struct PcuInputs {
  double p_r100 = 0.0;
  double t_e = 0.0;
  double t_e_max = 0.0;
};

/// P_R100 * log10(t_e_max / t_e + 9). Requires 0 < t_e <= t_e_max and
/// P_R100 in [0, 1]; throws std::invalid_argument otherwise.
double pcu(const PcuInputs& inputs);

enum class CostModel { naive, cached };

std::string_view to_string(CostModel model);
/// Accepts "naive" or "cached".
CostModel parse_cost_model(std::string_view text);

/// Per-window encoding cost: naive charges all k frames, cached charges one.
double sequence_cost_model(double t_e, std::size_t k, CostModel model);

/// 100 * (auc_seq - auc_single) / auc_single, or nullopt when auc_single is 0.
std::optional<double> boost_pct(double auc_seq, double auc_single);

struct MetricsReport {
  std::string technique_name;
  std::string dataset_name;
  std::size_t k = 1;
  PrCurve pr_curve;
  double auc = 0.0;
  double p_r100 = 0.0;
  std::optional<double> pcu;             // nullopt when t_e is 0
  CostModel encode_time_model = CostModel::naive;
  std::optional<double> boost_pct_vs_k1;  // nullopt when the K=1 AUC is 0
  double encode_time_per_frame = 0.0;     // raw t_e of the technique
  double sequence_encode_time = 0.0;      // t_e after the cost model
  std::optional<std::string> skipped;     // reason, when the cell was not evaluated
};

}  // namespace seqvpr
