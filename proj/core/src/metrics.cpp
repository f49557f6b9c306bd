#include "seqvpr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "seqvpr/error.hpp"

namespace seqvpr {
namespace {

void require_labels(std::span<const Label> labels) {
  if (labels.empty()) throw std::invalid_argument("at least one label is required");
  for (const auto& l : labels) {
    if (!std::isfinite(l.score)) throw std::invalid_argument("label scores must be finite");
  }
}

double ratio_or_one(std::size_t num, std::size_t den) {
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<Label> label_matches(const SequenceMatchSet& matches, const GroundTruth& gt) {
  if (matches.best_score.size() != matches.best_ref_window.size()) {
    throw std::invalid_argument("match set has mismatched score and index lists");
  }
  if (gt.entries.size() < matches.num_windows()) {
    throw Error("ground truth covers " + std::to_string(gt.entries.size()) + " queries but " +
                std::to_string(matches.num_windows()) + " query windows need labels");
  }
  std::vector<Label> labels(matches.num_windows());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    labels[i].correct = gt.entries[i].contains(matches.best_ref_window[i]);
    labels[i].score = matches.best_score[i];
  }
  return labels;
}

PrPoint precision_recall(std::span<const Label> labels, double threshold) {
  require_labels(labels);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& l : labels) {
    const bool accepted = l.score >= threshold;
    if (accepted && l.correct) ++tp;
    if (accepted && !l.correct) ++fp;
    if (!accepted && l.correct) ++fn;
  }
  return {threshold, ratio_or_one(tp, tp + fp), ratio_or_one(tp, tp + fn)};
}

double trapezoid_auc(std::span<const PrPoint> points) {
  if (points.empty()) return 0.0;
  double area = 0.0;
  double prev_recall = 0.0;
  double prev_precision = points.front().precision;
  for (const auto& p : points) {
    area += (p.recall - prev_recall) * (p.precision + prev_precision) / 2.0;
    prev_recall = p.recall;
    prev_precision = p.precision;
  }
  return area;
}

PrCurve pr_curve(std::span<const Label> labels) {
  require_labels(labels);

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return labels[a].score > labels[b].score; });
  const std::size_t total_correct =
      static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](const Label& l) { return l.correct; }));

  PrCurve curve;
  const double top = labels[order.front()].score;
  const double sentinel = std::nextafter(top, std::numeric_limits<double>::infinity());
  curve.points.push_back({sentinel, 1.0, ratio_or_one(0, total_correct)});

  std::size_t tp = 0, fp = 0;
  for (std::size_t n = 0; n < order.size();) {
    const double threshold = labels[order[n]].score;
    // Accept every label tied at this threshold before emitting a point.
    while (n < order.size() && labels[order[n]].score == threshold) {
      (labels[order[n]].correct ? tp : fp) += 1;
      ++n;
    }
    curve.points.push_back({threshold, ratio_or_one(tp, tp + fp), ratio_or_one(tp, total_correct)});
  }

  curve.auc = total_correct == 0 ? 0.0 : trapezoid_auc(curve.points);
  return curve;
}

double p_at_r100(std::span<const Label> labels) {
  require_labels(labels);
  const auto correct = std::count_if(labels.begin(), labels.end(), [](const Label& l) { return l.correct; });
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double pcu(const PcuInputs& in) {
  if (!(in.p_r100 >= 0.0 && in.p_r100 <= 1.0)) throw std::invalid_argument("P_R100 must lie in [0, 1]");
  if (!(in.t_e > 0.0) || !std::isfinite(in.t_e)) throw std::invalid_argument("encoding time t_e must be > 0");
  if (!(in.t_e <= in.t_e_max) || !std::isfinite(in.t_e_max)) {
    throw std::invalid_argument("encoding time t_e must not exceed t_e_max");
  }
  return in.p_r100 * std::log10(in.t_e_max / in.t_e + 9.0);
}

std::string_view to_string(CostModel model) { return model == CostModel::naive ? "naive" : "cached"; }

CostModel parse_cost_model(std::string_view text) {
  if (text == "naive") return CostModel::naive;
  if (text == "cached") return CostModel::cached;
  throw std::invalid_argument("unknown cost model '" + std::string(text) + "' (expected naive or cached)");
}

double sequence_cost_model(double t_e, std::size_t k, CostModel model) {
  if (k < 1) throw std::invalid_argument("sequence length must be >= 1");
  return model == CostModel::naive ? t_e * static_cast<double>(k) : t_e;
}

std::optional<double> boost_pct(double auc_seq, double auc_single) {
  if (!(auc_single > 0.0)) return std::nullopt;
  return 100.0 * (auc_seq - auc_single) / auc_single;
}

}  // namespace seqvpr
