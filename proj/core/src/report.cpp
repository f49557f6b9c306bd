#include "seqvpr/report.hpp"

#include <cctype>

#include <fmt/format.h>

#include "json.hpp"

namespace seqvpr {
namespace {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string optional_number(const std::optional<double>& value) {
  return value ? format_number(*value) : "n/a";
}

nlohmann::ordered_json optional_json(const std::optional<double>& value) {
  return value ? nlohmann::ordered_json(*value) : nlohmann::ordered_json("n/a");
}

}  // namespace

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // no "-0.000000"
  return fmt::format("{:.6f}", value);
}

std::string slugify(std::string_view name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    out += (std::isalnum(u) || c == '-' || c == '_' || c == '.') ? c : '_';
  }
  return out.empty() ? "_" : out;
}

std::string summary_csv(const std::vector<MetricsReport>& reports) {
  std::string out = "dataset,technique,k,auc,p_r100,pcu,boost_pct,cost_model\n";
  for (const auto& r : reports) {
    if (r.skipped) continue;
    out += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(r.dataset_name), csv_field(r.technique_name), r.k,
                       format_number(r.auc), format_number(r.p_r100), optional_number(r.pcu),
                       optional_number(r.boost_pct_vs_k1), to_string(r.encode_time_model));
  }
  return out;
}

std::string summary_json(const std::vector<MetricsReport>& reports) {
  nlohmann::ordered_json doc;
  doc["boost_definition"] = "relative: 100 * (auc_k - auc_k1) / auc_k1";
  doc["pcu_definition"] = "p_r100 * log10(t_e_max / t_e + 9), t_e after the cost model";
  auto& list = doc["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["dataset"] = r.dataset_name;
    j["technique"] = r.technique_name;
    j["k"] = r.k;
    if (r.skipped) {
      j["skipped"] = *r.skipped;
      list.push_back(std::move(j));
      continue;
    }
    j["auc"] = r.auc;
    j["p_r100"] = r.p_r100;
    j["pcu"] = optional_json(r.pcu);
    j["boost_pct_vs_k1"] = optional_json(r.boost_pct_vs_k1);
    j["cost_model"] = std::string(to_string(r.encode_time_model));
    j["encode_time_per_frame_sec"] = r.encode_time_per_frame;
    j["sequence_encode_time_sec"] = r.sequence_encode_time;
    auto& points = j["pr_curve"] = nlohmann::ordered_json::array();
    for (const auto& p : r.pr_curve.points) points.push_back({p.threshold, p.precision, p.recall});
    list.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::string timings_csv(const std::vector<TimingRecord>& timings) {
  std::string out = "dataset,technique,stage,k,seconds,source\n";
  for (const auto& t : timings) {
    out += fmt::format("{},{},{},{},{:.9f},{}\n", csv_field(t.dataset), csv_field(t.technique), t.stage, t.k,
                       t.seconds, t.source);
  }
  return out;
}

std::string pr_curve_csv(const PrCurve& curve) {
  std::string out = "threshold,precision,recall\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{:.17g},{},{}\n", p.threshold, format_number(p.precision), format_number(p.recall));
  }
  return out;
}

}  // namespace seqvpr
