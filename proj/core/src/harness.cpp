#include "seqvpr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "json.hpp"
#include "seqvpr/dataset.hpp"
#include "seqvpr/descriptor_io.hpp"
#include "seqvpr/error.hpp"
#include "seqvpr/matcher.hpp"
#include "seqvpr/parallel.hpp"
#include "seqvpr/report.hpp"
#include "seqvpr/svg_plot.hpp"

namespace seqvpr {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(fmt::format("config: unknown key '{}' in {}", key, where));
    }
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) { return p.is_absolute() ? p : base / p; }

template <typename T>
T get_or(const json& object, const char* key, T fallback) {
  return object.contains(key) ? object.at(key).get<T>() : fallback;
}

HogParams parse_hog_params(const json& j) {
  reject_unknown_keys(j,
                      {"resize_width", "resize_height", "cell_size", "block_cells", "block_stride_cells", "bins",
                       "block_norm_epsilon"},
                      "hog params");
  HogParams p;
  p.resize_width = get_or(j, "resize_width", p.resize_width);
  p.resize_height = get_or(j, "resize_height", p.resize_height);
  p.cell_size = get_or(j, "cell_size", p.cell_size);
  p.block_cells = get_or(j, "block_cells", p.block_cells);
  p.block_stride_cells = get_or(j, "block_stride_cells", p.block_stride_cells);
  p.bins = get_or(j, "bins", p.bins);
  p.block_norm_epsilon = get_or(j, "block_norm_epsilon", p.block_norm_epsilon);
  p.validate();
  return p;
}

DatasetSpec parse_dataset(const json& j, const fs::path& base) {
  reject_unknown_keys(j, {"name", "query_dir", "ref_dir", "gt", "synthetic"}, "dataset");
  DatasetSpec d;
  d.name = j.at("name").get<std::string>();
  if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    reject_unknown_keys(s, {"places", "dim", "sigma", "encode_time_per_frame_sec"}, "synthetic dataset");
    SyntheticSpec spec;
    spec.places = get_or(s, "places", spec.places);
    spec.dim = get_or(s, "dim", spec.dim);
    spec.sigma = get_or(s, "sigma", spec.sigma);
    spec.encode_time_per_frame_sec = get_or(s, "encode_time_per_frame_sec", spec.encode_time_per_frame_sec);
    d.synthetic = spec;
  } else {
    d.query_dir = resolve(base, j.at("query_dir").get<std::string>());
    d.ref_dir = resolve(base, j.at("ref_dir").get<std::string>());
  }
  if (j.contains("gt")) {
    const json& g = j.at("gt");
    reject_unknown_keys(g, {"csv", "aligned"}, "gt");
    if (g.contains("csv") == g.contains("aligned")) throw Error("config: gt needs exactly one of csv or aligned");
    if (g.contains("csv")) d.gt.csv = resolve(base, g.at("csv").get<std::string>());
    if (g.contains("aligned")) d.gt.aligned_tolerance = g.at("aligned").get<std::size_t>();
  }
  return d;
}

TechniqueSpec parse_technique(const json& j) {
  reject_unknown_keys(j, {"name", "kind", "params", "data", "manifest", "encode_time_per_frame_sec"}, "technique");
  TechniqueSpec t;
  t.name = j.at("name").get<std::string>();
  const auto kind = get_or<std::string>(j, "kind", "hog");
  if (kind == "hog") {
    t.kind = TechniqueKind::hog;
    if (j.contains("params")) t.hog = parse_hog_params(j.at("params"));
    t.manifest = get_or<std::string>(j, "manifest", "");
  } else if (kind == "import") {
    t.kind = TechniqueKind::import;
    t.data = j.at("data").get<std::string>();
    t.manifest = j.at("manifest").get<std::string>();
  } else if (kind == "synthetic") {
    t.kind = TechniqueKind::synthetic;
  } else {
    throw Error("config: unknown technique kind '" + kind + "'");
  }
  if (j.contains("encode_time_per_frame_sec")) {
    const double te = j.at("encode_time_per_frame_sec").get<double>();
    if (!(te >= 0.0)) throw Error("config: encode_time_per_frame_sec must be >= 0");
    t.encode_time_per_frame_sec = te;
  }
  return t;
}

/// Descriptors, similarity matrix and ground truth for one (dataset, technique).
struct PairData {
  std::optional<std::string> skipped;
  std::optional<SimilarityMatrix> sim;
  std::optional<GroundTruth> gt;
  double t_e = 0.0;
};

bool applies(const TechniqueSpec& t, const DatasetSpec& d) {
  return (t.kind == TechniqueKind::synthetic) == d.synthetic.has_value();
}

std::string not_applicable_reason(const TechniqueSpec& t, const DatasetSpec& d) {
  if (d.synthetic) return fmt::format("technique '{}' needs image or descriptor files; dataset '{}' is synthetic", t.name, d.name);
  return fmt::format("synthetic technique '{}' only applies to synthetic datasets", t.name);
}

void require_exists(const fs::path& p, std::string_view what) {
  std::error_code ec;
  if (!fs::exists(p, ec)) throw Error(fmt::format("{} not found: {}", what, p.string()));
}

void validate_inputs(const ExperimentConfig& config) {
  if (config.datasets.empty()) throw Error("config: no datasets");
  if (config.techniques.empty()) throw Error("config: no techniques");
  std::set<std::string> names;
  for (const auto& d : config.datasets) {
    if (!names.insert(d.name).second) throw Error("config: duplicate dataset name '" + d.name + "'");
  }
  names.clear();
  for (const auto& t : config.techniques) {
    if (!names.insert(t.name).second) throw Error("config: duplicate technique name '" + t.name + "'");
  }

  for (const auto& d : config.datasets) {
    if (d.synthetic) continue;
    std::error_code ec;
    if (!fs::is_directory(d.query_dir, ec)) throw Error("query_dir not found: " + d.query_dir.string());
    if (!fs::is_directory(d.ref_dir, ec)) throw Error("ref_dir not found: " + d.ref_dir.string());
    if (d.gt.csv) require_exists(*d.gt.csv, "ground truth csv");
    for (const auto& t : config.techniques) {
      if (!applies(t, d)) continue;
      if (t.kind == TechniqueKind::import) {
        for (bool query : {true, false}) {
          require_exists(resolve(config.base_dir, expand_path_template(t.data, d, query)), "descriptor file");
          require_exists(resolve(config.base_dir, expand_path_template(t.manifest, d, query)), "manifest");
        }
      } else if (t.kind == TechniqueKind::hog && !t.manifest.empty()) {
        require_exists(resolve(config.base_dir, expand_path_template(t.manifest, d, true)), "manifest");
      }
    }
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

std::vector<std::size_t> normalize_k_values(std::vector<std::size_t> k_values) {
  if (k_values.empty()) throw std::invalid_argument("k_values must not be empty");
  if (std::find(k_values.begin(), k_values.end(), std::size_t{0}) != k_values.end()) {
    throw std::invalid_argument("sequence lengths must be >= 1");
  }
  k_values.push_back(1);
  std::sort(k_values.begin(), k_values.end());
  k_values.erase(std::unique(k_values.begin(), k_values.end()), k_values.end());
  return k_values;
}

std::vector<std::size_t> k_sweep(std::string_view name) {
  if (name == "paper") return kDefaultKValues;
  if (name == "full") {
    std::vector<std::size_t> ks(15);
    for (std::size_t k = 1; k <= 15; ++k) ks[k - 1] = k;
    return ks;
  }
  throw std::invalid_argument("unknown k sweep '" + std::string(name) + "' (expected paper or full)");
}

ExperimentConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config must be a JSON object");

  try {
    reject_unknown_keys(doc, {"datasets", "techniques", "k_values", "cost_model", "output_dir", "seed", "workers"},
                        "config");
    ExperimentConfig config;
    config.base_dir = base_dir;
    for (const auto& d : doc.at("datasets")) config.datasets.push_back(parse_dataset(d, base_dir));
    for (const auto& t : doc.at("techniques")) config.techniques.push_back(parse_technique(t));
    if (doc.contains("k_values")) config.k_values = doc.at("k_values").get<std::vector<std::size_t>>();
    config.k_values = normalize_k_values(config.k_values);
    if (doc.contains("cost_model")) config.cost_model = parse_cost_model(doc.at("cost_model").get<std::string>());
    config.output_dir = resolve(base_dir, get_or<std::string>(doc, "output_dir", "results"));
    config.seed = get_or<std::uint64_t>(doc, "seed", 0);
    config.workers = get_or<std::size_t>(doc, "workers", 0);
    return config;
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text, fs::absolute(path).parent_path());
}

std::string expand_path_template(std::string_view pattern, const DatasetSpec& dataset, bool query_traverse) {
  const std::pair<std::string_view, std::string> substitutions[] = {
      {"{dataset}", dataset.name},
      {"{traverse}", query_traverse ? "query" : "reference"},
      {"{traverse_dir}", (query_traverse ? dataset.query_dir : dataset.ref_dir).string()},
  };
  std::string out(pattern);
  for (const auto& [key, value] : substitutions) {
    for (std::size_t pos = out.find(key); pos != std::string::npos; pos = out.find(key, pos + value.size())) {
      out.replace(pos, key.size(), value);
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const std::vector<std::size_t> k_values = normalize_k_values(config.k_values);
  validate_inputs(config);

  const std::size_t n_datasets = config.datasets.size();
  const std::size_t n_techniques = config.techniques.size();
  ExperimentResult result;
  std::vector<PairData> pairs(n_datasets * n_techniques);

  for (std::size_t di = 0; di < n_datasets; ++di) {
    const DatasetSpec& dataset = config.datasets[di];

    std::optional<SyntheticDataset> synthetic;
    if (dataset.synthetic) {
      const auto& s = *dataset.synthetic;
      synthetic = generate_synthetic(s.places, s.dim, s.sigma, config.seed, s.encode_time_per_frame_sec);
    }
    std::optional<std::pair<ImageSet, ImageSet>> images;

    for (std::size_t ti = 0; ti < n_techniques; ++ti) {
      const TechniqueSpec& technique = config.techniques[ti];
      PairData& pair = pairs[di * n_techniques + ti];
      if (!applies(technique, dataset)) {
        pair.skipped = not_applicable_reason(technique, dataset);
        continue;
      }

      DescriptorSet queries, references;
      std::string time_source;
      switch (technique.kind) {
        case TechniqueKind::synthetic:
          queries = synthetic->queries;
          references = synthetic->references;
          time_source = "synthetic";
          break;
        case TechniqueKind::import:
          queries = import_descriptors(resolve(config.base_dir, expand_path_template(technique.data, dataset, true)),
                                       resolve(config.base_dir, expand_path_template(technique.manifest, dataset, true)));
          references =
              import_descriptors(resolve(config.base_dir, expand_path_template(technique.data, dataset, false)),
                                 resolve(config.base_dir, expand_path_template(technique.manifest, dataset, false)));
          time_source = "manifest";
          break;
        case TechniqueKind::hog:
          if (!images) images.emplace(load_image_set(dataset.query_dir), load_image_set(dataset.ref_dir));
          queries = encode_set(images->first, technique.hog, config.workers);
          references = encode_set(images->second, technique.hog, config.workers);
          time_source = "measured";
          break;
      }

      pair.t_e = queries.encode_time_per_frame();
      if (technique.kind == TechniqueKind::hog && !technique.manifest.empty()) {
        pair.t_e = read_manifest(resolve(config.base_dir, expand_path_template(technique.manifest, dataset, true)))
                       .encode_time_per_frame_sec;
        time_source = "manifest";
      }
      if (technique.encode_time_per_frame_sec) {
        pair.t_e = *technique.encode_time_per_frame_sec;
        time_source = "config";
      }
      result.timings.push_back({dataset.name, technique.name, "encode_query_per_frame", 0,
                                queries.encode_time_per_frame(), technique.kind == TechniqueKind::hog ? "measured" : time_source});
      result.timings.push_back({dataset.name, technique.name, "encode_reference_per_frame", 0,
                                references.encode_time_per_frame(), technique.kind == TechniqueKind::hog ? "measured" : time_source});
      result.timings.push_back({dataset.name, technique.name, "t_e_used", 0, pair.t_e, time_source});

      const auto sim_start = Clock::now();
      pair.sim = build_similarity_matrix(queries, references, config.workers);
      result.timings.push_back({dataset.name, technique.name, "similarity_matrix", 0, seconds_since(sim_start), "measured"});

      const std::size_t q = pair.sim->rows();
      const std::size_t r = pair.sim->cols();
      if (synthetic) {
        pair.gt = synthetic->ground_truth;
      } else if (dataset.gt.csv) {
        pair.gt = load_ground_truth(*dataset.gt.csv, q, r);
      } else if (q == 0 || q > r) {
        pair.skipped = fmt::format("aligned ground truth needs 1 <= Q <= R (Q={}, R={})", q, r);
      } else {
        pair.gt = aligned_ground_truth(q, r, dataset.gt.aligned_tolerance);
      }
    }
  }

  // Every (dataset, technique, K) cell is an independent job.
  const std::size_t n_k = k_values.size();
  std::vector<MetricsReport> reports(pairs.size() * n_k);
  std::vector<double> match_seconds(reports.size(), 0.0);
  parallel_for(
      reports.size(),
      [&](std::size_t cell) {
        const std::size_t pair_index = cell / n_k;
        const std::size_t k = k_values[cell % n_k];
        const PairData& pair = pairs[pair_index];
        MetricsReport& report = reports[cell];
        report.dataset_name = config.datasets[pair_index / n_techniques].name;
        report.technique_name = config.techniques[pair_index % n_techniques].name;
        report.k = k;
        report.encode_time_model = config.cost_model;
        if (pair.skipped) {
          report.skipped = pair.skipped;
          return;
        }
        const std::size_t limit = std::min(pair.sim->rows(), pair.sim->cols());
        if (k > limit) {
          report.skipped = fmt::format("K={} exceeds min(Q, R)={}", k, limit);
          return;
        }
        const auto start = Clock::now();
        const auto labels = label_matches(match_sequences(*pair.sim, k), *pair.gt);
        report.pr_curve = pr_curve(labels);
        report.auc = report.pr_curve.auc;
        report.p_r100 = p_at_r100(labels);
        report.encode_time_per_frame = pair.t_e;
        report.sequence_encode_time = sequence_cost_model(pair.t_e, k, config.cost_model);
        match_seconds[cell] = seconds_since(start);
      },
      config.workers);

  // PCU normalizes against the slowest evaluated cell of the same dataset;
  // boost is relative to the K=1 cell of the same (dataset, technique).
  for (std::size_t di = 0; di < n_datasets; ++di) {
    const auto first = reports.begin() + static_cast<std::ptrdiff_t>(di * n_techniques * n_k);
    const auto last = first + static_cast<std::ptrdiff_t>(n_techniques * n_k);
    double t_e_max = 0.0;
    for (auto it = first; it != last; ++it) {
      if (!it->skipped) t_e_max = std::max(t_e_max, it->sequence_encode_time);
    }
    for (std::size_t ti = 0; ti < n_techniques; ++ti) {
      const auto cell0 = first + static_cast<std::ptrdiff_t>(ti * n_k);
      const MetricsReport& baseline = *cell0;  // k_values[0] == 1
      for (std::size_t ki = 0; ki < n_k; ++ki) {
        MetricsReport& report = *(cell0 + static_cast<std::ptrdiff_t>(ki));
        if (report.skipped) continue;
        if (report.sequence_encode_time > 0.0) {
          report.pcu = pcu({report.p_r100, report.sequence_encode_time, t_e_max});
        }
        if (baseline.skipped) continue;
        report.boost_pct_vs_k1 = boost_pct(report.auc, baseline.auc);
      }
    }
  }

  for (std::size_t cell = 0; cell < reports.size(); ++cell) {
    if (reports[cell].skipped) continue;
    result.timings.push_back({reports[cell].dataset_name, reports[cell].technique_name, "match_and_metrics",
                              reports[cell].k, match_seconds[cell], "measured"});
  }
  result.reports = std::move(reports);
  return result;
}

void emit_reports(const std::vector<MetricsReport>& reports, const fs::path& output_dir,
                  const std::vector<TimingRecord>& timings) {
  if (reports.empty()) throw Error("no reports to emit");

  std::error_code ec;
  fs::create_directories(output_dir / "plots", ec);
  if (!ec) fs::create_directories(output_dir / "pr_curves", ec);
  if (ec) throw Error("cannot create output directory " + output_dir.string() + ": " + ec.message());

  write_text(output_dir / "summary.json", summary_json(reports));
  write_text(output_dir / "summary.csv", summary_csv(reports));
  write_text(output_dir / "timings.csv", timings_csv(timings));

  for (const auto& r : reports) {
    if (r.skipped) continue;
    write_text(output_dir / "pr_curves" /
                   fmt::format("{}__{}__k{}.csv", slugify(r.dataset_name), slugify(r.technique_name), r.k),
               pr_curve_csv(r.pr_curve));
  }

  // Group evaluated cells by dataset, then technique, preserving report order.
  std::vector<std::string> dataset_order;
  std::map<std::string, std::vector<std::string>> technique_order;
  std::map<std::pair<std::string, std::string>, std::vector<const MetricsReport*>> cells;
  for (const auto& r : reports) {
    if (std::find(dataset_order.begin(), dataset_order.end(), r.dataset_name) == dataset_order.end()) {
      dataset_order.push_back(r.dataset_name);
    }
    if (r.skipped) continue;
    auto& techniques = technique_order[r.dataset_name];
    if (std::find(techniques.begin(), techniques.end(), r.technique_name) == techniques.end()) {
      techniques.push_back(r.technique_name);
    }
    cells[{r.dataset_name, r.technique_name}].push_back(&r);
  }

  for (const auto& dataset : dataset_order) {
    LineChart boost{dataset + ": AUC boost vs sequence length", "sequence length K", "boost over K=1 (%)", {}, true};
    LineChart auc{dataset + ": AUC, single-frame vs sequence", "sequence length K", "AUC", {}, false};
    LineChart pcu_chart{dataset + ": PCU vs sequence length", "sequence length K", "PCU", {}, false};

    for (const auto& technique : technique_order[dataset]) {
      PlotSeries boost_series{technique, {}, {}};
      PlotSeries auc_series{technique + " (sequence)", {}, {}};
      PlotSeries pcu_series{technique, {}, {}};
      std::optional<double> single;
      double k_min = 1.0, k_max = 1.0;
      for (const MetricsReport* r : cells[{dataset, technique}]) {
        const double k = static_cast<double>(r->k);
        k_max = std::max(k_max, k);
        if (r->k == 1) single = r->auc;
        if (r->k > 1 && r->boost_pct_vs_k1) {
          boost_series.x.push_back(k);
          boost_series.y.push_back(*r->boost_pct_vs_k1);
        }
        auc_series.x.push_back(k);
        auc_series.y.push_back(r->auc);
        if (r->pcu) {
          pcu_series.x.push_back(k);
          pcu_series.y.push_back(*r->pcu);
        }
      }
      boost.series.push_back(std::move(boost_series));
      auc.series.push_back(std::move(auc_series));
      if (single) auc.series.push_back({technique + " (single-frame)", {k_min, k_max}, {*single, *single}, true});
      pcu_chart.series.push_back(std::move(pcu_series));
    }

    const std::string slug = slugify(dataset);
    write_text(output_dir / "plots" / (slug + "_boost_vs_k.svg"), boost.to_svg());
    write_text(output_dir / "plots" / (slug + "_auc_vs_k.svg"), auc.to_svg());
    write_text(output_dir / "plots" / (slug + "_pcu_vs_k.svg"), pcu_chart.to_svg());
  }
}

}  // namespace seqvpr
