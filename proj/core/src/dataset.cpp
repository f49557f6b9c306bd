#include "seqvpr/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <random>
#include <stdexcept>
#include <system_error>
#include <tuple>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "seqvpr/error.hpp"

namespace seqvpr {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_index(std::string_view field, std::size_t& out) {
  field = trim(field);
  if (field.empty()) return false;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (is_digit(a[i]) && is_digit(b[j])) {
      std::size_t i_end = i;
      std::size_t j_end = j;
      while (i_end < a.size() && is_digit(a[i_end])) ++i_end;
      while (j_end < b.size() && is_digit(b[j_end])) ++j_end;
      std::string_view run_a = a.substr(i, i_end - i);
      std::string_view run_b = b.substr(j, j_end - j);
      while (run_a.size() > 1 && run_a.front() == '0') run_a.remove_prefix(1);
      while (run_b.size() > 1 && run_b.front() == '0') run_b.remove_prefix(1);
      if (run_a.size() != run_b.size()) return run_a.size() < run_b.size();
      if (run_a != run_b) return run_a < run_b;
      i = i_end;
      j = j_end;
      continue;
    }
    if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
    ++i;
    ++j;
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

std::uint8_t bt601_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  // 0.299 R + 0.587 G + 0.114 B, rounded half up, in exact integer arithmetic.
  const unsigned weighted = 299u * r + 587u * g + 114u * b;
  return static_cast<std::uint8_t>((weighted + 500u) / 1000u);
}

GrayImage decode_grayscale(const std::filesystem::path& file) {
  cv::Mat raw;
  try {
    raw = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw Error("cannot decode image " + file.string() + ": " + e.what());
  }
  if (raw.empty()) throw Error("cannot decode image " + file.string());

  cv::Mat bytes;
  switch (raw.depth()) {
    case CV_8U:
      bytes = raw;
      break;
    case CV_16U:
      raw.convertTo(bytes, CV_8U, 1.0 / 257.0);
      break;
    case CV_32F:
    case CV_64F:
      raw.convertTo(bytes, CV_8U, 255.0);
      break;
    default:
      throw Error("unsupported pixel depth in " + file.string());
  }

  GrayImage out(bytes.cols, bytes.rows);
  const int channels = bytes.channels();
  for (int y = 0; y < bytes.rows; ++y) {
    const std::uint8_t* row = bytes.ptr<std::uint8_t>(y);
    for (int x = 0; x < bytes.cols; ++x) {
      const std::uint8_t* px = row + static_cast<std::ptrdiff_t>(x) * channels;
      if (channels == 1 || channels == 2) {
        out.at(x, y) = px[0];
      } else {
        // OpenCV stores colour as BGR(A).
        out.at(x, y) = bt601_luma(px[2], px[1], px[0]);
      }
    }
  }
  return out;
}

const std::set<std::string>& default_image_extensions() {
  static const std::set<std::string> extensions{".png", ".jpg", ".jpeg"};
  return extensions;
}

ImageSet load_image_set(const std::filesystem::path& directory, const std::set<std::string>& extensions) {
  std::error_code ec;
  if (!std::filesystem::is_directory(directory, ec)) {
    throw Error("image directory not found: " + directory.string());
  }

  std::set<std::string> wanted;
  for (const auto& ext : extensions) wanted.insert(lower(ext));

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    if (wanted.contains(lower(entry.path().extension().string()))) files.push_back(entry.path());
  }
  if (files.empty()) throw Error("no frames in " + directory.string());

  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return natural_less(a.filename().string(), b.filename().string());
  });

  ImageSet set;
  set.frames.reserve(files.size());
  for (const auto& file : files) set.frames.push_back(decode_grayscale(file));
  set.source_paths = std::move(files);
  return set;
}

GroundTruth parse_ground_truth(std::string_view csv_text, std::size_t num_queries, std::size_t num_refs) {
  if (csv_text.starts_with("\xEF\xBB\xBF")) csv_text.remove_prefix(3);

  std::vector<std::optional<RefRange>> rows(num_queries);
  bool seen_content = false;
  std::size_t line_no = 0;
  while (!csv_text.empty()) {
    const std::size_t eol = csv_text.find('\n');
    std::string_view line = trim(csv_text.substr(0, eol));
    csv_text.remove_prefix(eol == std::string_view::npos ? csv_text.size() : eol + 1);
    ++line_no;
    if (line.empty()) continue;

    std::size_t fields[3];
    std::size_t n_fields = 0;
    bool numeric = true;
    std::string_view rest = line;
    while (true) {
      const std::size_t comma = rest.find(',');
      const std::string_view field = rest.substr(0, comma);
      if (n_fields < 3 && !parse_index(field, fields[n_fields])) numeric = false;
      ++n_fields;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }

    const bool first_content = !seen_content;
    seen_content = true;
    if (!numeric && first_content) continue;  // header row
    const std::string where = "ground truth line " + std::to_string(line_no);
    if (n_fields != 3) throw Error(where + ": expected 3 columns query_index,ref_lo,ref_hi");
    if (!numeric) throw Error(where + ": fields must be non-negative integers");

    const auto [query, lo, hi] = std::tuple{fields[0], fields[1], fields[2]};
    if (query >= num_queries) {
      throw Error(where + ": query index " + std::to_string(query) + " out of range (" + std::to_string(num_queries) +
                  " queries)");
    }
    if (hi < lo) throw Error(where + ": ref_hi < ref_lo");
    if (hi >= num_refs) {
      throw Error(where + ": reference index " + std::to_string(hi) + " out of range (" + std::to_string(num_refs) +
                  " references)");
    }
    if (rows[query]) throw Error(where + ": duplicate query index " + std::to_string(query));
    rows[query] = RefRange{lo, hi};
  }

  GroundTruth gt;
  gt.entries.reserve(num_queries);
  for (std::size_t i = 0; i < num_queries; ++i) {
    if (!rows[i]) throw Error("ground truth: missing entry for query " + std::to_string(i));
    gt.entries.push_back(*rows[i]);
  }
  return gt;
}

GroundTruth load_ground_truth(const std::filesystem::path& csv_path, std::size_t num_queries, std::size_t num_refs) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error("cannot open ground truth " + csv_path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_ground_truth(text, num_queries, num_refs);
  } catch (const Error& e) {
    throw Error(csv_path.string() + ": " + e.what());
  }
}

GroundTruth aligned_ground_truth(std::size_t num_queries, std::size_t num_refs, std::size_t tolerance) {
  if (num_queries == 0 || num_queries > num_refs) {
    throw std::invalid_argument("aligned ground truth needs 1 <= num_queries <= num_refs");
  }
  GroundTruth gt;
  gt.tolerance = tolerance;
  gt.entries.reserve(num_queries);
  for (std::size_t i = 0; i < num_queries; ++i) {
    const std::size_t lo = i > tolerance ? i - tolerance : 0;
    const std::size_t hi = std::min(num_refs - 1, i + tolerance);
    gt.entries.push_back({lo, hi});
  }
  return gt;
}

SyntheticDataset generate_synthetic(std::size_t num_places, std::size_t dim, double noise_sigma, std::uint64_t seed,
                                    double encode_time_per_frame) {
  if (num_places == 0) throw std::invalid_argument("num_places must be >= 1");
  if (dim < num_places) throw std::invalid_argument("dim must be >= num_places");
  if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) throw std::invalid_argument("noise_sigma must be >= 0");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0.0 ? noise_sigma : 1.0);

  std::vector<Descriptor> refs;
  std::vector<Descriptor> queries;
  refs.reserve(num_places);
  queries.reserve(num_places);
  std::vector<double> q(dim);
  for (std::size_t i = 0; i < num_places; ++i) {
    std::vector<float> basis(dim, 0.0f);
    basis[i] = 1.0f;
    refs.emplace_back(std::move(basis));

    double sum_sq = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      q[c] = (c == i ? 1.0 : 0.0) + (noise_sigma > 0.0 ? noise(rng) : 0.0);
      sum_sq += q[c] * q[c];
    }
    const double norm = std::sqrt(sum_sq);
    std::vector<float> values(dim);
    for (std::size_t c = 0; c < dim; ++c) values[c] = static_cast<float>(norm > 0.0 ? q[c] / norm : 0.0);
    queries.emplace_back(std::move(values));
  }

  SyntheticDataset out;
  out.references = DescriptorSet(std::move(refs), encode_time_per_frame, "synthetic");
  out.queries = DescriptorSet(std::move(queries), encode_time_per_frame, "synthetic");
  out.ground_truth = aligned_ground_truth(num_places, num_places, 0);
  return out;
}

}  // namespace seqvpr
