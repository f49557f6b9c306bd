#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "seqvpr/descriptor.hpp"
#include "seqvpr/image.hpp"

namespace seqvpr {

/// One traverse: frames in traversal order plus the files they came from.
struct ImageSet {
  std::vector<GrayImage> frames;
  std::vector<std::filesystem::path> source_paths;

  std::size_t size() const { return frames.size(); }
};

/// Inclusive range of acceptable reference indices for one query.
struct RefRange {
  std::size_t lo = 0;
  std::size_t hi = 0;

  bool contains(std::size_t j) const { return lo <= j && j <= hi; }
  friend bool operator==(const RefRange&, const RefRange&) = default;
};

struct GroundTruth {
  std::vector<RefRange> entries;  // indexed by query frame
  std::size_t tolerance = 0;

  std::size_t num_queries() const { return entries.size(); }
};

/// Filename ordering where embedded digit runs compare numerically, so
/// "img2" < "img10". Equal-valued runs with different zero padding fall back
/// to plain string order to keep the result total.
bool natural_less(std::string_view a, std::string_view b);

/// ITU-R BT.601 luma, rounded to nearest.
std::uint8_t bt601_luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Decodes PNG/JPEG (anything OpenCV reads) into 8-bit grayscale.
GrayImage decode_grayscale(const std::filesystem::path& file);

const std::set<std::string>& default_image_extensions();

/// Loads every file in `directory` whose lower-cased extension (with the
/// leading dot, e.g. ".png") is in `extensions`, in natural filename order.
ImageSet load_image_set(const std::filesystem::path& directory,
                        const std::set<std::string>& extensions = default_image_extensions());

/// Reads `query_index,ref_lo,ref_hi` rows (optional header line).
GroundTruth load_ground_truth(const std::filesystem::path& csv_path, std::size_t num_queries, std::size_t num_refs);
GroundTruth parse_ground_truth(std::string_view csv_text, std::size_t num_queries, std::size_t num_refs);

/// Entry i = [max(0, i-T), min(R-1, i+T)]. Requires 1 <= num_queries <= num_refs.
GroundTruth aligned_ground_truth(std::size_t num_queries, std::size_t num_refs, std::size_t tolerance);

struct SyntheticDataset {
  DescriptorSet queries;
  DescriptorSet references;
  GroundTruth ground_truth;
};

/// Reference i is the basis vector e_i; query i is e_i plus N(0, sigma^2)
/// noise per component, then L2-normalized. Deterministic for a given seed.
SyntheticDataset generate_synthetic(std::size_t num_places, std::size_t dim, double noise_sigma, std::uint64_t seed,
                                    double encode_time_per_frame = 0.0);

}  // namespace seqvpr
