#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "seqvpr/descriptor.hpp"

namespace seqvpr {

/// Dense Q x R grid of frame-pair similarities, row-major by query.
/// Every entry is finite and within [-1, 1].
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  /// Throws std::invalid_argument if scores.size() != rows * cols or an entry
  /// is non-finite or outside [-1, 1].
  SimilarityMatrix(std::size_t rows, std::size_t cols, std::vector<double> scores);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return scores_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {scores_.data() + i * cols_, cols_}; }
  std::span<const double> data() const { return scores_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> scores_;
};

inline constexpr double kZeroNormThreshold = 1e-12;

/// dot(a, b) / (|a| |b|), clamped to [-1, 1]; 0 when either norm is below
/// kZeroNormThreshold. Throws std::invalid_argument on a dimension mismatch.
double cosine_similarity(const Descriptor& a, const Descriptor& b);

SimilarityMatrix build_similarity_matrix(const DescriptorSet& queries, const DescriptorSet& references,
                                         std::size_t workers = 0);

/// Result of matching every query window of length k against every reference
/// window of length k.
struct SequenceMatchSet {
  std::size_t k = 1;
  std::vector<std::size_t> best_ref_window;  // one per query window start
  std::vector<double> best_score;

  std::size_t num_windows() const { return best_ref_window.size(); }
  friend bool operator==(const SequenceMatchSet&, const SequenceMatchSet&) = default;
};

/// Mean of sim(i + t, j + t) for t in [0, k).
double window_score(const SimilarityMatrix& sim, std::size_t query_start, std::size_t ref_start, std::size_t k);

/// All (Q-k+1) x (R-k+1) window scores, row-major by query window.
std::vector<double> window_score_grid(const SimilarityMatrix& sim, std::size_t k);

/// Sequence matching over aligned windows: for each query window start i in
/// [0, Q-k], the reference window start j in [0, R-k] with the highest mean
/// score. Ties go to the smallest j. Throws std::invalid_argument unless
/// 1 <= k <= min(Q, R).
SequenceMatchSet match_sequences(const SimilarityMatrix& sim, std::size_t k, std::size_t workers = 1);

/// Same result as match_sequences in O(Q*R) using running sums along each
/// diagonal; scores agree with the direct form to within ~1e-12.
SequenceMatchSet match_sequences_diagonal(const SimilarityMatrix& sim, std::size_t k);

/// Baseline arm: match_sequences(sim, 1).
SequenceMatchSet single_frame_matches(const SimilarityMatrix& sim);

/// Dumps the matrix in SVPR1 layout with count = Q, dim = R (float32).
void write_similarity_matrix(const SimilarityMatrix& sim, const std::filesystem::path& path);

}  // namespace seqvpr
