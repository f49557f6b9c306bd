#include "seqvpr/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "seqvpr/descriptor_io.hpp"
#include "seqvpr/parallel.hpp"

namespace seqvpr {
namespace {

void check_window_length(const SimilarityMatrix& sim, std::size_t k) {
  if (k < 1 || k > std::min(sim.rows(), sim.cols())) {
    throw std::invalid_argument("sequence length " + std::to_string(k) + " out of range for a " +
                                std::to_string(sim.rows()) + "x" + std::to_string(sim.cols()) + " similarity matrix");
  }
}

SequenceMatchSet argmax_rows(std::span<const double> grid, std::size_t query_windows, std::size_t ref_windows,
                             std::size_t k) {
  SequenceMatchSet out;
  out.k = k;
  out.best_ref_window.resize(query_windows);
  out.best_score.resize(query_windows);
  for (std::size_t i = 0; i < query_windows; ++i) {
    const auto row = grid.subspan(i * ref_windows, ref_windows);
    // max_element returns the first maximum, which is the smallest j.
    const auto best = std::max_element(row.begin(), row.end());
    out.best_ref_window[i] = static_cast<std::size_t>(best - row.begin());
    out.best_score[i] = *best;
  }
  return out;
}

}  // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t rows, std::size_t cols, std::vector<double> scores)
    : rows_(rows), cols_(cols), scores_(std::move(scores)) {
  if (scores_.size() != rows_ * cols_) {
    throw std::invalid_argument("similarity matrix needs rows * cols scores");
  }
  for (std::size_t n = 0; n < scores_.size(); ++n) {
    const double v = scores_[n];
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
      throw std::invalid_argument("similarity score at (" + std::to_string(n / std::max<std::size_t>(cols_, 1)) + ", " +
                                  std::to_string(n % std::max<std::size_t>(cols_, 1)) + ") is outside [-1, 1]");
    }
  }
}

double cosine_similarity(const Descriptor& a, const Descriptor& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("descriptor dimension mismatch: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  if (a.l2_norm() < kZeroNormThreshold || b.l2_norm() < kZeroNormThreshold) return 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  double dot = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) dot += static_cast<double>(va[i]) * static_cast<double>(vb[i]);
  return std::clamp(dot / (a.l2_norm() * b.l2_norm()), -1.0, 1.0);
}

SimilarityMatrix build_similarity_matrix(const DescriptorSet& queries, const DescriptorSet& references,
                                         std::size_t workers) {
  if (!queries.empty() && !references.empty() && queries.dim() != references.dim()) {
    throw std::invalid_argument("query descriptors have dimension " + std::to_string(queries.dim()) +
                                ", reference descriptors " + std::to_string(references.dim()));
  }
  const std::size_t rows = queries.size();
  const std::size_t cols = references.size();
  std::vector<double> scores(rows * cols);
  parallel_for(
      rows,
      [&](std::size_t i) {
        for (std::size_t j = 0; j < cols; ++j) scores[i * cols + j] = cosine_similarity(queries[i], references[j]);
      },
      workers);
  return SimilarityMatrix(rows, cols, std::move(scores));
}

double window_score(const SimilarityMatrix& sim, std::size_t query_start, std::size_t ref_start, std::size_t k) {
  double sum = 0.0;
  for (std::size_t t = 0; t < k; ++t) sum += sim(query_start + t, ref_start + t);
  return sum / static_cast<double>(k);
}

std::vector<double> window_score_grid(const SimilarityMatrix& sim, std::size_t k) {
  check_window_length(sim, k);
  const std::size_t query_windows = sim.rows() - k + 1;
  const std::size_t ref_windows = sim.cols() - k + 1;
  std::vector<double> grid(query_windows * ref_windows);
  for (std::size_t i = 0; i < query_windows; ++i) {
    for (std::size_t j = 0; j < ref_windows; ++j) grid[i * ref_windows + j] = window_score(sim, i, j, k);
  }
  return grid;
}

SequenceMatchSet match_sequences(const SimilarityMatrix& sim, std::size_t k, std::size_t workers) {
  check_window_length(sim, k);
  const std::size_t query_windows = sim.rows() - k + 1;
  const std::size_t ref_windows = sim.cols() - k + 1;

  SequenceMatchSet out;
  out.k = k;
  out.best_ref_window.resize(query_windows);
  out.best_score.resize(query_windows);
  parallel_for(
      query_windows,
      [&](std::size_t i) {
        std::size_t best_j = 0;
        double best = window_score(sim, i, 0, k);
        for (std::size_t j = 1; j < ref_windows; ++j) {
          const double score = window_score(sim, i, j, k);
          if (score > best) {
            best = score;
            best_j = j;
          }
        }
        out.best_ref_window[i] = best_j;
        out.best_score[i] = best;
      },
      workers);
  return out;
}

SequenceMatchSet match_sequences_diagonal(const SimilarityMatrix& sim, std::size_t k) {
  check_window_length(sim, k);
  const std::size_t rows = sim.rows();
  const std::size_t cols = sim.cols();
  const std::size_t query_windows = rows - k + 1;
  const std::size_t ref_windows = cols - k + 1;
  std::vector<double> grid(query_windows * ref_windows);

  // Walk every diagonal (fixed j - i) once, keeping prefix sums along it.
  std::vector<double> prefix(std::min(rows, cols) + 1);
  auto scan_diagonal = [&](std::size_t i0, std::size_t j0) {
    const std::size_t length = std::min(rows - i0, cols - j0);
    if (length < k) return;
    prefix[0] = 0.0;
    for (std::size_t t = 0; t < length; ++t) prefix[t + 1] = prefix[t] + sim(i0 + t, j0 + t);
    for (std::size_t s = 0; s + k <= length; ++s) {
      grid[(i0 + s) * ref_windows + (j0 + s)] = (prefix[s + k] - prefix[s]) / static_cast<double>(k);
    }
  };
  for (std::size_t i0 = 0; i0 < rows; ++i0) scan_diagonal(i0, 0);
  for (std::size_t j0 = 1; j0 < cols; ++j0) scan_diagonal(0, j0);

  return argmax_rows(grid, query_windows, ref_windows, k);
}

SequenceMatchSet single_frame_matches(const SimilarityMatrix& sim) { return match_sequences(sim, 1); }

void write_similarity_matrix(const SimilarityMatrix& sim, const std::filesystem::path& path) {
  SvprMatrix matrix;
  matrix.count = static_cast<std::uint32_t>(sim.rows());
  matrix.dim = static_cast<std::uint32_t>(sim.cols());
  matrix.values.reserve(sim.data().size());
  for (double v : sim.data()) matrix.values.push_back(static_cast<float>(v));
  write_svpr(path, matrix);
}

}  // namespace seqvpr
