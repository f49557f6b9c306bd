#pragma once

#include <string>
#include <vector>

#include "seqvpr/harness.hpp"
#include "seqvpr/metrics.hpp"

namespace seqvpr {

/// Fixed-precision number formatting shared by every CSV and JSON writer, so
/// identical inputs give identical bytes.
std::string format_number(double value);

std::string summary_csv(const std::vector<MetricsReport>& reports);
std::string summary_json(const std::vector<MetricsReport>& reports);
std::string timings_csv(const std::vector<TimingRecord>& timings);
std::string pr_curve_csv(const PrCurve& curve);

/// Filesystem-safe version of a dataset or technique name.
std::string slugify(std::string_view name);

}  // namespace seqvpr
