#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cutofflab/gauss_metrics.hpp"

namespace cutofflab {

enum class BoundType { Exact, Lower, Upper };

std::string metric_name(MetricKind kind);
std::string bound_type_name(BoundType type);

struct CurveRow {
  std::string experiment;
  std::size_t n = 0;
  double beta = 0.0;
  double t = 0.0;
  std::string metric;  // metric_name(...) or an observable label
  BoundType bound_type = BoundType::Exact;
  double value = 0.0;
  std::optional<double> mc_estimate;
  std::optional<double> mc_stderr;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
};

struct CurveTable {
  std::vector<CurveRow> rows;

  // Canonical ordering (sorted by all key fields) so that parallel producers
  // cannot change the output bytes.
  void sort_canonical();
  // CSV with the fixed schema header; floats as shortest round-trip decimals,
  // missing optionals as empty strings.
  std::string to_csv() const;
  static const char* csv_header();
};

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace cutofflab
