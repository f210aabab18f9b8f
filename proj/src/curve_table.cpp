#include "cutofflab/curve_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <tuple>

namespace cutofflab {

std::string metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::Wasserstein: return "wasserstein";
    case MetricKind::TV: return "tv";
    case MetricKind::Hellinger: return "hellinger";
    case MetricKind::Kullback: return "kullback";
    case MetricKind::Chi2: return "chi2";
    case MetricKind::Fisher: return "fisher";
  }
  throw std::logic_error("unreachable");
}

std::string bound_type_name(BoundType type) {
  switch (type) {
    case BoundType::Exact: return "exact";
    case BoundType::Lower: return "lower";
    case BoundType::Upper: return "upper";
  }
  throw std::logic_error("unreachable");
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* CurveTable::csv_header() {
  return "experiment,n,beta,t,metric,bound_type,value,mc_estimate,mc_stderr,"
         "replicas,seed";
}

namespace {

// Total order over doubles (NaN sorts last) so the comparator stays a strict
// weak ordering even when sentinel NaNs appear in key fields.
std::uint64_t double_key(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  if (std::isnan(v)) return ~0ull;
  return (bits & 0x8000000000000000ull) ? ~bits : bits | 0x8000000000000000ull;
}

}  // namespace

void CurveTable::sort_canonical() {
  std::sort(rows.begin(), rows.end(), [](const CurveRow& a, const CurveRow& b) {
    return std::forward_as_tuple(a.experiment, a.n, double_key(a.beta),
                                 double_key(a.t), a.metric, a.bound_type,
                                 double_key(a.value)) <
           std::forward_as_tuple(b.experiment, b.n, double_key(b.beta),
                                 double_key(b.t), b.metric, b.bound_type,
                                 double_key(b.value));
  });
}

std::string CurveTable::to_csv() const {
  std::string out = csv_header();
  out += '\n';
  for (const CurveRow& r : rows) {
    out += r.experiment;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += format_double(r.beta);
    out += ',';
    out += format_double(r.t);
    out += ',';
    out += r.metric;
    out += ',';
    out += bound_type_name(r.bound_type);
    out += ',';
    out += format_double(r.value);
    out += ',';
    if (r.mc_estimate) out += format_double(*r.mc_estimate);
    out += ',';
    if (r.mc_stderr) out += format_double(*r.mc_stderr);
    out += ',';
    out += std::to_string(r.replicas);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

}  // namespace cutofflab
