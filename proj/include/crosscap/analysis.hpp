#pragma once
// Request handling and report assembly behind the command-line tool.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "crosscap/double_points.hpp"
#include "crosscap/error.hpp"
#include "crosscap/expr.hpp"
#include "crosscap/json_format.hpp"
#include "crosscap/normal_form.hpp"
#include "crosscap/singular.hpp"
#include "crosscap/symmetry.hpp"

namespace crosscap {

inline constexpr std::string_view kToolName = "crosscap";
inline constexpr std::string_view kToolVersion = "1.0.0";

struct RequestTolerances {
  double singular = 1e-9;   ///< |f_u x f_v| at an accepted singular point
  double whitney = 1e-8;    ///< relative Whitney threshold
  double symmetry = kDefaultSymmetryTolerance;
  double reduction = 1e-9;  ///< normal-form solve and reconstruction residual
};

struct AnalysisRequest {
  std::array<std::string, 3> components;
  /// Each parameter holds one value or a sweep list.
  std::map<std::string, std::vector<double>> parameters;
  int order = kDefaultOrder;
  std::optional<Eigen::Vector2d> point;
  std::optional<SearchBox> box;
  int grid = 20;
  RequestTolerances tolerances;
  /// Any of "report", "curve", "mesh".
  std::vector<std::string> outputs{"report"};
  double span = 1.0;   ///< double-point arc span per branch
  double step = 0.01;  ///< double-point continuation step

  /// Throws InputError on schema violations.
  static AnalysisRequest from_json(const nlohmann::json& doc);
  static AnalysisRequest from_file(const std::string& path);

  /// Throws InputError for out-of-range settings and ParseError/UnboundParameter for the map.
  void validate() const;

  SearchBox search_box() const { return box.value_or(SearchBox{}); }
  bool wants(std::string_view output) const;
  OrderedJson echo() const;
};

/// Cartesian product of the parameter lists, sorted lexicographically by parameter tuple
/// (names in sorted order, values ascending, duplicates dropped).
std::vector<ParameterTable> parameter_sweep(const AnalysisRequest& request);

MapDefinition map_for(const AnalysisRequest& request, const ParameterTable& parameters);

struct ErrorRecord {
  ErrorCode code;
  std::string message;
  std::optional<Eigen::Vector2d> point;
};

struct DoublePointSummary {
  std::size_t samples;
  double arc_min;
  double arc_max;
  double max_residual;
  double min_normal_angle;
  std::size_t flagged;
  int orientation_sign;
};

struct CrossCapEntry {
  CrossCapCertificate certificate;
  NormalForm normal_form;
  SymmetryReport symmetry;
  std::optional<DoublePointSummary> double_points;
  std::vector<std::string> warnings;
};

struct SweepResult {
  ParameterTable parameters;
  std::vector<CrossCapEntry> crosscaps;
  std::vector<ErrorRecord> errors;
};

struct AnalysisReport {
  AnalysisRequest request;
  std::vector<SweepResult> entries;

  std::size_t crosscap_count() const;
  /// 0 with at least one certified cross cap, 2 otherwise.
  int exit_code() const { return crosscap_count() > 0 ? 0 : 2; }
};

/// Locate, certify, reduce, classify and optionally trace for every sweep entry.
/// Module failures are recorded per entry; request problems throw.
AnalysisReport run_analysis(const AnalysisRequest& request);

OrderedJson report_json(const AnalysisReport& report);
OrderedJson classify_json(const AnalysisReport& report);
OrderedJson transport_json(const AnalysisReport& report, MotionTag motion);

/// Row-major samples (u, v, x, y, z) over the box, grid x grid rows after the header.
std::string mesh_csv(const MapDefinition& defn, const SearchBox& box, int grid);

/// Double-point curve of the first cross cap found (or certified at the requested point).
/// Requires a single parameter combination. Throws SeedFailure when nothing can be traced.
DoublePointCurve run_selfint(const AnalysisRequest& request);

OrderedJson error_json(const Error& err);

}  // namespace crosscap
