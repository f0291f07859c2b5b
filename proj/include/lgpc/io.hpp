#pragma once

#include "lgpc/forecast.hpp"
#include "lgpc/phi_select.hpp"
#include "lgpc/scoring.hpp"
#include "lgpc/series.hpp"
#include "lgpc/simgen.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lgpc {

inline constexpr const char* kVersion = "0.1.0";

/// CSV layout: a `time` column (real, strictly increasing), a `y` column
/// (non-negative integer) and covariate columns. Optionally prepends an
/// intercept, appends a linear trend in `time`, and expands a categorical
/// column into indicators with the last sorted level as reference.
struct CsvOptions {
  std::string time_column = "time";
  std::string count_column = "y";
  bool intercept = true;
  bool trend = false;
  std::string season_column;  // empty: none
  /// Fixed level set for the season column; derived from the data when empty.
  std::vector<std::string> season_levels;
  /// When false a missing count column yields zero counts (future covariates).
  bool require_counts = true;
};

/// Throws Parse (with row and column) or Schema.
ObservedSeries parse_csv(const std::string& text, const CsvOptions& options,
                         std::vector<std::string>* levels_used = nullptr);
/// Throws Io if the file cannot be read.
ObservedSeries ingest_csv(const std::string& path, const CsvOptions& options,
                          std::vector<std::string>* levels_used = nullptr);

std::string read_file(const std::string& path);
/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_digest(const std::string& bytes);

nlohmann::json config_to_json(const ModelConfig& config);
/// Unknown keys are rejected with InvalidParameter.
ModelConfig config_from_json(const nlohmann::json& j, ModelConfig base = {});

/// Provenance embedded as the leading `# {...}` line of every output table.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string input_digest;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  nlohmann::json extra = nlohmann::json::object();
  std::optional<std::map<std::string, double>> timings;  // omitted unless recorded

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::string manifest_line(const RunManifest& manifest);
/// Splits `# {...}` from the rest of a table file; throws Parse if absent.
RunManifest read_manifest(const std::string& text, std::string* body = nullptr);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Long table: draw, chain, beta_*, sigma2, sigmaw2, w_1..w_T, mu_1..mu_T.
std::string draws_table(const PosteriorSamples& samples, const RunManifest& manifest);
PosteriorSamples parse_draws_table(const std::string& text, RunManifest* manifest = nullptr);

std::string metrics_table(const std::vector<std::pair<std::string, double>>& metrics,
                          const RunManifest& manifest);

/// One row per point: t_new, point, lower, upper, level, support_max.
std::string forecast_table(const std::vector<PredictiveDistribution>& forecasts,
                           const RunManifest& manifest);
/// Long form t_new, k, prob.
std::string pmf_table(const std::vector<PredictiveDistribution>& forecasts,
                      const RunManifest& manifest);
/// Rebuilds per-point pmfs from a long-form table (point/interval left unset).
std::vector<PredictiveDistribution> parse_pmf_table(const std::string& text,
                                                    RunManifest* manifest = nullptr);
/// Reads a forecast table and attaches pmfs from the matching long-form table.
std::vector<PredictiveDistribution> parse_forecast_tables(const std::string& summary_text,
                                                          const std::string& pmf_text,
                                                          RunManifest* manifest = nullptr);

std::string cv_table(const CvResult& result, const RunManifest& manifest);

/// Coefficient MSE rows (dgp, parameter, glm, proposed).
std::string study_mse_table(const StudyTable& study, const RunManifest& manifest);
/// Mean score rows (dgp, scoring_rule, glm, proposed).
std::string study_score_table(const StudyTable& study, const RunManifest& manifest);
/// Per-replication estimates, the audit trail behind the aggregates.
std::string study_replication_table(const StudyTable& study, const RunManifest& manifest);

std::string score_table(const ScoreReport& report, const RunManifest& manifest);

void write_file(const std::string& path, const std::string& contents);

}  // namespace lgpc
