#include "lgpc/io.hpp"

#include "lgpc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace lgpc {

namespace {

using Row = std::vector<std::string>;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

Row split_line(const std::string& line, std::size_t line_no) {
  Row out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": unterminated quote");
  out.push_back(trim(field));
  return out;
}

struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> line_numbers;
};

// Skips blank lines and `#` comment lines.
Table read_table(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    Row r = split_line(line, line_no);
    if (!have_header) {
      t.header = std::move(r);
      have_header = true;
      continue;
    }
    if (r.size() != t.header.size()) {
      fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(t.header.size()) + " fields, found " +
                                 std::to_string(r.size()));
    }
    t.rows.push_back(std::move(r));
    t.line_numbers.push_back(line_no);
  }
  if (!have_header) fail(ErrorCode::Schema, "missing header row");
  return t;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || b == e) return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_int(const std::string& s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

[[noreturn]] void parse_error(const Table& t, std::size_t r, const std::string& column,
                              const std::string& what) {
  fail(ErrorCode::Parse, "row " + std::to_string(r + 1) + " (line " +
                             std::to_string(t.line_numbers[r]) + "), column '" + column +
                             "': " + what);
}

double cell_double(const Table& t, std::size_t r, std::size_t c) {
  auto v = to_double(t.rows[r][c]);
  if (!v || !std::isfinite(*v)) {
    parse_error(t, r, t.header[c], "expected a finite number, got \"" + t.rows[r][c] + "\"");
  }
  return *v;
}

std::int64_t cell_int(const Table& t, std::size_t r, std::size_t c) {
  auto v = to_int(t.rows[r][c]);
  if (!v || *v < 0) {
    parse_error(t, r, t.header[c],
                "expected a non-negative integer, got \"" + t.rows[r][c] + "\"");
  }
  return *v;
}

std::optional<std::size_t> find_column(const Row& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

std::size_t require_column(const Row& header, const std::string& name) {
  auto c = find_column(header, name);
  if (!c) fail(ErrorCode::Schema, "missing column '" + name + "'");
  return *c;
}

// Numeric levels sort by value, anything else lexicographically.
std::vector<std::string> sorted_levels(const std::set<std::string>& seen) {
  std::vector<std::string> levels(seen.begin(), seen.end());
  bool numeric = std::all_of(levels.begin(), levels.end(),
                             [](const std::string& s) { return to_double(s).has_value(); });
  if (numeric) {
    std::stable_sort(levels.begin(), levels.end(), [](const std::string& a, const std::string& b) {
      return *to_double(a) < *to_double(b);
    });
  }
  return levels;
}

std::string strip_manifest(const std::string& text, RunManifest* manifest) {
  std::string body;
  RunManifest m = read_manifest(text, &body);
  if (manifest) *manifest = std::move(m);
  return body;
}

}  // namespace

ObservedSeries parse_csv(const std::string& text, const CsvOptions& options,
                         std::vector<std::string>* levels_used) {
  Table t = read_table(text);
  {
    std::set<std::string> names;
    for (const auto& h : t.header) {
      if (h.empty()) fail(ErrorCode::Schema, "empty column name in header");
      if (!names.insert(h).second) fail(ErrorCode::Schema, "duplicate column '" + h + "'");
    }
  }
  const std::size_t time_col = require_column(t.header, options.time_column);
  std::optional<std::size_t> count_col = find_column(t.header, options.count_column);
  if (!count_col && options.require_counts) require_column(t.header, options.count_column);
  std::optional<std::size_t> season_col;
  if (!options.season_column.empty()) {
    season_col = require_column(t.header, options.season_column);
  }

  std::vector<std::size_t> covariates;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == time_col || (count_col && c == *count_col) || (season_col && c == *season_col)) {
      continue;
    }
    covariates.push_back(c);
  }

  const std::size_t n = t.rows.size();
  ObservedSeries s;
  s.index.times.resize(n);
  s.counts.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    s.index.times[r] = cell_double(t, r, time_col);
    if (r > 0 && !(s.index.times[r] > s.index.times[r - 1])) {
      parse_error(t, r, t.header[time_col], "times must be strictly increasing");
    }
    if (count_col) s.counts[r] = cell_int(t, r, *count_col);
  }

  std::vector<std::string> levels = options.season_levels;
  if (season_col && levels.empty()) {
    std::set<std::string> seen;
    for (const auto& row : t.rows) seen.insert(row[*season_col]);
    levels = sorted_levels(seen);
  }
  if (season_col && levels.size() < 2) {
    fail(ErrorCode::Schema, "season column '" + options.season_column + "' needs at least 2 levels");
  }
  if (levels_used) *levels_used = levels;

  const std::size_t n_season = season_col ? levels.size() - 1 : 0;
  const std::size_t p = (options.intercept ? 1 : 0) + (options.trend ? 1 : 0) + n_season +
                        covariates.size();
  if (p == 0) fail(ErrorCode::Schema, "design has no columns");
  s.design.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  s.column_names.clear();
  Eigen::Index col = 0;
  if (options.intercept) {
    s.design.col(col++).setOnes();
    s.column_names.push_back("intercept");
  }
  if (options.trend) {
    for (std::size_t r = 0; r < n; ++r) s.design(static_cast<Eigen::Index>(r), col) = s.index.times[r];
    ++col;
    s.column_names.push_back("trend");
  }
  if (season_col) {
    for (std::size_t l = 0; l + 1 < levels.size(); ++l) {
      s.column_names.push_back(options.season_column + "_" + levels[l]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      const std::string& v = t.rows[r][*season_col];
      auto it = std::find(levels.begin(), levels.end(), v);
      if (it == levels.end()) parse_error(t, r, options.season_column, "unknown level \"" + v + "\"");
      const auto idx = static_cast<std::size_t>(it - levels.begin());
      for (std::size_t l = 0; l < n_season; ++l) {
        s.design(static_cast<Eigen::Index>(r), col + static_cast<Eigen::Index>(l)) =
            idx == l ? 1.0 : 0.0;
      }
    }
    col += static_cast<Eigen::Index>(n_season);
  }
  for (std::size_t c : covariates) {
    for (std::size_t r = 0; r < n; ++r) s.design(static_cast<Eigen::Index>(r), col) = cell_double(t, r, c);
    ++col;
    s.column_names.push_back(t.header[c]);
  }
  return s;
}

ObservedSeries ingest_csv(const std::string& path, const CsvOptions& options,
                          std::vector<std::string>* levels_used) {
  return parse_csv(read_file(path), options, levels_used);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::Io, "error reading '" + path + "'");
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) fail(ErrorCode::Io, "error writing '" + path + "'");
}

std::string content_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json config_to_json(const ModelConfig& c) {
  return nlohmann::json{{"prior_shape", c.prior_shape},
                        {"prior_scale", c.prior_scale},
                        {"phi", c.phi},
                        {"phi_grid", c.phi_grid},
                        {"n_chains", c.n_chains},
                        {"gr_threshold", c.gr_threshold},
                        {"gr_check_interval", c.gr_check_interval},
                        {"max_burn_sweeps", c.max_burn_sweeps},
                        {"thinning", c.thinning},
                        {"posterior_size", c.posterior_size},
                        {"seed", c.seed},
                        {"threads", c.threads},
                        {"criterion", to_string(c.criterion)},
                        {"interval_level", c.interval_level},
                        {"cv_train_fraction", c.cv_train_fraction}};
}

ModelConfig config_from_json(const nlohmann::json& j, ModelConfig c) {
  if (!j.is_object()) fail(ErrorCode::InvalidParameter, "config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "prior_shape") c.prior_shape = v.get<double>();
      else if (key == "prior_scale") c.prior_scale = v.get<double>();
      else if (key == "phi") c.phi = v.get<double>();
      else if (key == "phi_grid") c.phi_grid = v.get<std::vector<double>>();
      else if (key == "n_chains") c.n_chains = v.get<int>();
      else if (key == "gr_threshold") c.gr_threshold = v.get<double>();
      else if (key == "gr_check_interval") c.gr_check_interval = v.get<int>();
      else if (key == "max_burn_sweeps") c.max_burn_sweeps = v.get<int>();
      else if (key == "thinning") c.thinning = v.get<int>();
      else if (key == "posterior_size") c.posterior_size = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "threads") c.threads = v.get<int>();
      else if (key == "criterion") c.criterion = parse_criterion(v.get<std::string>());
      else if (key == "interval_level") c.interval_level = v.get<double>();
      else if (key == "cv_train_fraction") c.cv_train_fraction = v.get<double>();
      else fail(ErrorCode::InvalidParameter, "unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::InvalidParameter, "config key '" + key + "': " + e.what());
    }
  }
  return c;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j{{"command", command},   {"config", config},   {"input_digest", input_digest},
                   {"seed", seed},         {"version", version}, {"extra", extra}};
  if (timings) j["timings"] = *timings;
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.input_digest = j.at("input_digest").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.at("version").get<std::string>();
    if (j.contains("extra")) m.extra = j.at("extra");
    if (j.contains("timings")) m.timings = j.at("timings").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::string manifest_line(const RunManifest& manifest) {
  return "# " + manifest.to_json().dump() + "\n";
}

RunManifest read_manifest(const std::string& text, std::string* body) {
  if (text.rfind("# ", 0) != 0) fail(ErrorCode::Parse, "missing manifest line");
  const std::size_t eol = text.find('\n');
  const std::string line = text.substr(2, eol == std::string::npos ? std::string::npos : eol - 2);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("manifest line is not JSON: ") + e.what());
  }
  if (body) *body = eol == std::string::npos ? std::string() : text.substr(eol + 1);
  return RunManifest::from_json(j);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string draws_table(const PosteriorSamples& samples, const RunManifest& manifest) {
  if (samples.draws.empty()) fail(ErrorCode::EmptyPosterior, "no draws to write");
  const auto p = samples.draws.front().beta.size();
  const auto T = samples.draws.front().w.size();
  std::string out = manifest_line(manifest);
  out += "draw,chain";
  for (Eigen::Index j = 0; j < p; ++j) out += ",beta_" + std::to_string(j + 1);
  out += ",sigma2,sigmaw2";
  for (Eigen::Index t = 0; t < T; ++t) out += ",w_" + std::to_string(t + 1);
  for (Eigen::Index t = 0; t < T; ++t) out += ",mu_" + std::to_string(t + 1);
  out += '\n';
  for (std::size_t s = 0; s < samples.draws.size(); ++s) {
    const ChainState& d = samples.draws[s];
    out += std::to_string(s + 1) + ',' +
           std::to_string(s < samples.draw_chain.size() ? samples.draw_chain[s] : 0);
    for (Eigen::Index j = 0; j < p; ++j) out += ',' + format_double(d.beta[j]);
    out += ',' + format_double(d.sigma2) + ',' + format_double(d.sigmaw2);
    for (Eigen::Index t = 0; t < T; ++t) out += ',' + format_double(d.w[t]);
    for (Eigen::Index t = 0; t < T; ++t) out += ',' + format_double(d.mu[t]);
    out += '\n';
  }
  return out;
}

PosteriorSamples parse_draws_table(const std::string& text, RunManifest* manifest) {
  RunManifest m;
  Table t = read_table(strip_manifest(text, &m));
  std::size_t p = 0, T = 0;
  for (const auto& h : t.header) {
    if (h.rfind("beta_", 0) == 0) ++p;
    if (h.rfind("w_", 0) == 0) ++T;
  }
  if (t.header.size() != 4 + p + 2 * T || t.header[0] != "draw" || t.header[1] != "chain" ||
      p == 0 || T == 0) {
    fail(ErrorCode::Schema, "not a posterior draws table");
  }
  PosteriorSamples out;
  out.draws.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ChainState d;
    d.beta.resize(static_cast<Eigen::Index>(p));
    d.w.resize(static_cast<Eigen::Index>(T));
    d.mu.resize(static_cast<Eigen::Index>(T));
    auto chain = to_int(t.rows[r][1]);
    if (!chain) parse_error(t, r, "chain", "expected an integer");
    std::size_t c = 2;
    for (std::size_t j = 0; j < p; ++j) d.beta[static_cast<Eigen::Index>(j)] = cell_double(t, r, c++);
    d.sigma2 = cell_double(t, r, c++);
    d.sigmaw2 = cell_double(t, r, c++);
    for (std::size_t i = 0; i < T; ++i) d.w[static_cast<Eigen::Index>(i)] = cell_double(t, r, c++);
    for (std::size_t i = 0; i < T; ++i) d.mu[static_cast<Eigen::Index>(i)] = cell_double(t, r, c++);
    out.draws.push_back(std::move(d));
    out.draw_chain.push_back(static_cast<int>(*chain));
  }
  if (out.draws.empty()) fail(ErrorCode::EmptyPosterior, "draws table has no rows");
  try {
    out.phi_used = m.extra.at("phi").get<double>();
    out.burn_sweeps_used = m.extra.value("burn_sweeps", 0);
    if (m.extra.contains("gr_history")) {
      for (const auto& g : m.extra.at("gr_history")) {
        out.gr_history.push_back({g.at(0).get<int>(), g.at(1).get<double>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Schema, std::string("draws manifest lacks sampler metadata: ") + e.what());
  }
  if (manifest) *manifest = std::move(m);
  return out;
}

std::string metrics_table(const std::vector<std::pair<std::string, double>>& metrics,
                          const RunManifest& manifest) {
  std::string out = manifest_line(manifest);
  out += "metric,value\n";
  for (const auto& [k, v] : metrics) out += k + ',' + format_double(v) + '\n';
  return out;
}

std::string forecast_table(const std::vector<PredictiveDistribution>& forecasts,
                           const RunManifest& manifest) {
  std::string out = manifest_line(manifest);
  out += "t_new,point,lower,upper,level,support_max\n";
  for (const auto& f : forecasts) {
    out += format_double(f.t_new) + ',' + format_double(f.point_forecast) + ',' +
           std::to_string(f.lower) + ',' + std::to_string(f.upper) + ',' +
           format_double(f.level) + ',' + std::to_string(f.support_max()) + '\n';
  }
  return out;
}

std::string pmf_table(const std::vector<PredictiveDistribution>& forecasts,
                      const RunManifest& manifest) {
  std::string out = manifest_line(manifest);
  out += "t_new,k,prob\n";
  for (const auto& f : forecasts) {
    const std::string t = format_double(f.t_new);
    for (std::size_t k = 0; k < f.pmf.size(); ++k) {
      out += t + ',' + std::to_string(k) + ',' + format_double(f.pmf[k]) + '\n';
    }
  }
  return out;
}

std::vector<PredictiveDistribution> parse_pmf_table(const std::string& text,
                                                    RunManifest* manifest) {
  Table t = read_table(strip_manifest(text, manifest));
  if (t.header != Row{"t_new", "k", "prob"}) fail(ErrorCode::Schema, "not a pmf table");
  std::vector<PredictiveDistribution> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double tn = cell_double(t, r, 0);
    const std::int64_t k = cell_int(t, r, 1);
    const double prob = cell_double(t, r, 2);
    if (out.empty() || out.back().t_new != tn) {
      if (!out.empty() && !(tn > out.back().t_new)) {
        parse_error(t, r, "t_new", "forecast times must be increasing");
      }
      out.push_back({});
      out.back().t_new = tn;
    }
    auto& pmf = out.back().pmf;
    if (k != static_cast<std::int64_t>(pmf.size())) parse_error(t, r, "k", "support must be 0, 1, 2, ...");
    pmf.push_back(prob);
  }
  for (auto& f : out) {
    double mean = 0.0;
    for (std::size_t k = 0; k < f.pmf.size(); ++k) mean += static_cast<double>(k) * f.pmf[k];
    f.point_forecast = mean;
  }
  return out;
}

std::vector<PredictiveDistribution> parse_forecast_tables(const std::string& summary_text,
                                                          const std::string& pmf_text,
                                                          RunManifest* manifest) {
  RunManifest ms, mp;
  Table t = read_table(strip_manifest(summary_text, &ms));
  std::vector<PredictiveDistribution> pmfs = parse_pmf_table(pmf_text, &mp);
  if (ms.input_digest != mp.input_digest || ms.extra != mp.extra) {
    fail(ErrorCode::Validation, "forecast table and pmf table come from different runs");
  }
  if (t.header != Row{"t_new", "point", "lower", "upper", "level", "support_max"}) {
    fail(ErrorCode::Schema, "not a forecast table");
  }
  if (t.rows.size() != pmfs.size()) {
    fail(ErrorCode::Schema, "forecast table and pmf table list different horizons");
  }
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    auto& f = pmfs[r];
    if (cell_double(t, r, 0) != f.t_new) parse_error(t, r, "t_new", "does not match the pmf table");
    f.point_forecast = cell_double(t, r, 1);
    f.lower = cell_int(t, r, 2);
    f.upper = cell_int(t, r, 3);
    f.level = cell_double(t, r, 4);
  }
  if (manifest) *manifest = std::move(ms);
  return pmfs;
}

std::string cv_table(const CvResult& result, const RunManifest& manifest) {
  std::string out = manifest_line(manifest);
  out += "phi,ok,brier,spherical,rps,rmse,criterion_value,burn_sweeps,selected,error\n";
  for (const auto& row : result.table) {
    std::string err = row.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out += format_double(row.phi) + ',' + (row.ok ? "1" : "0") + ',';
    if (row.ok) {
      out += format_double(row.scores.brier) + ',' + format_double(row.scores.spherical) + ',' +
             format_double(row.scores.rps) + ',' + format_double(row.scores.rmse) + ',' +
             format_double(row.value);
    } else {
      out += ",,,,";
    }
    out += ',' + std::to_string(row.burn_sweeps) + ',' +
           (row.ok && row.phi == result.phi_opt ? "1" : "0") + ",\"" + err + "\"\n";
  }
  return out;
}

std::string study_mse_table(const StudyTable& study, const RunManifest& manifest) {
  std::string out = manifest_line(manifest);
  out += "dgp,parameter,glm,proposed\n";
  const ModelSummary* glm = nullptr;
  const ModelSummary* prop = nullptr;
  for (const auto& s : study.summaries) (s.model == StudyModel::Glm ? glm : prop) = &s;
  for (int j = 0; j < 3; ++j) {
    out += std::to_string(study.spec.dgp_id) + ",beta" + std::to_string(j) + ',' +
           (glm ? format_double(glm->mse[static_cast<std::size_t>(j)]) : "") + ',' +
           (prop ? format_double(prop->mse[static_cast<std::size_t>(j)]) : "") + '\n';
  }
  return out;
}

std::string study_score_table(const StudyTable& study, const RunManifest& manifest) {
  std::string out = manifest_line(manifest);
  out += "dgp,scoring_rule,glm,proposed\n";
  const ModelSummary* glm = nullptr;
  const ModelSummary* prop = nullptr;
  for (const auto& s : study.summaries) (s.model == StudyModel::Glm ? glm : prop) = &s;
  for (Criterion c : {Criterion::Brier, Criterion::Spherical, Criterion::Rps}) {
    out += std::to_string(study.spec.dgp_id) + ',' + to_string(c) + ',' +
           (glm ? format_double(glm->mean_scores.criterion(c)) : "") + ',' +
           (prop ? format_double(prop->mean_scores.criterion(c)) : "") + '\n';
  }
  return out;
}

std::string study_replication_table(const StudyTable& study, const RunManifest& manifest) {
  std::string out = manifest_line(manifest);
  out += "replication,model,ok,phi,beta0,beta1,beta2,brier,spherical,rps,rmse,error\n";
  auto emit = [&](int rep, const char* model, const ModelEstimate& e) {
    std::string err = e.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out += std::to_string(rep) + ',' + model + ',' + (e.ok ? "1" : "0") + ',';
    if (e.ok) {
      out += format_double(e.phi);
      for (Eigen::Index j = 0; j < 3; ++j) {
        out += ',' + (j < e.beta.size() ? format_double(e.beta[j]) : std::string());
      }
      out += ',' + format_double(e.scores.brier) + ',' + format_double(e.scores.spherical) + ',' +
             format_double(e.scores.rps) + ',' + format_double(e.scores.rmse);
    } else {
      out += ",,,,,,,";
    }
    out += ",\"" + err + "\"\n";
  };
  for (const auto& r : study.records) {
    if (!r.proposed.error.empty() || r.proposed.ok) emit(r.replication, "proposed", r.proposed);
    if (!r.glm.error.empty() || r.glm.ok) emit(r.replication, "glm", r.glm);
  }
  return out;
}

std::string score_table(const ScoreReport& report, const RunManifest& manifest) {
  std::string out = manifest_line(manifest);
  out += "metric,value\n";
  out += "brier," + format_double(report.brier) + '\n';
  out += "spherical," + format_double(report.spherical) + '\n';
  out += "rps," + format_double(report.rps) + '\n';
  out += "rmse," + format_double(report.rmse) + '\n';
  out += "n_points," + std::to_string(report.n_points) + '\n';
  return out;
}

}  // namespace lgpc
