#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <new>
#include <sstream>

#include "hweyl/hweyl.hpp"

namespace hweyl::cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kSubcommands = {"tau",       "series",  "error-term",   "exact-check",
                                               "expansion", "moments", "distribution", "report"};

// Raw flag values; unset entries take the per-subcommand default.
struct RawFlags {
  std::optional<int> l;
  std::optional<double> T;
  std::optional<double> T_hi;
  std::optional<double> y;
  std::optional<int> k;
  std::optional<int> v;
  std::optional<double> A;
  std::optional<std::string> samples;
  std::optional<std::string> bins;
  std::optional<std::string> seed;
  std::optional<std::string> limit;
  std::optional<double> x_min;
  std::optional<double> x_max;
  std::optional<std::string> threads;
  std::optional<std::string> mode;
  std::optional<std::string> method;
  std::optional<std::string> endpoint;
  std::optional<std::string> format;
  std::optional<std::string> output;
  std::optional<std::string> config;
  std::vector<double> T_list;
};

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

TauEndpoint endpoint_of(const RunConfig& c) {
  return c.endpoint == "half" ? TauEndpoint::half : TauEndpoint::excluded;
}

void add_l(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--l", raw.l, "Dimension parameter l (manifold dimension 2l+1), 1..6");
}

void add_common(CLI::App* sub, RawFlags& raw) {
  add_l(sub, raw);
  sub->add_option("--format", raw.format, "Output format: csv or json");
  sub->add_option("--output", raw.output, "Report file (relative paths resolve against $" + std::string(kOutputDirEnv) + ")");
  sub->add_option("--config", raw.config, "key=value file merged under the command-line flags");
}

void add_sampling(CLI::App* sub, RawFlags& raw) {
  sub->add_option("--samples", raw.samples, "Number of sample points (accepts 2e5)");
  sub->add_option("--seed", raw.seed, "Random seed");
  sub->add_option("--threads", raw.threads, "Worker threads (0 = hardware concurrency)");
}

// Applies key=value lines to options the command line left unset.
void merge_config_file(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(number) + " is not key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key[0] == '-') key.erase(0, 1);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw ValidationError("config files cannot include other config files");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw ValidationError("config key '" + key + "' is not an option of '" + sub->get_name() + "'");
    }
    if (opt->count() != 0) continue;
    opt->add_result(value);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ValidationError("config key '" + key + "': " + e.what());
    }
  }
}

RunConfig resolve(const std::string& name, const RawFlags& raw) {
  RunConfig c;
  c.subcommand = name;
  c.l = raw.l.value_or(1);
  c.threads = static_cast<int>(parse_count(raw.threads.value_or("1"), "threads"));
  c.seed = static_cast<std::uint64_t>(parse_count(raw.seed.value_or("1"), "seed"));
  c.config_path = raw.config;
  c.output_path = raw.output;
  c.T_hi = raw.T_hi;
  c.y = raw.y;
  c.A = raw.A.value_or(2.0);
  c.x_min = raw.x_min.value_or(100.0);
  c.x_max = raw.x_max.value_or(2000.0);
  c.mode = raw.mode.value_or("signed");
  c.method = raw.method.value_or("kernel");
  c.T_list = raw.T_list;

  std::string format = "json";
  std::string endpoint = "half";
  std::int64_t samples = 10000;
  double T = 1e5;
  int k = 2;
  if (name == "tau") {
    format = "csv";
    endpoint = "excluded";
  } else if (name == "series") {
    endpoint = "excluded";
    k = 3;
    if (!c.y) c.y = 256.0;
  } else if (name == "error-term") {
    format = "csv";
    T = 1e4;
    samples = 1000;
  } else if (name == "exact-check") {
    samples = 500;
  } else if (name == "distribution") {
    format = "csv";
    T = 1e4;
  } else if (name == "report") {
    T = 1e4;
    samples = 2000;
  }
  c.T = raw.T.value_or(T);
  c.k = raw.k.value_or(k);
  c.v = raw.v.value_or(1);
  c.samples = raw.samples ? parse_count(*raw.samples, "samples") : samples;
  c.bins = parse_count(raw.bins.value_or("50"), "bins");
  c.limit = parse_count(raw.limit.value_or("100"), "limit");
  c.endpoint = raw.endpoint.value_or(endpoint);

  const std::string f = raw.format.value_or(format);
  if (f == "csv") {
    c.format = Format::csv;
  } else if (f == "json") {
    c.format = Format::json;
  } else {
    throw ValidationError("--format must be csv or json, got '" + f + "'");
  }

  if (name == "distribution" && !c.T_hi) c.T_hi = 2.0 * c.T;
  if (name == "expansion" && !c.y && c.T > 1.0) c.y = max_expansion_length(c.T);
  if (name == "moments" && !c.y && c.k >= 2 && c.k <= 9) c.y = default_series_cutoff(c.k);
  if (name == "report" && c.T_list.empty()) c.T_list = {c.T, 10.0 * c.T};
  return c;
}

// ---------------------------------------------------------------------------
// configuration echo

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["subcommand"] = c.subcommand;
  j["l"] = c.l;
  const std::string& s = c.subcommand;
  if (s == "tau") {
    j["limit"] = c.limit;
    j["endpoint"] = c.endpoint;
  } else if (s == "series") {
    j["k"] = c.k;
    j["v"] = c.v;
    j["y"] = *c.y;
    j["method"] = c.method;
    j["endpoint"] = c.endpoint;
  } else if (s == "error-term") {
    j["T"] = c.T;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
  } else if (s == "exact-check") {
    j["xmin"] = c.x_min;
    j["xmax"] = c.x_max;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
  } else if (s == "expansion") {
    j["T"] = c.T;
    j["y"] = *c.y;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["endpoint"] = c.endpoint;
  } else if (s == "moments") {
    j["k"] = c.k;
    j["T"] = c.T;
    j["samples"] = c.samples;
    j["mode"] = c.mode;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["y"] = c.y ? ordered_json(*c.y) : ordered_json(nullptr);
    j["endpoint"] = c.endpoint;
  } else if (s == "distribution") {
    j["T"] = c.T;
    j["T_hi"] = *c.T_hi;
    j["samples"] = c.samples;
    j["bins"] = c.bins;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
  } else if (s == "report") {
    j["T"] = c.T;
    j["A"] = c.A;
    j["T_list"] = c.T_list;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["endpoint"] = c.endpoint;
  }
  j["format"] = c.format == Format::csv ? "csv" : "json";
  return j;
}

std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

void write_csv_preamble(std::ostream& os, const RunConfig& c) {
  const ordered_json config = config_json(c);
  for (const auto& [key, value] : config.items()) os << "# " << key << '=' << scalar_text(value) << '\n';
}

// Tabular report: CSV rows or a JSON array under `rows_key`, next to scalars.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<ordered_json>> rows;
};

void emit(std::ostream& os, const RunConfig& c, const ordered_json& scalars, const Table& table,
          const std::string& rows_key) {
  if (c.format == Format::json) {
    ordered_json j;
    j["config"] = config_json(c);
    for (const auto& [key, value] : scalars.items()) j[key] = value;
    if (!rows_key.empty()) {
      ordered_json arr = ordered_json::array();
      for (const auto& row : table.rows) {
        ordered_json o;
        for (std::size_t i = 0; i < table.columns.size(); ++i) o[table.columns[i]] = row[i];
        arr.push_back(std::move(o));
      }
      j[rows_key] = std::move(arr);
    }
    os << j.dump(2) << '\n';
    return;
  }
  write_csv_preamble(os, c);
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << scalar_text(row[i]);
    os << '\n';
  }
}

ordered_json maybe(double value) { return std::isfinite(value) ? ordered_json(value) : ordered_json(nullptr); }

// ---------------------------------------------------------------------------
// subcommands

void run_tau(const RunConfig& c, std::ostream& os) {
  const TauTable table(c.l, c.limit, endpoint_of(c));
  Table t{{"n", "tau", "d"}, {}};
  t.rows.reserve(static_cast<std::size_t>(c.limit));
  for (std::int64_t n = 1; n <= c.limit; ++n) {
    t.rows.push_back({n, table.value(n), table.divisor_count(n)});
  }
  emit(os, c, ordered_json::object(), t, "rows");
}

void run_series(const RunConfig& c, std::ostream& os) {
  const double y = *c.y;
  const auto top = static_cast<std::int64_t>(std::floor(y));
  const TauTable table(c.l, top, endpoint_of(c));
  const auto method = c.method == "mitm" ? SeriesMethod::meet_in_the_middle : SeriesMethod::kernel_classes;

  std::vector<double> grid;
  for (double g = 8.0; g < y; g *= 2.0) grid.push_back(g);
  grid.push_back(y);

  Table t{{"y", "value", "term_count", "delta"}, {}};
  double previous = std::numeric_limits<double>::quiet_NaN();
  SeriesValue last;
  for (const double g : grid) {
    last = s_kv(table.values(), c.k, c.v, g, method);
    t.rows.push_back({g, last.value, last.term_count, maybe(last.value - previous)});
    previous = last.value;
  }
  ordered_json scalars;
  scalars["k"] = c.k;
  scalars["v"] = c.v;
  scalars["y"] = y;
  scalars["value"] = last.value;
  scalars["term_count"] = last.term_count;
  emit(os, c, scalars, t, "convergence");
}

void run_error_term(const RunConfig& c, std::ostream& os) {
  const ManifoldParams p(c.l);
  const auto xs = stratified_points({c.T, 2.0 * c.T, c.samples, c.seed},
                                    [](double x) { return near_integer_jump(x); });
  const auto values = parallel_map(xs, [&](double x) { return r_psi(p, x); }, c.threads);
  Table t{{"x", "r_psi", "normalized"}, {}};
  std::vector<double> normalized(values.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const ErrorTermSample s = sample_error_term(p, xs[i]);
    normalized[i] = s.normalized;
    t.rows.push_back({xs[i], values[i], s.normalized});
  }
  ordered_json scalars;
  scalars["normalized_mean"] = static_cast<double>(ordered_sum(normalized) / normalized.size());
  emit(os, c, scalars, t, "points");
}

void run_exact_check(const RunConfig& c, std::ostream& os) {
  const ManifoldParams p(c.l);
  const auto points = cross_check_points(p, c.x_min, c.x_max, c.samples, c.seed);
  Table t{{"x", "r_exact", "r_psi", "scaled_deviation"}, {}};
  std::vector<double> logs;
  std::vector<double> devs;
  double worst = 0.0;
  for (const auto& pt : points) {
    t.rows.push_back({pt.x, static_cast<double>(pt.r_exact), pt.r_psi, pt.scaled_deviation});
    worst = std::max(worst, pt.scaled_deviation);
    logs.push_back(std::log(pt.x));
    devs.push_back(pt.scaled_deviation);
  }
  ordered_json scalars;
  scalars["max_scaled_deviation"] = worst;
  scalars["mean_scaled_deviation"] = static_cast<double>(ordered_sum(devs) / devs.size());
  scalars["log_x_slope"] = points.size() >= 2 ? maybe(least_squares_slope(logs, devs)) : ordered_json(nullptr);
  scalars["scale_exponent"] = c.l - 0.5;
  emit(os, c, scalars, t, c.format == Format::json ? "" : "points");
}

void run_expansion(const RunConfig& c, std::ostream& os) {
  const ManifoldParams p(c.l);
  const RemainderStatistic r = remainder_mean_square(p, c.T, *c.y, c.samples, c.seed, c.threads, endpoint_of(c));
  ordered_json scalars;
  scalars["emp"] = r.emp;
  scalars["ref"] = r.ref;
  scalars["ratio"] = r.ratio();
  Table t{{"emp", "ref", "ratio"}, {{r.emp, r.ref, r.ratio()}}};
  emit(os, c, scalars, t, "");
}

// B_k-based prediction of the normalized moment, NaN where none is defined.
double moment_prediction(const RunConfig& c, const ManifoldParams& p, double& b_value) {
  b_value = std::numeric_limits<double>::quiet_NaN();
  const bool odd_absolute = c.mode == "absolute" && (c.k % 2) != 0;
  if (c.k < 2 || c.k > 9 || odd_absolute || !c.y) return std::numeric_limits<double>::quiet_NaN();
  const auto top = static_cast<std::int64_t>(std::floor(*c.y));
  const TauTable table(c.l, top, endpoint_of(c));
  b_value = b_k(table.values(), c.k, *c.y);
  return static_cast<double>(predicted_coefficient_x(p, c.k, b_value));
}

void run_moments(const RunConfig& c, std::ostream& os) {
  const ManifoldParams p(c.l);
  const MomentMode mode = c.mode == "absolute" ? MomentMode::absolute : MomentMode::signed_power;
  double b_value = 0.0;
  const double predicted = moment_prediction(c, p, b_value);
  const MomentEstimate m = moment_estimate(p, c.k, c.T, c.samples, mode, c.seed, c.threads);
  const double scale = m.estimate != 0.0 ? m.normalized / m.estimate : 0.0;
  const double deviation = std::isfinite(predicted) ? make_report(m.normalized, predicted).relative_deviation
                                                    : std::numeric_limits<double>::quiet_NaN();
  ordered_json scalars;
  scalars["seed"] = c.seed;
  scalars["samples"] = c.samples;
  scalars["T"] = c.T;
  scalars["l"] = c.l;
  scalars["k"] = c.k;
  scalars["mode"] = c.mode;
  scalars["estimate"] = m.normalized;
  scalars["standard_error"] = m.standard_error * scale;
  scalars["integral"] = m.estimate;
  scalars["b_k"] = maybe(b_value);
  scalars["predicted"] = maybe(predicted);
  scalars["relative_deviation"] = maybe(deviation);
  Table t{{"l", "k", "T", "samples", "seed", "mode", "estimate", "standard_error", "predicted", "relative_deviation"},
          {{c.l, c.k, c.T, c.samples, c.seed, c.mode, m.normalized, m.standard_error * scale, maybe(predicted),
            maybe(deviation)}}};
  emit(os, c, scalars, t, "");
}

void run_distribution(const RunConfig& c, std::ostream& os) {
  const ManifoldParams p(c.l);
  const DistributionEstimate d =
      distribution_estimate(p, c.T, *c.T_hi, c.samples, static_cast<int>(c.bins), c.seed, c.threads);
  Table t{{"bin_lo", "bin_hi", "density"}, {}};
  for (std::size_t i = 0; i < d.densities.size(); ++i) {
    t.rows.push_back({d.bin_edges[i], d.bin_edges[i + 1], d.densities[i]});
  }
  ordered_json scalars;
  scalars["sample_mean"] = d.sample_mean;
  scalars["sample_variance"] = d.sample_variance;
  scalars["standard_error"] = std::sqrt(d.sample_variance / static_cast<double>(c.samples));
  emit(os, c, scalars, t, "bins");
}

void run_report(const RunConfig& c, std::ostream& os) {
  const ManifoldParams p(c.l);
  const TauEndpoint endpoint = endpoint_of(c);
  const TauTable table(c.l, 4096, endpoint);

  ordered_json scalars;
  scalars["dimension"] = p.dimension();
  scalars["weyl_coefficient"] = p.weyl_coefficient().str();
  scalars["theta"] = static_cast<double>(p.theta());
  scalars["error_exponent"] = static_cast<double>(p.error_exponent());
  scalars["c2l"] = static_cast<double>(c2l_constant(p, 4096.0, table));

  Table t{{"k", "y", "b_k", "predicted_x", "predicted_t", "s_exponent"}, {}};
  double b2 = 0.0;
  for (int k = 2; k <= 9; ++k) {
    const double y = default_series_cutoff(k);
    const double b = b_k(table.values(), k, y);
    if (k == 2) b2 = b;
    t.rows.push_back({k, y, b, static_cast<double>(predicted_coefficient_x(p, k, b)),
                      static_cast<double>(predicted_coefficient_t(p, k, b)), s_k_exponent(k).str()});
  }

  const MomentEstimate m2 = moment_estimate(p, 2, c.T, c.samples, MomentMode::signed_power, c.seed, c.threads);
  const double predicted = static_cast<double>(predicted_coefficient_x(p, 2, b2));
  const PredictionReport r2 = make_report(m2.normalized, predicted);
  scalars["mean_square"] = {{"estimate", r2.estimate}, {"predicted", r2.predicted},
                            {"relative_deviation", r2.relative_deviation}};

  const auto growth = abs_moment_growth(p, c.A, c.T_list, c.samples, c.seed, c.threads);
  ordered_json g = ordered_json::array();
  for (const auto& point : growth) {
    g.push_back({{"T", point.T}, {"normalized", point.report.estimate},
                 {"relative_change", point.report.relative_deviation}});
  }
  scalars["abs_moment_growth"] = std::move(g);
  emit(os, c, scalars, t, "series");
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path out(path);
  if (out.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      out = std::filesystem::path(dir) / out;
    }
  }
  return out;
}

}  // namespace

std::int64_t parse_count(const std::string& text, const std::string& name) {
  const std::string s = trim(text);
  std::int64_t whole = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), whole);
  if (ec == std::errc() && ptr == s.data() + s.size()) {
    if (whole < 0) throw ValidationError("--" + name + " must be non-negative");
    return whole;
  }
  double value = 0.0;
  const auto [dptr, dec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (dec != std::errc() || dptr != s.data() + s.size() || s.empty()) {
    throw ValidationError("--" + name + " expects an integer, got '" + text + "'");
  }
  if (!(value >= 0.0) || value != std::floor(value) || value > 9.0e15) {
    throw ValidationError("--" + name + " must be a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::int64_t>(value);
}

void validate(const RunConfig& c) {
  const std::string& s = c.subcommand;
  require(std::find(kSubcommands.begin(), kSubcommands.end(), s) != kSubcommands.end(),
          "unknown subcommand '" + s + "'");
  require(c.l >= kMinDimensionParameter && c.l <= kMaxDimensionParameter, "--l must lie in [1, 6]");
  require(c.threads >= 0 && c.threads <= 1024, "--threads must lie in [0, 1024]");
  require(c.endpoint == "excluded" || c.endpoint == "half", "--endpoint must be excluded or half");
  const bool finite_T = std::isfinite(c.T);

  if (s == "tau") {
    require(c.limit >= 1 && c.limit <= 100'000'000, "--limit must lie in [1, 1e8]");
  } else if (s == "series") {
    require(c.method == "kernel" || c.method == "mitm", "--method must be kernel or mitm");
    require(c.k >= 2 && c.k <= 9, "--k must lie in [2, 9]");
    require(c.v >= 1 && c.v < c.k, "--v must satisfy 1 <= v < k");
    require(c.y && std::isfinite(*c.y) && *c.y >= 1.0 && *c.y <= 1e7, "--y must lie in [1, 1e7]");
  } else if (s == "error-term") {
    require(finite_T && c.T >= 1.0 && c.T <= 1e15, "--T must lie in [1, 1e15]");
    require(c.samples >= 1 && c.samples <= 100'000'000, "--samples must lie in [1, 1e8]");
  } else if (s == "exact-check") {
    require(std::isfinite(c.x_min) && c.x_min >= 1.0, "--xmin must be at least 1");
    require(std::isfinite(c.x_max) && c.x_max > c.x_min + 1.0, "--xmax must exceed xmin + 1");
    require(c.x_max <= 1e7, "--xmax must not exceed 1e7");
    require(c.samples >= 1 && c.samples <= 1'000'000, "--samples must lie in [1, 1e6]");
  } else if (s == "expansion") {
    require(finite_T && c.T >= 1e3 && c.T <= 1e12, "--T must lie in [1e3, 1e12]");
    require(c.y && *c.y >= 1.0 && *c.y <= max_expansion_length(c.T) * (1.0 + 1e-12),
            "--y must lie in [1, T / log^2 T]");
    require(c.samples >= 1000 && c.samples <= 100'000'000, "--samples must lie in [1e3, 1e8]");
  } else if (s == "moments") {
    require(c.mode == "signed" || c.mode == "absolute", "--mode must be signed or absolute");
    require(c.k >= 1 && c.k <= kMaxMomentOrder, "--k must lie in [1, 12]");
    require(finite_T && c.T >= 1e3 && c.T <= 1e15, "--T must lie in [1e3, 1e15]");
    require(c.samples >= 1000 && c.samples <= 100'000'000, "--samples must lie in [1e3, 1e8]");
    require(!c.y || (*c.y >= 1.0 && *c.y <= 1e6), "--y must lie in [1, 1e6]");
  } else if (s == "distribution") {
    require(finite_T && c.T >= 500.0 && c.T_hi && std::isfinite(*c.T_hi) && *c.T_hi >= 2.0 * c.T && *c.T_hi <= 1e15,
            "--T-hi must satisfy T-hi >= 2 T >= 1e3");
    require(c.samples >= 2 && c.samples <= 100'000'000, "--samples must lie in [2, 1e8]");
    require(c.bins >= 1 && c.bins <= 100'000, "--bins must lie in [1, 1e5]");
  } else if (s == "report") {
    require(finite_T && c.T >= 1e3 && c.T <= 1e12, "--T must lie in [1e3, 1e12]");
    require(c.samples >= 1000 && c.samples <= 100'000'000, "--samples must lie in [1e3, 1e8]");
    require(c.A >= 0.0 && c.A <= 9.0, "--A must lie in [0, 9]");
    require(!c.T_list.empty(), "--T-list must not be empty");
    for (std::size_t i = 0; i < c.T_list.size(); ++i) {
      require(c.T_list[i] >= 1e3 && c.T_list[i] <= 1e12, "--T-list entries must lie in [1e3, 1e12]");
      require(i == 0 || c.T_list[i] > c.T_list[i - 1], "--T-list must be strictly increasing");
    }
  }
}

ParseOutcome parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral counting and Weyl-law error statistics for Heisenberg manifolds", "hweyl"};
  app.require_subcommand(1);
  RawFlags raw;

  auto* tau_cmd = app.add_subcommand("tau", "Table of tau_l(n) and d(n)");
  add_common(tau_cmd, raw);
  tau_cmd->add_option("--limit", raw.limit, "Largest n");
  tau_cmd->add_option("--endpoint", raw.endpoint, "q = h pair convention: excluded or half");

  auto* series_cmd = app.add_subcommand("series", "Truncated singular series s_{k;v}(tau_l; y)");
  add_common(series_cmd, raw);
  series_cmd->add_option("--k", raw.k, "Number of terms k, 2..9");
  series_cmd->add_option("--v", raw.v, "Split 1 <= v < k");
  series_cmd->add_option("--y", raw.y, "Truncation y");
  series_cmd->add_option("--method", raw.method, "kernel or mitm");
  series_cmd->add_option("--endpoint", raw.endpoint, "q = h pair convention: excluded or half");

  auto* error_cmd = app.add_subcommand("error-term", "Samples of the sawtooth error sum on [T, 2T]");
  add_common(error_cmd, raw);
  add_sampling(error_cmd, raw);
  error_cmd->add_option("--T", raw.T, "Lower end of [T, 2T]");

  auto* exact_cmd = app.add_subcommand("exact-check", "Exact counts against the sawtooth sum");
  add_common(exact_cmd, raw);
  exact_cmd->add_option("--samples", raw.samples, "Number of sample points");
  exact_cmd->add_option("--seed", raw.seed, "Random seed");
  exact_cmd->add_option("--xmin", raw.x_min, "Lower end of the x range");
  exact_cmd->add_option("--xmax", raw.x_max, "Upper end of the x range");

  auto* expansion_cmd = app.add_subcommand("expansion", "Mean square left by the truncated cosine expansion");
  add_common(expansion_cmd, raw);
  add_sampling(expansion_cmd, raw);
  expansion_cmd->add_option("--T", raw.T, "Lower end of [T, 2T]");
  expansion_cmd->add_option("--y", raw.y, "Expansion length (default T / log^2 T)");
  expansion_cmd->add_option("--endpoint", raw.endpoint, "q = h pair convention: excluded or half");

  auto* moments_cmd = app.add_subcommand("moments", "k-th moment on [T, 2T] against its predicted coefficient");
  add_common(moments_cmd, raw);
  add_sampling(moments_cmd, raw);
  moments_cmd->add_option("--k", raw.k, "Moment order 1..12");
  moments_cmd->add_option("--T", raw.T, "Lower end of [T, 2T]");
  moments_cmd->add_option("--mode", raw.mode, "signed or absolute");
  moments_cmd->add_option("--y", raw.y, "Series cutoff for B_k (default by k)");
  moments_cmd->add_option("--endpoint", raw.endpoint, "q = h pair convention: excluded or half");

  auto* dist_cmd = app.add_subcommand("distribution", "Histogram of the normalized error term");
  add_common(dist_cmd, raw);
  add_sampling(dist_cmd, raw);
  dist_cmd->add_option("--T", raw.T, "Lower end of the range");
  dist_cmd->add_option("--T-hi", raw.T_hi, "Upper end of the range (default 2T)");
  dist_cmd->add_option("--bins", raw.bins, "Number of histogram bins");

  auto* report_cmd = app.add_subcommand("report", "Constants, series values and a short moment study");
  add_common(report_cmd, raw);
  add_sampling(report_cmd, raw);
  report_cmd->add_option("--T", raw.T, "Lower end of [T, 2T] for the mean square");
  report_cmd->add_option("--A", raw.A, "Exponent of the absolute-moment growth study");
  report_cmd->add_option("--T-list", raw.T_list, "Heights of the growth study (default T, 10T)")->delimiter(',');
  report_cmd->add_option("--endpoint", raw.endpoint, "q = h pair convention: excluded or half");

  ParseOutcome outcome;
  if (argc > 1 && argv[1][0] != '-' &&
      std::find(kSubcommands.begin(), kSubcommands.end(), argv[1]) == kSubcommands.end()) {
    err << "hweyl: error: unknown subcommand '" << argv[1] << "'\n";
    outcome.exit_code = kExitValidation;
    return outcome;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    outcome.exit_code = app.exit(e, out, err);
    return outcome;
  } catch (const CLI::CallForAllHelp& e) {
    outcome.exit_code = app.exit(e, out, err);
    return outcome;
  } catch (const CLI::ParseError& e) {
    err << "hweyl: error: " << e.what() << '\n';
    outcome.exit_code = kExitValidation;
    return outcome;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (raw.config) merge_config_file(sub, *raw.config);
    RunConfig config = resolve(sub->get_name(), raw);
    validate(config);
    outcome.config = std::move(config);
  } catch (const ValidationError& e) {
    err << "hweyl: error: " << e.what() << '\n';
    outcome.exit_code = kExitValidation;
  }
  return outcome;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<void(const RunConfig&, std::ostream&)>> handlers = {
      {"tau", run_tau},           {"series", run_series},   {"error-term", run_error_term},
      {"exact-check", run_exact_check}, {"expansion", run_expansion}, {"moments", run_moments},
      {"distribution", run_distribution}, {"report", run_report},
  };
  try {
    validate(config);
    const auto it = handlers.find(config.subcommand);
    std::ostringstream report;
    it->second(config, report);

    if (config.output_path) {
      const auto path = resolve_output(*config.output_path);
      std::ofstream file(path, std::ios::binary | std::ios::trunc);
      if (!file) throw ResourceError("cannot open output path '" + path.string() + "'");
      file << report.str();
      file.flush();
      if (!file) throw ResourceError("cannot write output path '" + path.string() + "'");
    } else {
      out << report.str();
      out.flush();
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "hweyl: error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ResourceError& e) {
    err << "hweyl: resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::bad_alloc&) {
    err << "hweyl: resource error: out of memory\n";
    return kExitResource;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const ParseOutcome outcome = parse(argc, argv, out, err);
  if (!outcome.config) return outcome.exit_code;
  return run(*outcome.config, out, err);
}

}  // namespace hweyl::cli
