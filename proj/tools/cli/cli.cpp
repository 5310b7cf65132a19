#include "cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "varmarest/error.hpp"
#include "varmarest/inference.hpp"
#include "varmarest/irf.hpp"
#include "varmarest/transport.hpp"

#ifndef VARMA_REST_VERSION
#define VARMA_REST_VERSION "0.0.0"
#endif

namespace varmarest::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Matrix matrix_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) fail(ErrorKind::ConfigError, what + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) {
      fail(ErrorKind::ConfigError, what + " has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Vector vector_from(const json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorKind::ConfigError, what + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, path.string() + ": " + e.what());
  }
}

std::string hex64(std::uint64_t v) {
  std::ostringstream out;
  out << "0x" << std::hex << std::setw(16) << std::setfill('0') << v;
  return out.str();
}

struct Provenance {
  std::string version = VARMA_REST_VERSION;
  std::uint64_t seed = 0;
  std::string config_hash;

  std::string csv_header() const {
    return "# generator: varma_rest " + version + "\n# seed: " + std::to_string(seed) +
           "\n# config_hash: " + config_hash + "\n";
  }
  json to_json() const { return {{"generator", "varma_rest"}, {"version", version}, {"seed", seed}, {"config_hash", config_hash}}; }
};

Provenance provenance_for(const RunConfig& cfg) {
  json canonical = cfg.to_json();
  canonical.erase("out");
  return Provenance{VARMA_REST_VERSION, cfg.seed, hex64(fnv1a(canonical.dump()))};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::ConfigError, "cannot write " + path.string());
  out << text;
}

fs::path output_dir(const RunConfig& cfg) {
  const fs::path dir = fs::absolute(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::ConfigError, "cannot create output directory " + dir.string());
  return dir;
}

VarmaSpec resolve_spec(const RunConfig& cfg) {
  if (!cfg.spec_inline.is_null()) return spec_from_json(cfg.spec_inline);
  if (cfg.spec.empty()) fail(ErrorKind::ConfigError, "a model file is required (--spec)");
  return spec_from_json(load_json(cfg.spec));
}

InnovationSampler resolve_sampler(const RunConfig& cfg, int d) {
  if (!cfg.sampler_inline.is_null()) return sampler_from_json(cfg.sampler_inline, d);
  if (cfg.sampler.size() > 5 && cfg.sampler.ends_with(".json")) return sampler_from_json(load_json(cfg.sampler), d);
  return named_sampler(cfg.sampler, d);
}

Series load_series(const RunConfig& cfg, std::vector<std::string>* header = nullptr) {
  if (cfg.input.empty()) fail(ErrorKind::ConfigError, "an input CSV is required (--input)");
  CsvTable table = read_csv(cfg.input);
  if (header) *header = table.header;
  if (cfg.demean && table.values.rows() > 0) table.values.rowwise() -= table.values.colwise().mean();
  return table.values;
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

std::vector<std::string> parameter_names(int p, int q, int d) {
  std::vector<std::string> names;
  for (int i = 0; i < p + q; ++i) {
    const std::string base = i < p ? "A" + std::to_string(i + 1) : "B" + std::to_string(i - p + 1);
    for (int c = 1; c <= d; ++c) {
      for (int r = 1; r <= d; ++r) names.push_back(base + "[" + std::to_string(r) + "," + std::to_string(c) + "]");
    }
  }
  return names;
}

// ---------------------------------------------------------------- commands

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const VarmaSpec spec = resolve_spec(cfg);
  const InnovationSampler sampler = resolve_sampler(cfg, spec.d());
  if (cfg.n < 1) fail(ErrorKind::ConfigError, "--n must be positive");
  const Series x = simulate(spec, innovation_source(sampler), cfg.n, cfg.burn_in, cfg.seed);

  const Provenance prov = provenance_for(cfg);
  const fs::path dir = output_dir(cfg);
  std::ostringstream csv;
  csv << prov.csv_header();
  for (int k = 0; k < spec.d(); ++k) csv << (k ? "," : "") << 'X' << (k + 1);
  csv << '\n';
  for (Eigen::Index t = 0; t < x.rows(); ++t) {
    for (int k = 0; k < spec.d(); ++k) csv << (k ? "," : "") << format_double(x(t, k));
    csv << '\n';
  }
  write_text(dir / "series.csv", csv.str());

  json meta = {{"provenance", prov.to_json()},
               {"spec", spec_to_json(spec)},
               {"sampler", cfg.sampler_inline.is_null() ? json(cfg.sampler) : cfg.sampler_inline},
               {"sampler_kind", std::string(to_string(sampler.kind))},
               {"n", cfg.n},
               {"burn_in", cfg.burn_in},
               {"seed", cfg.seed}};
  write_text(dir / "simulate_meta.json", meta.dump(2) + "\n");
  out << "wrote " << (dir / "series.csv").string() << " (" << x.rows() << " rows)\n";
  return kExitOk;
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
  const Series x = load_series(cfg);
  EstimationOptions opt;
  opt.p = cfg.p;
  opt.q = cfg.q;
  opt.scores = cfg.scores;
  opt.iterations = cfg.iterations;
  opt.prelim = parse_prelim_method(cfg.prelim);
  if (!cfg.grid.empty()) opt.grid = parse_grid_strategy(cfg.grid);
  opt.seed = cfg.seed;

  const Provenance prov = provenance_for(cfg);
  const fs::path dir = output_dir(cfg);
  EstimationResult r;
  try {
    r = r_estimate(x, opt);
  } catch (const Error& e) {
    json diag = {{"provenance", prov.to_json()},
                 {"error", std::string(to_string(e.kind()))},
                 {"message", e.what()},
                 {"n", x.rows()},
                 {"d", x.cols()},
                 {"orders", {cfg.p, cfg.q}}};
    write_text(dir / "estimate_error.json", diag.dump(2) + "\n");
    throw;
  }

  const auto names = parameter_names(r.p, r.q, r.d);
  json iterations = json::array();
  for (const auto& it : r.iterations) {
    iterations.push_back({{"theta", vector_json(it.theta)}, {"delta_norm", it.delta_norm}, {"step_scale", it.step_scale}});
  }
  json doc = {{"provenance", prov.to_json()},
              {"p", r.p},
              {"q", r.q},
              {"d", r.d},
              {"n", r.n},
              {"scores", r.scores},
              {"parameters", names},
              {"theta", vector_json(r.theta_tilde)},
              {"std_errors", vector_json(r.std_errors)},
              {"theta_prelim", vector_json(r.theta_prelim)},
              {"iterations", iterations},
              {"upsilon", matrix_json(r.upsilon)},
              {"omega", matrix_json(r.omega)},
              {"diagnostics",
               {{"n_R", r.factorization.n_R},
                {"n_S", r.factorization.n_S},
                {"n_0", r.factorization.n_0},
                {"grid", std::string(to_string(opt.grid.value_or(default_grid_strategy(r.d))))},
                {"preliminary", std::string(to_string(opt.prelim))},
                {"reversed_perturbations", r.reversed_columns},
                {"demeaned", cfg.demean}}}};
  write_text(dir / "estimate.json", doc.dump(2) + "\n");

  std::ostringstream ranks;
  ranks << prov.csv_header() << "t,rank";
  for (int k = 1; k <= r.d; ++k) ranks << ",sign" << k;
  ranks << '\n';
  const auto& prof = r.last_profile;
  for (int t = 0; t < prof.n; ++t) {
    ranks << (t + 1) << ',' << prof.ranks[t];
    for (int k = 0; k < r.d; ++k) ranks << ',' << format_double(prof.signs(t, k));
    ranks << '\n';
  }
  write_text(dir / "ranks.csv", ranks.str());

  if (cfg.format == "csv") {
    std::ostringstream est;
    est << prov.csv_header() << "parameter,estimate,std_error,preliminary\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      est << names[i] << ',' << format_double(r.theta_tilde(k)) << ','
          << (r.std_errors.size() ? format_double(r.std_errors(k)) : "") << ',' << format_double(r.theta_prelim(k))
          << '\n';
    }
    write_text(dir / "estimate.csv", est.str());
  }

  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << std::left << std::setw(10) << names[i] << std::right << std::setw(12) << std::fixed << std::setprecision(4)
        << r.theta_tilde(k) << "  (" << r.std_errors(k) << ")\n";
  }
  return kExitOk;
}

int cmd_montecarlo(const RunConfig& cfg, std::ostream& out) {
  StudyDesign design;
  design.spec = resolve_spec(cfg);
  design.sampler = resolve_sampler(cfg, design.spec.d());
  design.name = cfg.sampler_inline.is_null() ? cfg.sampler : "custom";
  design.n = cfg.n;
  design.replications = cfg.replications;
  design.estimators = cfg.estimators;
  design.iterations = cfg.iterations;
  design.seed = cfg.seed;
  design.burn_in = cfg.burn_in;
  if (cfg.ao_fraction > 0.0) {
    Vector xi = Vector::Constant(design.spec.d(), 4.0);
    if (!cfg.ao_xi.empty()) xi = Eigen::Map<const Vector>(cfg.ao_xi.data(), static_cast<Eigen::Index>(cfg.ao_xi.size()));
    design.outliers = AdditiveOutliers{cfg.ao_fraction, xi};
    design.name += "+ao";
  }
  const MonteCarloReport report = run_study(design);

  const Provenance prov = provenance_for(cfg);
  const fs::path dir = output_dir(cfg);
  if (cfg.format == "json") {
    json estimators = json::array();
    for (const auto& e : report.estimators) {
      estimators.push_back({{"name", e.name == "ols" ? "OLS-QMLE" : e.name},
                            {"bias_e3", vector_json(1e3 * e.bias)},
                            {"mse_e3", vector_json(1e3 * e.mse)},
                            {"mse_sum_e3", 1e3 * e.mse_sum},
                            {"ratio", e.ratio}});
    }
    json doc = {{"provenance", prov.to_json()},
                {"design", report.design},
                {"n", report.n},
                {"replications", report.replications},
                {"attempted", report.attempted},
                {"failed", report.failed},
                {"seed", report.seed},
                {"truth", vector_json(report.truth)},
                {"baseline", report.baseline == "ols" ? "OLS-QMLE" : report.baseline},
                {"estimators", estimators}};
    write_text(dir / "mc_report.json", doc.dump(2) + "\n");
  } else {
    write_text(dir / "mc_table.csv", prov.csv_header() + report_table_csv(report));
    write_text(dir / "mc_ratios.csv", prov.csv_header() + report_ratios_csv(report));
  }
  out << report_ratios_csv(report);
  return kExitOk;
}

int cmd_irf(const RunConfig& cfg, std::ostream& out) {
  const VarmaSpec spec = resolve_spec(cfg);
  const IrfTable table = impulse_response(spec, cfg.shock, cfg.horizon);
  const Provenance prov = provenance_for(cfg);
  const fs::path dir = output_dir(cfg);
  if (cfg.format == "json") {
    json W = json::array();
    for (const auto& w : table.W) W.push_back(matrix_json(w));
    json doc = {{"provenance", prov.to_json()}, {"shock", table.shock}, {"horizon", table.horizon},
                {"W", W}, {"paths", matrix_json(table.paths)}};
    write_text(dir / "irf.json", doc.dump(2) + "\n");
  } else {
    write_text(dir / "irf.csv", prov.csv_header() + irf_csv(table));
  }
  out << "wrote impulse responses to shock " << table.shock << " for horizons 0.." << table.horizon << '\n';
  return kExitOk;
}

int cmd_contours(const RunConfig& cfg, std::ostream& out) {
  Series z = load_series(cfg);
  if (!cfg.spec_inline.is_null() || !cfg.spec.empty()) z = residuals(resolve_spec(cfg), z);
  const int n = static_cast<int>(z.rows());
  const int d = static_cast<int>(z.cols());
  const GridFactorization f = factorize_n(n, d);
  const GridStrategy strategy = cfg.grid.empty() ? default_grid_strategy(d) : parse_grid_strategy(cfg.grid);
  const CenterOutwardGrid grid = make_grid(f.n_R, f.n_S, f.n_0, d, strategy, cfg.seed);
  const RankSignProfile profile = assign(z, grid);

  std::vector<int> ranks = cfg.ranks;
  if (ranks.empty()) {
    const std::vector<double> probs = cfg.probs.empty() ? std::vector<double>{0.269, 0.5, 0.8} : cfg.probs;
    for (double prob : probs) {
      if (!(prob > 0.0 && prob < 1.0)) fail(ErrorKind::ConfigError, "probability contents must lie in (0, 1)");
      ranks.push_back(std::clamp(static_cast<int>(std::lround(prob * (f.n_R + 1))), 1, f.n_R));
    }
  }

  const Provenance prov = provenance_for(cfg);
  const fs::path dir = output_dir(cfg);
  std::ostringstream csv;
  csv << prov.csv_header() << "rank,prob_content";
  for (int k = 1; k <= d; ++k) csv << ",x" << k;
  csv << '\n';
  for (int j : ranks) {
    const Series pts = quantile_contour(profile, z, j);
    const double content = static_cast<double>(j) / (f.n_R + 1);
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
      csv << j << ',' << format_double(content);
      for (int k = 0; k < d; ++k) csv << ',' << format_double(pts(r, k));
      csv << '\n';
    }
    out << "rank " << j << ": probability content " << std::setprecision(4) << content << ", " << pts.rows()
        << " points\n";
  }
  write_text(dir / "contours.csv", csv.str());
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::ParseError:
    case ErrorKind::BadCovariance:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::StrategyDimensionMismatch:
    case ErrorKind::ShockIndexOutOfRange:
    case ErrorKind::RankOutOfRange:
    case ErrorKind::Infeasible:
    case ErrorKind::SizeMismatch:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) fail(ErrorKind::ConfigError, "config must be a JSON object");
  try {
    take(j, "input", c.input);
    if (j.contains("spec")) {
      if (j["spec"].is_object()) c.spec_inline = j["spec"];
      else c.spec = j["spec"].get<std::string>();
    }
    if (j.contains("sampler")) {
      if (j["sampler"].is_object()) c.sampler_inline = j["sampler"];
      else c.sampler = j["sampler"].get<std::string>();
    }
    if (j.contains("orders")) {
      c.p = j["orders"].at(0).get<int>();
      c.q = j["orders"].at(1).get<int>();
    }
    take(j, "p", c.p);
    take(j, "q", c.q);
    take(j, "scores", c.scores);
    if (j.contains("iterations") && !j["iterations"].is_null()) c.iterations = j["iterations"].get<int>();
    take(j, "grid", c.grid);
    take(j, "seed", c.seed);
    take(j, "out", c.out);
    take(j, "format", c.format);
    take(j, "n", c.n);
    take(j, "burn_in", c.burn_in);
    take(j, "demean", c.demean);
    take(j, "prelim", c.prelim);
    take(j, "replications", c.replications);
    take(j, "estimators", c.estimators);
    take(j, "ao_fraction", c.ao_fraction);
    take(j, "ao_xi", c.ao_xi);
    take(j, "shock", c.shock);
    take(j, "horizon", c.horizon);
    take(j, "ranks", c.ranks);
    take(j, "probs", c.probs);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("config: ") + e.what());
  }
  return c;
}

std::pair<int, int> parse_orders(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    const int p = std::stoi(text.substr(0, comma), &used);
    const int q = std::stoi(text.substr(comma + 1));
    return {p, q};
  } catch (const std::exception&) {
    fail(ErrorKind::ConfigError, "--orders expects p,q, got '" + text + "'");
  }
}

}  // namespace

json RunConfig::to_json() const {
  json j = {{"command", command},   {"input", input},     {"spec", spec_inline.is_null() ? json(spec) : spec_inline},
            {"sampler", sampler_inline.is_null() ? json(sampler) : sampler_inline},
            {"orders", {p, q}},     {"scores", scores},   {"grid", grid},
            {"seed", seed},         {"out", out},         {"format", format},
            {"n", n},               {"burn_in", burn_in}, {"demean", demean},
            {"prelim", prelim},     {"replications", replications},
            {"estimators", estimators}, {"ao_fraction", ao_fraction}, {"ao_xi", ao_xi},
            {"shock", shock},       {"horizon", horizon}, {"ranks", ranks},
            {"probs", probs}};
  j["iterations"] = iterations ? json(*iterations) : json(nullptr);
  return j;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "cannot open " + path.string());
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  bool have_header = false;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      table.header = split(line);
      have_header = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      fail(ErrorKind::ParseError, path.string() + " line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(table.header.size()) + " columns, found " +
                                      std::to_string(cells.size()));
    }
    std::vector<double> values;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      double v = 0.0;
      std::size_t used = 0;
      bool ok = true;
      try {
        v = std::stod(cell, &used);
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        ok = used == cell.size() && std::isfinite(v);
      } catch (const std::exception&) {
        ok = false;
      }
      if (!ok) {
        fail(ErrorKind::ParseError, path.string() + " line " + std::to_string(line_no) + ", column " +
                                        std::to_string(c + 1) + " (" + table.header[c] + "): '" + cell +
                                        "' is not a number");
      }
      values.push_back(v);
    }
    rows.push_back(std::move(values));
  }
  if (!have_header) fail(ErrorKind::ParseError, path.string() + ": no header row");
  table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(table.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  return table;
}

VarmaSpec spec_from_json(const json& j) {
  try {
    const int p = j.value("p", 0);
    const int q = j.value("q", 0);
    if (j.contains("theta")) {
      const Vector theta = vector_from(j["theta"], "theta");
      const int d = j.contains("d") ? j["d"].get<int>()
                                    : static_cast<int>(std::lround(std::sqrt(theta.size() / std::max(1, p + q))));
      return VarmaSpec::from_theta(p, q, d, theta);
    }
    std::vector<Matrix> ar, ma;
    if (j.contains("ar")) {
      for (const auto& m : j["ar"]) ar.push_back(matrix_from(m, "ar"));
    }
    if (j.contains("ma")) {
      for (const auto& m : j["ma"]) ma.push_back(matrix_from(m, "ma"));
    }
    const int d = j.contains("d") ? j["d"].get<int>()
                                  : static_cast<int>(!ar.empty() ? ar.front().rows() : (!ma.empty() ? ma.front().rows() : 0));
    return VarmaSpec::build(j.value("p", static_cast<int>(ar.size())), j.value("q", static_cast<int>(ma.size())), d,
                            std::move(ar), std::move(ma));
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("model file: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DimensionMismatch) fail(ErrorKind::ConfigError, e.what());
    throw;
  }
}

json spec_to_json(const VarmaSpec& spec) {
  json ar = json::array(), ma = json::array();
  for (const auto& m : spec.ar()) ar.push_back(matrix_json(m));
  for (const auto& m : spec.ma()) ma.push_back(matrix_json(m));
  return {{"p", spec.p()}, {"q", spec.q()}, {"d", spec.d()}, {"ar", ar}, {"ma", ma}, {"theta", vector_json(spec.theta())}};
}

InnovationSampler sampler_from_json(const json& j, int d) {
  if (j.is_string()) return named_sampler(j.get<std::string>(), d);
  try {
    const std::string kind = j.at("kind").get<std::string>();
    InnovationSampler s;
    if (kind == "spherical_gaussian" || (kind == "gaussian" && !j.contains("sigma"))) {
      s = spherical_gaussian_sampler(d);
    } else if (kind == "spherical_t") {
      s = spherical_t_sampler(d, j.value("nu", 3.0));
    } else if (kind == "gaussian") {
      s = gaussian_sampler(matrix_from(j.at("sigma"), "sigma"));
    } else if (kind == "mixture") {
      std::vector<Vector> means;
      std::vector<Matrix> covs;
      for (const auto& m : j.at("means")) means.push_back(vector_from(m, "means"));
      for (const auto& c : j.at("covariances")) covs.push_back(matrix_from(c, "covariances"));
      s = mixture_sampler(j.at("weights").get<std::vector<double>>(), std::move(means), std::move(covs));
    } else if (kind == "skew_normal" || kind == "skew_t") {
      const Vector xi = j.contains("xi") ? vector_from(j["xi"], "xi") : Vector::Zero(d);
      const Matrix omega = matrix_from(j.at("omega"), "omega");
      const Vector alpha = vector_from(j.at("alpha"), "alpha");
      s = kind == "skew_normal" ? skew_normal_sampler(xi, omega, alpha)
                                : skew_t_sampler(xi, omega, alpha, j.value("nu", 3.0));
    } else {
      fail(ErrorKind::ConfigError, "unknown sampler kind '" + kind + "'");
    }
    if (j.contains("center")) {
      const std::string center = j["center"].get<std::string>();
      if (center != "none" && center != "sample_mean") fail(ErrorKind::ConfigError, "center must be none or sample_mean");
      s.center = center == "none" ? CenterMode::None : CenterMode::SampleMean;
    }
    if (s.d != d) fail(ErrorKind::ConfigError, "sampler dimension does not match the model");
    validate(s);
    return s;
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("sampler: ") + e.what());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Center-outward R-estimation for semiparametric VARMA models", "varma_rest"};
  app.set_version_flag("--version", VARMA_REST_VERSION);
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path, orders, sampler;
  std::string iterations_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config; flags override its values");
    sub->add_option("--seed", flags.seed, "Random seed");
    sub->add_option("--out", flags.out, "Output directory");
    sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--orders", orders, "AR and MA orders as p,q");
    sub->add_option("--scores", flags.scores, "sign, spearman or vdw");
    sub->add_option("--iterations", flags.iterations, "One-step iterations (default 5 for n >= 1000, else 10)");
    sub->add_option("--grid", flags.grid, "regular2d, fibonacci3d or random");
  };

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Simulate a VARMA path");
  add_common(simulate_cmd);
  simulate_cmd->add_option("--spec", flags.spec, "Model JSON");
  simulate_cmd->add_option("--sampler", sampler, "Innovation design name or sampler JSON");
  simulate_cmd->add_option("--n", flags.n, "Sample size");
  simulate_cmd->add_option("--burn-in", flags.burn_in, "Discarded warm-up length");

  CLI::App* estimate_cmd = app.add_subcommand("estimate", "R-estimate a VARMA model from a CSV series");
  add_common(estimate_cmd);
  add_model(estimate_cmd);
  estimate_cmd->add_option("--input", flags.input, "Input CSV (header row, one column per variable)");
  estimate_cmd->add_option("--prelim", flags.prelim, "auto, ols_var or hannan_rissanen");
  estimate_cmd->add_flag("--no-demean", "Keep the column means");

  CLI::App* mc_cmd = app.add_subcommand("montecarlo", "Monte Carlo comparison of estimators");
  add_common(mc_cmd);
  add_model(mc_cmd);
  mc_cmd->add_option("--spec", flags.spec, "Model JSON");
  mc_cmd->add_option("--sampler", sampler, "Innovation design name or sampler JSON");
  mc_cmd->add_option("--n", flags.n, "Sample size");
  mc_cmd->add_option("--replications", flags.replications, "Number of replications");
  mc_cmd->add_option("--estimators", flags.estimators, "Estimators; the first is the ratio baseline")->delimiter(',');
  mc_cmd->add_option("--ao-fraction", flags.ao_fraction, "Fraction of equally spaced additive outliers");
  mc_cmd->add_option("--ao-xi", flags.ao_xi, "Outlier size")->delimiter(',');

  CLI::App* irf_cmd = app.add_subcommand("irf", "Impulse responses of a fitted or given model");
  add_common(irf_cmd);
  irf_cmd->add_option("--spec", flags.spec, "Model JSON (estimate.json also accepted)");
  irf_cmd->add_option("--shock", flags.shock, "Shocked variable, 1-based");
  irf_cmd->add_option("--horizon", flags.horizon, "Largest horizon");

  CLI::App* contours_cmd = app.add_subcommand("contours", "Center-outward quantile contours");
  add_common(contours_cmd);
  contours_cmd->add_option("--input", flags.input, "Input CSV");
  contours_cmd->add_option("--spec", flags.spec, "Optional model; contours of its residuals");
  contours_cmd->add_option("--grid", flags.grid, "regular2d, fibonacci3d or random");
  contours_cmd->add_option("--ranks", flags.ranks, "Rank indices j")->delimiter(',');
  contours_cmd->add_option("--probs", flags.probs, "Probability contents")->delimiter(',');
  contours_cmd->add_flag("--no-demean", "Keep the column means");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : config_from_json(load_json(config_path));
    cfg.command = sub->get_name();
    auto given = [&](const char* name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--seed")) cfg.seed = flags.seed;
    if (given("--out")) cfg.out = flags.out;
    if (given("--format")) cfg.format = flags.format;
    if (given("--orders")) std::tie(cfg.p, cfg.q) = parse_orders(orders);
    if (given("--scores")) cfg.scores = flags.scores;
    if (given("--iterations")) cfg.iterations = flags.iterations;
    if (given("--grid")) cfg.grid = flags.grid;
    if (given("--spec")) {
      cfg.spec = flags.spec;
      cfg.spec_inline = nullptr;
    }
    if (given("--sampler")) {
      cfg.sampler = sampler;
      cfg.sampler_inline = nullptr;
    }
    if (given("--n")) cfg.n = flags.n;
    if (given("--burn-in")) cfg.burn_in = flags.burn_in;
    if (given("--input")) cfg.input = flags.input;
    if (given("--prelim")) cfg.prelim = flags.prelim;
    if (given("--no-demean")) cfg.demean = false;
    if (given("--replications")) cfg.replications = flags.replications;
    if (given("--estimators")) cfg.estimators = flags.estimators;
    if (given("--ao-fraction")) cfg.ao_fraction = flags.ao_fraction;
    if (given("--ao-xi")) cfg.ao_xi = flags.ao_xi;
    if (given("--shock")) cfg.shock = flags.shock;
    if (given("--horizon")) cfg.horizon = flags.horizon;
    if (given("--ranks")) cfg.ranks = flags.ranks;
    if (given("--probs")) cfg.probs = flags.probs;
    if (cfg.format != "csv" && cfg.format != "json") fail(ErrorKind::ConfigError, "format must be csv or json");
    if (!cfg.input.empty()) cfg.input = fs::absolute(cfg.input).string();
    if (!cfg.spec.empty()) cfg.spec = fs::absolute(cfg.spec).string();

    if (cfg.command == "simulate") return cmd_simulate(cfg, out);
    if (cfg.command == "estimate") return cmd_estimate(cfg, out);
    if (cfg.command == "montecarlo") return cmd_montecarlo(cfg, out);
    if (cfg.command == "irf") return cmd_irf(cfg, out);
    return cmd_contours(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace varmarest::cli
