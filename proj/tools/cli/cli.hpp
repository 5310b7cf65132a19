#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "varmarest/model.hpp"
#include "varmarest/montecarlo.hpp"

namespace varmarest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Settings shared by all subcommands; a JSON config supplies defaults and
/// explicit flags override them.
struct RunConfig {
  std::string command;
  std::string input;
  std::string spec;
  std::string sampler = "gaussian";
  int p = 1;
  int q = 0;
  std::string scores = "vdw";
  std::optional<int> iterations;
  std::string grid;  // empty: default for the dimension
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string format = "csv";
  int n = 1000;
  int burn_in = kDefaultBurnIn;
  bool demean = true;
  std::string prelim = "auto";
  // montecarlo
  int replications = 100;
  std::vector<std::string> estimators{"ols", "vdw", "spearman"};
  double ao_fraction = 0.0;
  std::vector<double> ao_xi;
  // irf
  int shock = 1;
  int horizon = 20;
  // contours
  std::vector<int> ranks;
  std::vector<double> probs;

  // Inline JSON objects from a config file; null when the string forms apply.
  nlohmann::json spec_inline;
  nlohmann::json sampler_inline;

  nlohmann::json to_json() const;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

struct CsvTable {
  std::vector<std::string> header;
  Series values;
};

/// Header row then numeric rows; lines starting with '#' are skipped.
/// Throws ParseError naming the row and column of a bad cell.
CsvTable read_csv(const std::filesystem::path& path);

/// {"p", "q", "d", "ar": [[row, ...], ...], "ma": [...]} or
/// {"p", "q", "d", "theta": [...]}. Throws ConfigError.
VarmaSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const VarmaSpec& spec);

/// A built-in sampler name or {"kind": ..., ...} with the InnovationSampler
/// fields (sigma, weights, means, covariances, xi, omega, alpha, nu, center).
InnovationSampler sampler_from_json(const nlohmann::json& j, int d);

/// Entry point; returns the process exit code. Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace varmarest::cli
