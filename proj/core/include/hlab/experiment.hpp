#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hlab/estimates.hpp"
#include "hlab/harnack.hpp"

namespace hlab {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Plain-text key-value configuration with [section] headers, '#' comments
/// and whitespace-separated list values.
class ExperimentConfig {
public:
  static ExperimentConfig parse_file(const std::string& path);
  static ExperimentConfig parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  std::string require(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  std::vector<std::string> get_list(const std::string& section,
                                    const std::string& key) const;
  std::vector<double> get_double_list(const std::string& section,
                                      const std::string& key) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);
  const std::string& raw_text() const { return raw_text_; }

private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string raw_text_;
};

struct CliOverrides {
  std::optional<std::string> out;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

/// Exit-code contract shared by the CLI subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolations = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolverAbort = 3;

int cmd_check_conditions(const ExperimentConfig& cfg, const CliOverrides& ov);
int cmd_solve(const ExperimentConfig& cfg, const CliOverrides& ov);
int cmd_verify(const ExperimentConfig& cfg, const CliOverrides& ov);
int cmd_harnack(const ExperimentConfig& cfg, const CliOverrides& ov);
int cmd_sweep(const ExperimentConfig& cfg, const CliOverrides& ov);

/// Wiring helpers shared by the commands and the test fixtures.
ModelGeometry build_geometry(const ExperimentConfig& cfg);
SpatialGrid build_grid(const ExperimentConfig& cfg, const ModelGeometry& geo);
SourceSpec build_source(const ExperimentConfig& cfg);
std::vector<double> build_initial_data(const ExperimentConfig& cfg,
                                       const ModelGeometry& geo,
                                       const SpatialGrid& grid,
                                       std::uint64_t seed);
ParamTriple build_triple(const ExperimentConfig& cfg, double K);
double resolve_curvature_bound(const ExperimentConfig& cfg,
                               const ModelGeometry& geo, double t_end);

/// Deterministic random trig modes: mode k+1 carries coefficients
/// cos_coef[k], sin_coef[k] on frequency (k+1)*k_unit; the amplitudes sum
/// to `amplitude` so data with base > amplitude stays positive.  Identical
/// across platforms for a given seed (the engine's raw bits are mapped to
/// uniforms directly).
struct TrigModes {
  double base = 1.0;
  double k_unit = 1.0;
  std::vector<double> cos_coef, sin_coef;
};

TrigModes random_trig_modes(const ModelGeometry& geo, double base,
                            double amplitude, int modes, std::uint64_t seed);
std::vector<double> evaluate_trig(const TrigModes& m, const SpatialGrid& grid);
std::vector<double> random_trig_data(const ModelGeometry& geo,
                                     const SpatialGrid& grid, double base,
                                     double amplitude, int modes,
                                     std::uint64_t seed);

std::string version_string();

}  // namespace hlab
