#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conley/block.hpp"
#include "conley/field.hpp"

namespace conley::cli {

struct FieldConfig {
  std::optional<std::string> name;
  std::optional<std::string> p;
  std::optional<std::string> q;
  std::optional<double> lambda;
};

struct Tolerances {
  double face_tol = 1e-9;
  double winding_gap = 1e-6;
  double newton_tol = 1e-10;
  double rel_tol = 1e-9;
  double eps_conv = 5e-3;
  double eps_ret = 1e-4;
};

struct WindingConfig {
  Point center{0.0, 0.0};
  double radius = 0.5;
  int samples = 64;
};

struct OrbitConfig {
  Point seed{0.5, 0.5};
  /// forward | backward | both
  std::string direction = "both";
  double t_max = 20.0;
};

struct IntegrationConfig {
  Rect domain{-2.0, 2.0, -2.0, 2.0};
  double initial_step = 1e-2;
  double max_step = 0.5;
};

struct ScanConfig {
  Point center{0.0, 0.0};
  double radius = 0.2;
  int seeds = 32;
  double horizon = 50.0;
};

struct VerifyConfig {
  std::optional<long> chi;
  bool morse = false;
  std::vector<double> lambda_samples;
};

struct RunConfig {
  FieldConfig field;
  Rect domain{-1.0, 1.0, -1.0, 1.0};
  int depth = 4;
  int max_depth = 8;
  BlockShape shape;
  int face_samples = 33;
  Tolerances tolerances;
  WindingConfig winding;
  OrbitConfig orbits;
  IntegrationConfig integration;
  ScanConfig scan;
  VerifyConfig verify;

  /// Catalogue entry or parsed expression pair.
  VectorFieldSpec spec() const;
  BlockOptions block_options() const;
  /// Normalized echo of every setting, defaults included.
  nlohmann::json echo() const;
};

/// Strict INI parsing: `[section]` headers, `key = value` lines and `#`
/// comments. Throws ParseError (with line), UnknownKey or MissingRequired.
RunConfig parse_config(std::string_view text);

/// Throws IoError when the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace conley::cli
