#pragma once

// JSON run configuration: parsing with field-path errors, validation and
// serialization.

#include "pslab/cartan.hpp"
#include "pslab/errors.hpp"
#include "pslab/matgroup.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pslab {

inline constexpr int kSchemaVersion = 1;

/// ConfigInvalid with the JSON path of the offending field.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(ErrorCode::ConfigInvalid, path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// A functional written as {"omega": {"k": c}, "alpha": {"k": c}}; the two
/// parts are summed.
struct FunctionalSpec {
  std::map<int, double> omega;
  std::map<int, double> alpha;

  Functional build(int d) const;
  bool operator==(const FunctionalSpec&) const = default;
};

/// Optional image of 2x2 generators under a fixed representation.
struct RepresentationSpec {
  /// "none", "symmetric" (irreducible, target dimension) or "exterior" (power k).
  std::string type = "none";
  int degree = 0;
  bool operator==(const RepresentationSpec&) const = default;
};

struct RunConfig {
  int schemaVersion = kSchemaVersion;
  std::string command;
  int dimension = 0;
  /// As written in the file (before any representation is applied).
  std::vector<Matrix> generators;
  std::vector<std::string> labels;
  bool assumeFree = true;
  RepresentationSpec representation;
  std::vector<int> theta;
  FunctionalSpec phi;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output = "out";

  bool operator==(const RunConfig& o) const;
};

const std::vector<std::string>& knownCommands();

/// Parses and validates; throws ConfigError.
RunConfig parseConfig(const nlohmann::json& j);
RunConfig loadConfig(const std::string& path);
nlohmann::json toJson(const RunConfig& c);

/// The presentation after applying the representation.
GroupPresentation buildPresentation(const RunConfig& c);
ThetaSet buildTheta(const RunConfig& c);

FunctionalSpec parseFunctional(const nlohmann::json& j, const std::string& path, int d);
nlohmann::json functionalToJson(const FunctionalSpec& f);

/// Words are strings over single-letter labels (upper case for inverses) or
/// arrays of signed 1-based generator indices.
Word parseWord(const nlohmann::json& j, const GroupPresentation& p, const std::string& path);

/// Typed access to params with defaults and range checks.
class Params {
 public:
  Params(const nlohmann::json& j, std::string command);

  int integer(const std::string& key, int fallback, int lo, int hi) const;
  double real(const std::string& key, double fallback, double lo, double hi) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback,
                   const std::vector<std::string>& allowed) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  bool has(const std::string& key) const { return j_.contains(key); }
  const nlohmann::json& raw(const std::string& key) const { return j_.at(key); }
  std::string path(const std::string& key) const { return "params." + key; }

 private:
  const nlohmann::json& j_;
  std::string command_;
};

/// Keys accepted in params for each command.
const std::vector<std::string>& allowedParams(const std::string& command);

}  // namespace pslab
