#pragma once

#include "equinox/equilibrium.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace equinox::cli {

using json = nlohmann::ordered_json;

struct SolverSettings {
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  int max_refine = 12;
  double verify_tol = 1e-7;
};

struct Scenario {
  equilibrium::Economy economy;
  SolverSettings solver;
};

inline constexpr int kSchemaVersion = 1;

// Both throw Error(Errc::schema) naming the offending key or file.
Scenario parse_scenario(const json& doc);
Scenario load_scenario(const std::filesystem::path& path);

json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

json to_json(const equilibrium::ApproximateEquilibrium& eq);
json to_json(const equilibrium::ValidationReport& rep);
json to_json(const equilibrium::CheckReport& rep);

// Accepts a bare certificate or a result bundle holding one under
// "certificate".
equilibrium::ApproximateEquilibrium certificate_from_json(const json& doc);

std::string sweep_csv(const equilibrium::RefineSequence& seq, int dimension);

// Shortest round-trip formatting keeps every double exact.
std::string dump(const json& doc);

}  // namespace equinox::cli
