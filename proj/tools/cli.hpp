#pragma once

// The rowfin verification harness: one subcommand per construction, each
// producing a text report and a structured JSON report.

#include "rowfin/check.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rowfin::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string subcommand;
  std::string ring;
  std::uint64_t window = 0;
  std::uint64_t seed = 1;
  std::string preorder;
  std::vector<std::string> inputs;
  std::string out;
  std::optional<std::uint64_t> bound;
  std::string corrupt;
  bool json = false;
  std::string family = "units";
  std::uint64_t count = 0;
  std::uint64_t samples = 0;
  std::uint64_t steps = 0;
  std::uint64_t oracle_steps = 0;
  std::uint64_t n = 2;
  std::uint64_t radius = 0;
  std::string descriptor;
  std::string x;
  std::string y;
  std::vector<std::string> gens;
};

struct Report {
  std::string subcommand;
  Json config = Json::object();
  CheckList checks;
  /// Caps hit by an oracle: reported, never a failure.
  std::vector<std::string> warnings;
  Json results = Json::object();
  Json witnesses = Json::object();
  double wall_seconds = 0;

  bool failed() const { return !checks.all_pass(); }
  /// "fail", "warning" or "pass".
  std::string status() const;
  /// Structured form; wall time is left out so identical runs compare equal.
  Json json() const;
  std::string text() const;
};

/// Runs one configured subcommand.
Report run(const RunConfig& config);

/// Full command line entry point. Exit status: 0 when every check passes
/// (warnings included), 1 on a failed check, 2 on a usage or input error.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rowfin::cli
