#pragma once

#include "cldg/app/config.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace cldg::app {

/// A run failure tagged with the stage that raised it.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

struct RunSummary {
  std::string experiment;
  std::vector<std::string> files;
  std::vector<Check> checks;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

/// Runs the configured experiment, writing its files under cfg.output_dir.
RunSummary run(const RunConfig& cfg);

}  // namespace cldg::app
