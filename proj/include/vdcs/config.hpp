#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "vdcs/degrade.hpp"

namespace vdcs {

// Per-task chroma-key settings for dataset generation. Tolerances are a
// required input; there is no claimed default.
struct TaskChroma {
  std::array<std::uint8_t, 3> reference = {0, 0, 0};
  int tolerance = -1;  // -1 means unset

  bool has_tolerance() const { return tolerance >= 0; }
};

// Everything a run can override from a JSON config file. Keys mirror the
// DegradationConfig field names, e.g.
//   {"rain": {"gamma": 0.3, "count_factor": 500},
//    "severity_walk_sigma": 0.02,
//    "schedule": {"ps": 0.8},
//    "tasks": {"walker_walk": {"chroma_ref": [0,0,0], "chroma_tol": 12}}}
struct EngineConfig {
  DegradationConfig degrade;
  double ps = 0.8;
  std::map<std::string, TaskChroma> tasks;
};

EngineConfig load_config(const std::filesystem::path& path);

// Canonical JSON of the effective degradation constants.
std::string config_to_json(const DegradationConfig& cfg);

// FNV-1a 64 over the canonical JSON, hex-encoded. Recorded in output
// headers so runs are replayable.
std::string config_hash(const DegradationConfig& cfg);

}  // namespace vdcs
