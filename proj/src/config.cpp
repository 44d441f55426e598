#include "vdcs/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "vdcs/errors.hpp"

namespace vdcs {

using nlohmann::json;

namespace {

void read_double(const json& j, const char* key, double* out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number()) throw ValidationError(std::string("config key must be numeric: ") + key);
  *out = j[key].get<double>();
}

void read_int(const json& j, const char* key, int* out) {
  if (!j.contains(key)) return;
  if (!j[key].is_number_integer()) {
    throw ValidationError(std::string("config key must be an integer: ") + key);
  }
  *out = j[key].get<int>();
}

void read_color(const json& j, const char* key, std::array<double, 3>* out) {
  if (!j.contains(key)) return;
  const auto& arr = j[key];
  if (!arr.is_array() || arr.size() != 3) {
    throw ValidationError(std::string("config key must be a 3-element array: ") + key);
  }
  for (int c = 0; c < 3; ++c) (*out)[c] = arr[c].get<double>();
}

void apply_overrides(DegradationConfig* cfg, const json& j) {
  if (j.contains("rain")) {
    const auto& r = j["rain"];
    read_double(r, "gamma", &cfg->rain.gamma);
    read_double(r, "count_factor", &cfg->rain.count_factor);
    read_double(r, "len_min", &cfg->rain.len_min);
    read_double(r, "len_max", &cfg->rain.len_max);
    read_double(r, "angle_min_deg", &cfg->rain.angle_min_deg);
    read_double(r, "angle_max_deg", &cfg->rain.angle_max_deg);
    read_color(r, "color", &cfg->rain.color);
    read_double(r, "base_severity", &cfg->rain.base_severity);
  }
  if (j.contains("snow")) {
    const auto& s = j["snow"];
    read_double(s, "gamma", &cfg->snow.gamma);
    read_double(s, "count_factor", &cfg->snow.count_factor);
    read_int(s, "radius_min", &cfg->snow.radius_min);
    read_int(s, "radius_max", &cfg->snow.radius_max);
    read_double(s, "brightness_min", &cfg->snow.brightness_min);
    read_double(s, "brightness_max", &cfg->snow.brightness_max);
    read_color(s, "color", &cfg->snow.color);
    read_double(s, "base_severity", &cfg->snow.base_severity);
  }
  if (j.contains("haze")) {
    const auto& h = j["haze"];
    read_double(h, "alpha_scale", &cfg->haze.alpha_scale);
    read_color(h, "color", &cfg->haze.color);
    read_double(h, "base_severity", &cfg->haze.base_severity);
  }
  if (j.contains("motion_blur")) {
    const auto& m = j["motion_blur"];
    read_double(m, "len_min", &cfg->motion_blur.len_min);
    read_double(m, "len_max", &cfg->motion_blur.len_max);
    read_double(m, "base_severity", &cfg->motion_blur.base_severity);
  }
  if (j.contains("gaussian_noise")) {
    const auto& g = j["gaussian_noise"];
    read_double(g, "sigma_max", &cfg->gaussian_noise.sigma_max);
    read_double(g, "base_severity", &cfg->gaussian_noise.base_severity);
  }
  if (j.contains("low_light")) {
    const auto& l = j["low_light"];
    read_double(l, "nu_min", &cfg->low_light.nu_min);
    read_double(l, "sigma", &cfg->low_light.sigma);
    read_double(l, "base_severity", &cfg->low_light.base_severity);
  }
  if (j.contains("jpeg")) {
    const auto& p = j["jpeg"];
    read_int(p, "q_min", &cfg->jpeg.q_min);
    read_int(p, "q_max", &cfg->jpeg.q_max);
    read_double(p, "base_severity", &cfg->jpeg.base_severity);
  }
  read_double(j, "severity_band_delta", &cfg->severity_band_delta);
  read_double(j, "severity_walk_sigma", &cfg->severity_walk_sigma);
}

}  // namespace

EngineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("malformed config JSON: " + std::string(e.what()));
  }

  EngineConfig cfg;
  apply_overrides(&cfg.degrade, j);
  if (j.contains("schedule")) {
    read_double(j["schedule"], "ps", &cfg.ps);
  }
  if (j.contains("tasks")) {
    for (const auto& [task, tj] : j["tasks"].items()) {
      TaskChroma tc;
      if (tj.contains("chroma_ref")) {
        std::array<double, 3> ref{};
        read_color(tj, "chroma_ref", &ref);
        for (int c = 0; c < 3; ++c) {
          if (ref[c] < 0 || ref[c] > 255) throw ValidationError("chroma_ref out of [0,255]");
          tc.reference[c] = static_cast<std::uint8_t>(ref[c]);
        }
      }
      read_int(tj, "chroma_tol", &tc.tolerance);
      cfg.tasks[task] = tc;
    }
  }
  return cfg;
}

std::string config_to_json(const DegradationConfig& cfg) {
  json j;
  j["rain"] = {{"gamma", cfg.rain.gamma},
               {"count_factor", cfg.rain.count_factor},
               {"len_min", cfg.rain.len_min},
               {"len_max", cfg.rain.len_max},
               {"angle_min_deg", cfg.rain.angle_min_deg},
               {"angle_max_deg", cfg.rain.angle_max_deg},
               {"color", cfg.rain.color},
               {"base_severity", cfg.rain.base_severity}};
  j["snow"] = {{"gamma", cfg.snow.gamma},
               {"count_factor", cfg.snow.count_factor},
               {"radius_min", cfg.snow.radius_min},
               {"radius_max", cfg.snow.radius_max},
               {"brightness_min", cfg.snow.brightness_min},
               {"brightness_max", cfg.snow.brightness_max},
               {"color", cfg.snow.color},
               {"base_severity", cfg.snow.base_severity}};
  j["haze"] = {{"alpha_scale", cfg.haze.alpha_scale},
               {"color", cfg.haze.color},
               {"base_severity", cfg.haze.base_severity}};
  j["motion_blur"] = {{"len_min", cfg.motion_blur.len_min},
                      {"len_max", cfg.motion_blur.len_max},
                      {"base_severity", cfg.motion_blur.base_severity}};
  j["gaussian_noise"] = {{"sigma_max", cfg.gaussian_noise.sigma_max},
                         {"base_severity", cfg.gaussian_noise.base_severity}};
  j["low_light"] = {{"nu_min", cfg.low_light.nu_min},
                    {"sigma", cfg.low_light.sigma},
                    {"base_severity", cfg.low_light.base_severity}};
  j["jpeg"] = {{"q_min", cfg.jpeg.q_min},
               {"q_max", cfg.jpeg.q_max},
               {"base_severity", cfg.jpeg.base_severity}};
  j["severity_band_delta"] = cfg.severity_band_delta;
  j["severity_walk_sigma"] = cfg.severity_walk_sigma;
  return j.dump();
}

std::string config_hash(const DegradationConfig& cfg) {
  const std::string canonical = config_to_json(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace vdcs
