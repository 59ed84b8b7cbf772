#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "epibias/analysis.hpp"
#include "epibias/config.hpp"

namespace epibias::test {

inline std::filesystem::path source_dir() { return EPIBIAS_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path golden_dir() { return data_dir() / "golden"; }

inline Config golden_config() { return Config::defaults(data_dir()); }

// Engine over the shipped data and fixtures, loaded once per process.
inline std::shared_ptr<const Engine> golden_engine() {
  static const auto engine = std::make_shared<const Engine>(Engine::from_config(golden_config()));
  return engine;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("epibias-test-" + name + "-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace epibias::test
