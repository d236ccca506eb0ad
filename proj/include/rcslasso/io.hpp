#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "rcslasso/model.hpp"

namespace rcslasso {

inline constexpr int kFormatVersion = 1;

/// Sidecar JSON header accompanying a binary payload file.
std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// Stream file: raw contiguous little-endian float64 values, plus a JSON
/// sidecar {N, S, sigma, seed, format_version} at sidecar_path(path).
void write_stream(const std::filesystem::path& path, const StreamSource& stream);
StreamSource read_stream(const std::filesystem::path& path);

/// Per-window measurement dump: windows concatenated as little-endian
/// float64 m-vectors, plus a JSON sidecar {n, m, lambda, gamma, seed,
/// format_version}. `seed` is the sensing-matrix seed, letting a decoder
/// regenerate A.
struct MeasurementDump {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  double lambda = 0.0;
  double gamma = 0.0;  // 0 = solver default
  std::uint64_t seed = 0;
  std::vector<Eigen::VectorXd> windows;
};

void write_measurements(const std::filesystem::path& path,
                        const MeasurementDump& dump);
MeasurementDump read_measurements(const std::filesystem::path& path);

}  // namespace rcslasso
