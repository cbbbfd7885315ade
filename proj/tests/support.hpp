#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "otdp/matrix.hpp"
#include "otdp/preprocess.hpp"
#include "otdp/random.hpp"

namespace testing {

inline std::filesystem::path fresh_dir(std::string_view tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("otdp-test-" + std::string(tag));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Box-Muller on the portable generator, so fixtures are identical everywhere.
inline double normal(otdp::SeededRng& rng) {
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// n points, first half benign; malicious rows are shifted by `shift` in every feature.
inline otdp::Matrix blobs(std::size_t n, std::size_t m, double shift, std::uint64_t seed, otdp::Labels& y) {
  otdp::SeededRng rng(seed);
  otdp::Matrix X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  y.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i >= n / 2 ? 1 : 0;
    for (std::size_t j = 0; j < m; ++j) {
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = normal(rng) + (y[i] ? shift : 0.0);
    }
  }
  return X;
}

inline std::size_t count_lines(std::string_view text) {
  std::size_t n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace testing
