#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tpctf/inpaint.hpp"

namespace tpctf {

enum class Algorithm { tpctf6, spline, dct };

const char* algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct ExperimentSpec {
  std::string image_path;             // ignored when `image` is set
  std::optional<RealGrid> image;
  std::string image_name;             // report label; defaults to image_path
  std::string mask_path;              // empty: random mask
  double mask_rate = 0.5;
  std::uint64_t mask_seed = 1;
  double sigma = 0.0;
  std::uint64_t seed = 1;             // noise seed
  Algorithm algorithm = Algorithm::tpctf6;
  int levels = 0;
  bool paste_observed = false;
  int max_iterations = 2000;
  std::string output_path;            // restored image, optional
  std::string observed_path;          // degraded input, optional
};

struct ExperimentReport {
  double psnr = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  bool hit_iteration_cap = false;
  RealGrid restored;
  std::string image;
  std::string mask;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string algorithm;

  // image, mask, sigma, seed, algorithm, PSNR, iterations, seconds (tab separated).
  std::string line() const;
  // Same fields without the wall time, for reproducibility checks.
  std::string deterministic_line() const;
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace tpctf
