#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hts/dataset.hpp"
#include "hts/graph.hpp"

namespace hts {

enum class Mechanism { linear, quadratic };
enum class Noise { gaussian, laplace, uniform };

/// Structural causal model settings. Noise families are drawn with unit
/// variance and then multiplied by noise_scale.
struct ScmConfig {
  Mechanism mechanism = Mechanism::linear;
  Noise noise = Noise::uniform;
  double noise_scale = 1.0;
  double coeff_low = 0.5;
  double coeff_high = 1.5;
  bool standardize = true;
  std::uint64_t seed = 0;

  /// Throws ParameterError when a field is out of range.
  void validate() const;
};

/// Everything drawn while simulating: the observations, the exogenous noise
/// (pre-standardization), and the linear weights (weights(p, c) for edge p -> c).
struct Simulation {
  Dataset data;
  Eigen::MatrixXd noise;
  Eigen::MatrixXd weights;
  std::vector<std::string> warnings;
};

Simulation simulate(const Dag& g, int n, const ScmConfig& cfg);

/// x_c = sum_p b_pc x_p + e_c with |b| in [coeff_low, coeff_high] and random sign.
Dataset sample_linear(const Dag& g, int n, const ScmConfig& cfg);

/// x_c = sum_p c_p x_p^2 + sum_{p<q} c_pq x_p x_q + e_c, each column standardized
/// right after it is generated.
Dataset sample_quadratic(const Dag& g, int n, const ScmConfig& cfg);

std::string to_string(Mechanism m);
std::string to_string(Noise n);
Mechanism parse_mechanism(const std::string& s);
Noise parse_noise(const std::string& s);

}  // namespace hts
