#include "hts/synth.hpp"

#include <cmath>
#include <iostream>
#include <random>

#include "hts/error.hpp"

namespace hts {

void ScmConfig::validate() const {
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) throw ParameterError("noise_scale must be >= 0");
  if (!(coeff_low > 0.0) || !(coeff_low <= coeff_high) || !std::isfinite(coeff_high)) {
    throw ParameterError("coefficient range must satisfy 0 < coeff_low <= coeff_high");
  }
}

namespace {

double draw_noise(Noise kind, std::mt19937_64& rng) {
  switch (kind) {
    case Noise::gaussian:
      return std::normal_distribution<double>(0.0, 1.0)(rng);
    case Noise::laplace: {
      // Laplace(0, 1/sqrt(2)) has unit variance; difference of two exponentials.
      std::exponential_distribution<double> expo(std::sqrt(2.0));
      return expo(rng) - expo(rng);
    }
    case Noise::uniform:
      return std::uniform_real_distribution<double>(-std::sqrt(3.0), std::sqrt(3.0))(rng);
  }
  return 0.0;
}

double draw_coefficient(const ScmConfig& cfg, std::mt19937_64& rng) {
  const double magnitude = std::uniform_real_distribution<double>(cfg.coeff_low, cfg.coeff_high)(rng);
  return std::bernoulli_distribution(0.5)(rng) ? magnitude : -magnitude;
}

std::vector<Vertex> generation_order(const Dag& g) {
  std::vector<Vertex> order;
  const auto layered = true_hierarchical_order(g);
  for (const auto& layer : layered.layers()) order.insert(order.end(), layer.begin(), layer.end());
  return order;
}

}  // namespace

Simulation simulate(const Dag& g, int n, const ScmConfig& cfg) {
  cfg.validate();
  if (n < 2) throw ParameterError("sample count must be >= 2");
  const int d = g.size();
  Simulation sim;
  if (cfg.mechanism == Mechanism::linear && cfg.noise == Noise::gaussian) {
    sim.warnings.emplace_back("linear mechanisms with Gaussian noise are not identifiable");
  }

  std::mt19937_64 rng(cfg.seed);
  const auto order = generation_order(g);

  // Coefficients first, in generation order, so the noise stream is independent of graph density.
  sim.weights = Eigen::MatrixXd::Zero(d, d);
  std::vector<Eigen::MatrixXd> interactions(static_cast<std::size_t>(d));
  for (Vertex c : order) {
    const auto parents = g.parents(c);
    for (Vertex p : parents) sim.weights(p, c) = draw_coefficient(cfg, rng);
    if (cfg.mechanism == Mechanism::quadratic) {
      auto& inter = interactions[static_cast<std::size_t>(c)];
      inter = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(parents.size()), static_cast<Eigen::Index>(parents.size()));
      for (std::size_t a = 0; a < parents.size(); ++a)
        for (std::size_t b = a + 1; b < parents.size(); ++b)
          inter(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = draw_coefficient(cfg, rng);
    }
  }

  sim.noise.resize(n, d);
  for (Vertex v : order)
    for (int r = 0; r < n; ++r) sim.noise(r, v) = cfg.noise_scale * draw_noise(cfg.noise, rng);

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, d);
  for (Vertex c : order) {
    const auto parents = g.parents(c);
    Eigen::VectorXd col = sim.noise.col(c);
    if (cfg.mechanism == Mechanism::linear) {
      for (Vertex p : parents) col += sim.weights(p, c) * x.col(p);
    } else {
      const auto& inter = interactions[static_cast<std::size_t>(c)];
      for (std::size_t a = 0; a < parents.size(); ++a) {
        const auto pa = x.col(parents[a]).array();
        col.array() += sim.weights(parents[a], c) * pa.square();
        for (std::size_t b = a + 1; b < parents.size(); ++b)
          col.array() += inter(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) * pa * x.col(parents[b]).array();
      }
      standardize_column(col);
    }
    x.col(c) = col;
  }

  Dataset data(std::move(x));
  sim.data = cfg.standardize ? standardize(data) : std::move(data);
  return sim;
}

namespace {

Dataset sample_with(const Dag& g, int n, const ScmConfig& cfg, Mechanism expected) {
  if (cfg.mechanism != expected) throw ParameterError("ScmConfig mechanism does not match the sampler");
  auto sim = simulate(g, n, cfg);
  for (const auto& w : sim.warnings) std::clog << "warning: " << w << '\n';
  return std::move(sim.data);
}

}  // namespace

Dataset sample_linear(const Dag& g, int n, const ScmConfig& cfg) { return sample_with(g, n, cfg, Mechanism::linear); }

Dataset sample_quadratic(const Dag& g, int n, const ScmConfig& cfg) {
  return sample_with(g, n, cfg, Mechanism::quadratic);
}

std::string to_string(Mechanism m) { return m == Mechanism::linear ? "linear" : "quadratic"; }

std::string to_string(Noise n) {
  switch (n) {
    case Noise::gaussian:
      return "gaussian";
    case Noise::laplace:
      return "laplace";
    case Noise::uniform:
      return "uniform";
  }
  return "uniform";
}

Mechanism parse_mechanism(const std::string& s) {
  if (s == "linear") return Mechanism::linear;
  if (s == "quadratic") return Mechanism::quadratic;
  throw ParameterError("unknown mechanism '" + s + "' (expected linear|quadratic)");
}

Noise parse_noise(const std::string& s) {
  if (s == "gaussian") return Noise::gaussian;
  if (s == "laplace") return Noise::laplace;
  if (s == "uniform") return Noise::uniform;
  throw ParameterError("unknown noise '" + s + "' (expected gaussian|laplace|uniform)");
}

}  // namespace hts
