#pragma once

#include <cstdint>
#include <vector>

#include "sqv/theory.hpp"

namespace sqv {

/// Counter-based normal stream: the variate for (step, site) is a pure
/// function of (seed, step, site), so trajectories are reproducible and
/// chains can be generated in parallel. Derivation: splitmix-style mixing
/// of seed, then step, then site; two mixed words feed a Box-Muller pair.
class NoiseStream {
public:
  explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}

  double normal(std::uint64_t step, std::uint64_t site) const;

  static std::uint64_t mix(std::uint64_t x);
  /// Seed for the k-th parallel chain of a base seed.
  static std::uint64_t chain_seed(std::uint64_t base, std::uint64_t chain);

private:
  std::uint64_t seed_;
};

struct SimConfig {
  double step = 1e-3;           ///< fictitious-time increment h
  std::int64_t burn_in = 0;     ///< steps discarded before recording
  std::int64_t samples = 1;     ///< recorded samples
  std::int64_t thin = 1;        ///< steps between recorded samples
  std::uint64_t seed = 0;
  Vector initial;               ///< empty = zero vector

  void check() const;
};

/// Gradient-descent drift -A phi - dV/dphi.
Vector drift(const Theory& theory, const Vector& phi);

/// Explicit Euler step sequence phi += h drift + sqrt(2h) eta, with eta a
/// unit normal per site (noise covariance 2 per unit time). Deterministic
/// in the seed. Throws Diverged when |phi|_inf exceeds 1e8.
class LangevinSimulator {
public:
  LangevinSimulator(const Theory& theory, const SimConfig& cfg);

  void step();
  const Vector& state() const { return phi_; }
  std::int64_t step_index() const { return step_index_; }

private:
  const Theory& theory_;
  SimConfig cfg_;
  NoiseStream noise_;
  Vector phi_;
  Vector drift_;  // scratch, avoids per-step allocation
  std::int64_t step_index_ = 0;
  double sqrt_2h_;
};

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double n_effective = 0.0;
};

/// Time-averaged estimates of the monomials (products of phi over the
/// listed site tuples), with blocking errors (32 blocks).
std::vector<MomentEstimate> equilibrium_moments(const Theory& theory, const SimConfig& cfg,
                                                const std::vector<std::vector<int>>& monomials);

/// Inverse-variance pooling of independent estimates of one quantity.
MomentEstimate pool_estimates(const std::vector<MomentEstimate>& parts);

/// `chains` independent trajectories with derived seeds, run on up to
/// `jobs` threads, pooled per monomial. Bit-reproducible for fixed
/// (theory, cfg, chains) regardless of jobs.
std::vector<MomentEstimate> equilibrium_moments_pooled(const Theory& theory, const SimConfig& cfg,
                                                       const std::vector<std::vector<int>>& monomials,
                                                       int chains, unsigned jobs = 1);

}  // namespace sqv
