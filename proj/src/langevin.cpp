#include "sqv/langevin.hpp"

#include <cmath>

#include "sqv/parallel.hpp"

namespace sqv {

std::uint64_t NoiseStream::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t NoiseStream::chain_seed(std::uint64_t base, std::uint64_t chain) {
  return mix(base ^ mix(0x5851f42d4c957f2dull + chain));
}

double NoiseStream::normal(std::uint64_t step, std::uint64_t site) const {
  std::uint64_t h = mix(seed_ ^ mix(step));
  h = mix(h ^ mix(site * 0xd1342543de82ef95ull + 1));
  std::uint64_t w1 = mix(h ^ 0x2545f4914f6cdd1dull);
  std::uint64_t w2 = mix(h ^ 0x9e3779b97f4a7c15ull);
  // uniforms in (0, 1]; w1 away from zero so the log is finite
  double u1 = (static_cast<double>(w1 >> 11) + 1.0) * 0x1.0p-53;
  double u2 = static_cast<double>(w2 >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void SimConfig::check() const {
  if (!(step > 0.0)) fail(ErrorCode::ConfigParse, "simulation step must be positive");
  if (samples < 1) fail(ErrorCode::ConfigParse, "need at least one sample");
  if (thin < 1) fail(ErrorCode::ConfigParse, "thin must be at least 1");
  if (burn_in < 0) fail(ErrorCode::ConfigParse, "negative burn-in");
}

namespace {

// out -= dV/dphi for one kernel
void subtract_interaction_gradient(const VertexKernel& kernel, const Vector& phi, Vector& out) {
  const int n = static_cast<int>(phi.size());
  if (kernel.kind == VertexKernel::Kind::Local) {
    const int q = kernel.arity - 1;
    for (int x = 0; x < n; ++x) {
      double pw = phi(x);
      for (int k = 1; k < q; ++k) pw *= phi(x);
      out(x) -= kernel.coupling * pw;
    }
    return;
  }
  // contract the first slot, remaining slots against phi
  std::vector<int> idx(kernel.arity, 0);
  while (true) {
    std::size_t flat = 0;
    for (int s : idx) flat = flat * n + s;
    double w = kernel.tensor[flat];
    if (w != 0.0) {
      double prod = 1.0;
      for (int s = 1; s < kernel.arity; ++s) prod *= phi(idx[s]);
      out(idx[0]) -= w * prod;
    }
    int k = kernel.arity - 1;
    for (; k >= 0; --k) {
      if (++idx[k] < n) break;
      idx[k] = 0;
    }
    if (k < 0) break;
  }
}

}  // namespace

Vector drift(const Theory& theory, const Vector& phi) {
  Vector d = -(theory.op.matrix() * phi);
  for (const auto& kernel : theory.kernels) subtract_interaction_gradient(kernel, phi, d);
  return d;
}

LangevinSimulator::LangevinSimulator(const Theory& theory, const SimConfig& cfg)
    : theory_(theory), cfg_(cfg), noise_(cfg.seed) {
  cfg_.check();
  theory.check();
  if (cfg_.initial.size() == 0)
    phi_ = Vector::Zero(theory.n_sites());
  else if (cfg_.initial.size() == theory.n_sites())
    phi_ = cfg_.initial;
  else
    fail(ErrorCode::ConfigParse, "initial state has wrong dimension");
  drift_ = Vector::Zero(theory.n_sites());
  sqrt_2h_ = std::sqrt(2.0 * cfg_.step);
}

void LangevinSimulator::step() {
  const int n = static_cast<int>(phi_.size());
  drift_.noalias() = -(theory_.op.matrix() * phi_);
  for (const auto& kernel : theory_.kernels) subtract_interaction_gradient(kernel, phi_, drift_);
  double max_abs = 0.0;
  for (int x = 0; x < n; ++x) {
    phi_(x) += cfg_.step * drift_(x) +
               sqrt_2h_ * noise_.normal(static_cast<std::uint64_t>(step_index_),
                                        static_cast<std::uint64_t>(x));
    max_abs = std::max(max_abs, std::abs(phi_(x)));
  }
  ++step_index_;
  if (max_abs > 1e8)
    fail(ErrorCode::Diverged, "trajectory left |phi| <= 1e8; reduce the step or check the theory");
}

namespace {

constexpr int kBlocks = 32;

MomentEstimate blocked_estimate(const std::vector<double>& series) {
  const std::int64_t n = static_cast<std::int64_t>(series.size());
  MomentEstimate est;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  est.value = mean;

  const std::int64_t block_len = n / kBlocks;
  if (block_len < 1) {
    est.std_error = 0.0;
    est.n_effective = static_cast<double>(n);
    return est;
  }
  double var_blocks = 0.0;
  for (int b = 0; b < kBlocks; ++b) {
    double bm = 0.0;
    for (std::int64_t i = b * block_len; i < (b + 1) * block_len; ++i) bm += series[i];
    bm /= static_cast<double>(block_len);
    var_blocks += (bm - mean) * (bm - mean);
  }
  var_blocks /= kBlocks - 1;
  est.std_error = std::sqrt(var_blocks / kBlocks);

  double var_naive = 0.0;
  for (double v : series) var_naive += (v - mean) * (v - mean);
  var_naive /= std::max<std::int64_t>(n - 1, 1);
  double var_mean = est.std_error * est.std_error;
  est.n_effective = var_mean > 0.0 ? std::min(var_naive / var_mean, static_cast<double>(n))
                                   : static_cast<double>(n);
  return est;
}

}  // namespace

std::vector<MomentEstimate> equilibrium_moments(const Theory& theory, const SimConfig& cfg,
                                                const std::vector<std::vector<int>>& monomials) {
  LangevinSimulator sim(theory, cfg);
  for (std::int64_t i = 0; i < cfg.burn_in; ++i) sim.step();

  std::vector<std::vector<double>> series(monomials.size());
  for (auto& s : series) s.reserve(cfg.samples);
  for (std::int64_t s = 0; s < cfg.samples; ++s) {
    for (std::int64_t k = 0; k < cfg.thin; ++k) sim.step();
    const Vector& phi = sim.state();
    for (std::size_t m = 0; m < monomials.size(); ++m) {
      double v = 1.0;
      for (int site : monomials[m]) v *= phi(site);
      series[m].push_back(v);
    }
  }

  std::vector<MomentEstimate> out;
  out.reserve(monomials.size());
  for (const auto& s : series) out.push_back(blocked_estimate(s));
  return out;
}

MomentEstimate pool_estimates(const std::vector<MomentEstimate>& parts) {
  MomentEstimate out;
  double wsum = 0.0;
  for (const auto& p : parts) {
    double w = p.std_error > 0.0 ? 1.0 / (p.std_error * p.std_error) : 1.0;
    out.value += w * p.value;
    out.n_effective += p.n_effective;
    wsum += w;
  }
  out.value /= wsum;
  out.std_error = std::sqrt(1.0 / wsum);
  return out;
}

std::vector<MomentEstimate> equilibrium_moments_pooled(const Theory& theory, const SimConfig& cfg,
                                                       const std::vector<std::vector<int>>& monomials,
                                                       int chains, unsigned jobs) {
  if (chains < 1) fail(ErrorCode::ConfigParse, "need at least one chain");
  std::vector<std::vector<MomentEstimate>> per_chain(chains);
  parallel_for(static_cast<std::size_t>(chains), jobs, [&](std::size_t c) {
    SimConfig chain_cfg = cfg;
    chain_cfg.seed = NoiseStream::chain_seed(cfg.seed, c);
    per_chain[c] = equilibrium_moments(theory, chain_cfg, monomials);
  });

  std::vector<MomentEstimate> out;
  for (std::size_t m = 0; m < monomials.size(); ++m) {
    std::vector<MomentEstimate> parts;
    for (int c = 0; c < chains; ++c) parts.push_back(per_chain[c][m]);
    out.push_back(pool_estimates(parts));
  }
  return out;
}

}  // namespace sqv
