#include "fhhg/direct_oracle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fhhg/errors.hpp"
#include "fhhg/parallel.hpp"

namespace fhhg {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

struct Derivative {
  cplx d;
  std::vector<cplx> k;
};

// -i H(t) psi in the single-excitation sector.
void apply_rhs(const DiscretizedSystem& system, double t, const cplx& psi_d,
               const std::vector<cplx>& psi_k, Derivative& out) {
  const ModelParams& p = system.params;
  const std::size_t count = psi_k.size();
  cplx exchange{0.0, 0.0};
  for (std::size_t j = 0; j < count; ++j) exchange += system.coupling[j] * psi_k[j];
  const double level = p.epsilon_d + p.A * std::sin(p.omega * t);
  out.d = cplx(0.0, -1.0) * (level * psi_d + p.lambda * exchange);
  const cplx source = p.lambda * psi_d;
  for (std::size_t j = 0; j < count; ++j) {
    out.k[j] = cplx(0.0, -1.0) * (system.energy[j] * psi_k[j] + system.coupling[j] * source);
  }
}

}  // namespace

DiscretizedSystem discretize(const ModelParams& params, double box_length, int mode_count) {
  if (!(box_length > 0.0) || !std::isfinite(box_length)) {
    throw DomainError("oracle box_length must be positive");
  }
  if (mode_count < 64) throw DomainError("oracle mode_count must be at least 64");
  if (mode_count % 2 != 0) throw DomainError("oracle mode_count must be even");

  DiscretizedSystem system;
  system.params = params;
  system.box_length = box_length;
  system.mode_count = mode_count;
  system.dk = 2.0 * kPi / box_length;
  if (system.dk * (mode_count / 2) < params.k_c) {
    throw DomainError("oracle mode_count too small to cover (-k_c, k_c)");
  }
  for (int j = -mode_count / 2; j <= mode_count / 2; ++j) {
    if (j == 0) continue;
    const double k = system.dk * j;
    if (std::abs(k) > params.k_c * (1.0 + 1e-12)) continue;  // j dk can land one ulp past k_c
    system.k.push_back(k);
    system.energy.push_back(std::abs(k));
    system.coupling.push_back(std::sqrt(4.0 * kPi * std::abs(k) / box_length));
  }
  return system;
}

double SectorState::photon_weight() const {
  double sum = 0.0;
  for (const auto& a : psi_k) sum += std::norm(a);
  return sum;
}

double SectorState::norm() const { return std::norm(psi_d) + photon_weight(); }

SectorState excited_state(const DiscretizedSystem& system) {
  SectorState state;
  state.psi_d = 1.0;
  state.psi_k.assign(system.retained(), cplx{});
  return state;
}

Trajectory evolve(const DiscretizedSystem& system, SectorState initial,
                  const EvolveOptions& options) {
  if (!(options.dt > 0.0)) throw DomainError("oracle dt must be positive");
  if (!(options.t_end >= 0.0)) throw DomainError("oracle t_end must be non-negative");
  if (options.stride < 1) throw DomainError("oracle stride must be positive");
  if (initial.psi_k.size() != system.retained()) {
    throw DomainError("initial state does not match the discretized system");
  }

  const long steps = std::lround(options.t_end / options.dt);
  std::vector<long> snapshot_steps;
  for (double ts : options.snapshot_times) {
    const double ratio = ts / options.dt;
    const long s = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(s)) > 1e-6 || s < 0 || s > steps) {
      throw DomainError("snapshot time " + std::to_string(ts) +
                        " is not a multiple of dt inside [0, t_end]");
    }
    snapshot_steps.push_back(s);
  }

  Trajectory out;
  out.snapshots.resize(snapshot_steps.size());
  const double dt = options.dt;
  const double t0 = initial.t;
  const double norm0 = initial.norm();
  SectorState state = std::move(initial);
  const std::size_t count = state.psi_k.size();

  Derivative k1{{}, std::vector<cplx>(count)}, k2 = k1, k3 = k1, k4 = k1;
  std::vector<cplx> stage(count);

  const auto record = [&](long step) {
    if (step % options.stride == 0 || step == steps) {
      out.t.push_back(state.t);
      out.psi_d.push_back(state.psi_d);
      out.norm.push_back(state.norm());
    }
    for (std::size_t i = 0; i < snapshot_steps.size(); ++i) {
      if (snapshot_steps[i] == step) out.snapshots[i] = state;
    }
  };

  record(0);
  for (long step = 1; step <= steps; ++step) {
    const double t = t0 + (step - 1) * dt;
    apply_rhs(system, t, state.psi_d, state.psi_k, k1);

    for (std::size_t j = 0; j < count; ++j) stage[j] = state.psi_k[j] + 0.5 * dt * k1.k[j];
    apply_rhs(system, t + 0.5 * dt, state.psi_d + 0.5 * dt * k1.d, stage, k2);

    for (std::size_t j = 0; j < count; ++j) stage[j] = state.psi_k[j] + 0.5 * dt * k2.k[j];
    apply_rhs(system, t + 0.5 * dt, state.psi_d + 0.5 * dt * k2.d, stage, k3);

    for (std::size_t j = 0; j < count; ++j) stage[j] = state.psi_k[j] + dt * k3.k[j];
    apply_rhs(system, t + dt, state.psi_d + dt * k3.d, stage, k4);

    state.psi_d += dt / 6.0 * (k1.d + 2.0 * k2.d + 2.0 * k3.d + k4.d);
    for (std::size_t j = 0; j < count; ++j) {
      state.psi_k[j] += dt / 6.0 * (k1.k[j] + 2.0 * k2.k[j] + 2.0 * k3.k[j] + k4.k[j]);
    }
    state.t = t0 + step * dt;
    record(step);
  }

  for (double n : out.norm) out.max_norm_drift = std::max(out.max_norm_drift, std::abs(n - norm0));
  if (out.max_norm_drift > options.norm_tolerance) {
    throw ConvergenceError("oracle norm drift " + std::to_string(out.max_norm_drift) +
                           " exceeds tolerance; reduce dt");
  }
  out.final_state = std::move(state);
  return out;
}

Series survival_probability(const Trajectory& trajectory) {
  Series out;
  out.grid = trajectory.t;
  out.values.reserve(trajectory.psi_d.size());
  for (const auto& a : trajectory.psi_d) out.values.push_back(std::norm(a));
  return out;
}

PhotonSpectrum photon_spectrum(const DiscretizedSystem& system, const SectorState& state) {
  PhotonSpectrum out;
  out.spectrum.grid = system.k;
  out.spectrum.values.reserve(system.retained());
  const double density = system.box_length / (2.0 * kPi);
  for (const auto& a : state.psi_k) out.spectrum.values.push_back(std::norm(a) * density);
  out.remaining_excitation = std::norm(state.psi_d);
  out.premature = out.remaining_excitation >= 1e-3;
  return out;
}

std::vector<cplx> spatial_field(const DiscretizedSystem& system, const SectorState& state,
                                std::span<const double> x, int threads) {
  const double half = 0.5 * system.box_length;
  for (double xi : x) {
    if (!(std::abs(xi) < half)) throw DomainError("field point outside the box");
  }
  std::vector<cplx> out(x.size());
  const double scale = 1.0 / std::sqrt(system.box_length);
  parallel_for(x.size(), threads, [&](std::size_t i) {
    cplx sum{0.0, 0.0};
    for (std::size_t j = 0; j < system.retained(); ++j) {
      sum += std::exp(cplx(0.0, system.k[j] * x[i])) * state.psi_k[j];
    }
    out[i] = scale * sum;
  });
  return out;
}

}  // namespace fhhg
