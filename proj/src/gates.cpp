#include "nmsim/gates.hpp"

#include <cmath>

#include "nmsim/errors.hpp"

namespace nmsim::gates {

namespace {

Matrix env_projector(std::size_t e) {
  Matrix p(2, 2);
  p(e, e) = 1.0;
  return p;
}

void require_reflectivity(double r, const char* what) {
  if (!(r > 0.0 && r < 1.0))
    throw ContractViolation(std::string(what) + ": reflectivity must lie in (0, 1)");
}

}  // namespace

Matrix env_beam_splitter(double phi) {
  if (!std::isfinite(phi)) throw ContractViolation("env_beam_splitter: non-finite phase");
  const double s = 1.0 / std::sqrt(2.0);
  const cplx e = std::polar(1.0, phi);
  return Matrix{{s, s}, {s * e, -s * e}};
}

Matrix env_beam_splitter_unbalanced(double t_amp, double r_amp, double phi) {
  if (!(t_amp >= 0.0 && r_amp >= 0.0) || std::abs(t_amp * t_amp + r_amp * r_amp - 1.0) > 1e-12)
    throw ContractViolation("env_beam_splitter_unbalanced: amplitudes must satisfy t^2 + r^2 = 1");
  if (!std::isfinite(phi)) throw ContractViolation("env_beam_splitter_unbalanced: non-finite phase");
  const cplx e = std::polar(1.0, phi);
  return Matrix{{t_amp, r_amp}, {r_amp * e, -t_amp * e}};
}

Matrix rotation(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return Matrix{{c, -s}, {s, c}};
}

Matrix controlled_on_env(const Matrix& block_r, const Matrix& block_l) {
  if (block_r.rows() != 2 || block_r.cols() != 2 || block_l.rows() != 2 || block_l.cols() != 2)
    throw ContractViolation("controlled_on_env: blocks must be 2x2");
  return tensor(block_r, env_projector(0)) + tensor(block_l, env_projector(1));
}

Matrix controlled_rotation(double phi) { return controlled_on_env(pauli::I(), rotation(phi)); }

Matrix ch_anticz() { return controlled_on_env(pauli::Z(), pauli::H()); }

Matrix on_system(const Matrix& u) { return tensor(u, pauli::I()); }
Matrix on_environment(const Matrix& u) { return tensor(pauli::I(), u); }

Matrix env_splitter_on_se(double phi, const SplitterModel& model) {
  if (std::holds_alternative<BalancedSplitter>(model)) return on_environment(env_beam_splitter(phi));

  const auto& pd = std::get<PolarizationDependentSplitter>(model);
  require_reflectivity(pd.reflect_h, "splitter (H)");
  require_reflectivity(pd.reflect_v, "splitter (V)");
  const Matrix bs_h =
      env_beam_splitter_unbalanced(std::sqrt(1.0 - pd.reflect_h), std::sqrt(pd.reflect_h), phi);
  const Matrix bs_v = env_beam_splitter_unbalanced(std::sqrt(1.0 - pd.reflect_v),
                                                   std::sqrt(pd.reflect_v), phi + pd.v_phase_offset);
  // S is the more significant qubit, so the S-conditioned operator is block diagonal.
  return tensor(env_projector(0), bs_h) + tensor(env_projector(1), bs_v);
}

Matrix step_unitary_se(double phi, const SplitterModel& model) {
  return ch_anticz() * env_splitter_on_se(phi, model);
}

Matrix step_unitary(double phi, const SplitterModel& model) {
  return tensor(pauli::I(), step_unitary_se(phi, model));
}

}  // namespace nmsim::gates
