#include "nmsim/ising.hpp"

#include <cmath>
#include <tuple>
#include <numbers>

#include "nmsim/errors.hpp"
#include "nmsim/gates.hpp"

namespace nmsim::ising {

namespace {

Matrix field(double x, double y, double z) {
  return cplx{x} * pauli::X() + cplx{y} * pauli::Y() + cplx{z} * pauli::Z();
}

Matrix rabi_propagator(double x, double y, double z, double t) {
  const double nu = std::sqrt(x * x + y * y + z * z);
  if (nu == 0.0) return Matrix::identity(2);
  const double c = std::cos(nu * t), s = std::sin(nu * t) / nu;
  return Matrix{{cplx{c, -z * s}, cplx{-y * s, -x * s}}, {cplx{y * s, -x * s}, cplx{c, z * s}}};
}

// Phase e^{i theta} that best aligns v with u.
cplx aligning_phase(const Matrix& u, const Matrix& v) {
  const cplx overlap = (v.adjoint() * u).trace();
  return std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
}

}  // namespace

std::pair<Matrix, Matrix> block_hamiltonians(const IsingParams& p) {
  return {field(p.eps_S_x, p.eps_S_y, p.eps_S_z + p.J), field(p.eps_S_x, p.eps_S_y, p.eps_S_z - p.J)};
}

double block_frequency(const IsingParams& p, int k) {
  const double z = p.eps_S_z + (k == 0 ? p.J : -p.J);
  return std::sqrt(p.eps_S_x * p.eps_S_x + p.eps_S_y * p.eps_S_y + z * z);
}

std::pair<Matrix, Matrix> block_propagators(const IsingParams& p, double t) {
  return {rabi_propagator(p.eps_S_x, p.eps_S_y, p.eps_S_z + p.J, t),
          rabi_propagator(p.eps_S_x, p.eps_S_y, p.eps_S_z - p.J, t)};
}

IsingParams solve_rotation_params(double phi, int n, double tau) {
  if (n < 1) throw ContractViolation("solve_rotation_params: resonance index n must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw ContractViolation("solve_rotation_params: tau must be positive");
  const double n_pi = n * std::numbers::pi;
  if (!std::isfinite(phi) || phi < 0.0 || phi >= n_pi)
    throw NoSolution("solve_rotation_params: need 0 <= phi < n*pi for a real coupling J");

  IsingParams p;
  p.tau = tau;
  p.J = std::sqrt(n_pi * n_pi - phi * phi) / (2.0 * tau);
  p.eps_S_x = 0.0;
  p.eps_S_z = p.J;
  p.eps_S_y = phi / tau;
  p.eps_E_x = 10.0 * p.J;
  p.eps_E_z = 0.0;
  return p;
}

IsingParams to_cycle_units(const IsingParams& p) {
  const double k = 1.0 / (2.0 * std::numbers::pi);
  IsingParams q = p;
  q.eps_E_x *= k;
  q.eps_E_z *= k;
  q.eps_S_x *= k;
  q.eps_S_y *= k;
  q.eps_S_z *= k;
  q.J *= k;
  return q;
}

Matrix conditional_gate_from_ising(const IsingParams& p, double t) {
  auto [u0, u1] = block_propagators(p, t);
  return gates::controlled_on_env(u0, u1);
}

CompiledGate compile_controlled_rotation(double phi, int n, double tau) {
  CompiledGate g;
  g.params = solve_rotation_params(phi, n, tau);
  g.n = n;
  g.phi = phi;
  std::tie(g.u0, g.u1) = block_propagators(g.params, tau);
  g.conditional = gates::controlled_on_env(g.u0, g.u1);

  const Matrix target_u1 = gates::rotation(phi);
  g.residual_u0 = distance_up_to_phase(g.u0, Matrix::identity(2));
  g.residual_u1 = distance_up_to_phase(g.u1, target_u1);

  const cplx ph0 = aligning_phase(g.u0, Matrix::identity(2));
  const cplx ph1 = aligning_phase(g.u1, target_u1);
  const Matrix corrected = gates::controlled_on_env(ph0 * Matrix::identity(2), ph1 * target_u1);
  g.blockwise_residual = (g.conditional - corrected).max_abs();
  g.global_residual = distance_up_to_phase(g.conditional, gates::controlled_rotation(phi));
  g.relative_block_phase = std::arg(ph1 / ph0);
  return g;
}

IsingGenerators generators(const IsingParams& p) {
  IsingGenerators g;
  g.h_system = gates::on_system(field(p.eps_S_x, p.eps_S_y, p.eps_S_z));
  g.h_environment = gates::on_environment(cplx{p.eps_E_x} * pauli::X() + cplx{p.eps_E_z} * pauli::Z());
  g.h_coupling = cplx{p.J} * tensor(pauli::Z(), pauli::Z());
  return g;
}

Matrix trotterized_total_propagator(const Matrix& h_system, const Matrix& h_environment,
                                    const Matrix& h_coupling, double t, int slices) {
  if (slices < 1) throw ContractViolation("trotterized_total_propagator: slices must be >= 1");
  const double dt = t / slices;
  const Matrix slice =
      expm_hermitian(h_system, dt) * expm_hermitian(h_environment, dt) * expm_hermitian(h_coupling, dt);
  Matrix u = Matrix::identity(slice.rows());
  for (int k = 0; k < slices; ++k) u = slice * u;
  return u;
}

}  // namespace nmsim::ising
