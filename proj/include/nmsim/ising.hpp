// ising.hpp
// Compiles a controlled rotation of S from a two-qubit transverse Ising Hamiltonian
//
//   H = eps_E_x sx^E + eps_E_z sz^E + sum_p eps_S_p sp^S + J sz^E sz^S
//
// and checks the result. Frequencies use the plain Rabi convention (hbar = 1):
// U_k(t) = exp(-i H_k t) with nu_k = |(eps_S_x, eps_S_y, eps_S_z + (-1)^k J)|. The
// alternative convention that carries an extra 2*pi in nu_k is the same model with
// every energy divided by 2*pi; see to_cycle_units().

#pragma once

#include <utility>

#include "nmsim/qstate.hpp"

namespace nmsim::ising {

struct IsingParams {
  double eps_E_x = 0.0;
  double eps_E_z = 0.0;
  double eps_S_x = 0.0;
  double eps_S_y = 0.0;
  double eps_S_z = 0.0;
  double J = 0.0;
  double tau = 1.0;
};

// H0 acts on S when E = |r>, H1 when E = |l>. The eps_E_z shifts are dropped.
std::pair<Matrix, Matrix> block_hamiltonians(const IsingParams& p);

// Closed-form Rabi propagators for both blocks at time t.
std::pair<Matrix, Matrix> block_propagators(const IsingParams& p, double t);

// Rabi frequency of block k (0 or 1).
double block_frequency(const IsingParams& p, int k);

// Parameters for U0 = +-I and U1 = R(phi) at t = tau on resonance n:
//   eps_S_x = 0, eps_S_z = J, eps_S_y = phi / tau, J = sqrt((n pi)^2 - phi^2) / (2 tau).
// eps_E_x is set to 10 J so the environment is effectively frozen.
// Throws NoSolution unless 0 <= phi < n pi; ContractViolation for n < 1 or tau <= 0.
IsingParams solve_rotation_params(double phi, int n, double tau);

// The same parameters expressed in cycles: energies divided by 2 pi, tau unchanged.
IsingParams to_cycle_units(const IsingParams& p);

// |r><r| (x) U0 + |l><l| (x) U1 on the S-E pair (S-major index, see gates.hpp).
Matrix conditional_gate_from_ising(const IsingParams& p, double t);

struct CompiledGate {
  IsingParams params;
  int n = 1;
  double phi = 0.0;
  Matrix u0, u1;
  Matrix conditional;
  double residual_u0 = 0.0;  // distance_up_to_phase(u0, I)
  double residual_u1 = 0.0;  // distance_up_to_phase(u1, R(phi))
  // Distance to controlled_rotation(phi) after removing one phase per E block.
  double blockwise_residual = 0.0;
  // Distance to controlled_rotation(phi) allowing only one overall phase.
  double global_residual = 0.0;
  // arg(phase of block l / phase of block r), wrapped to (-pi, pi].
  double relative_block_phase = 0.0;
};

CompiledGate compile_controlled_rotation(double phi, int n, double tau);

// Full S-E generators of the Ising model, S-major order.
struct IsingGenerators {
  Matrix h_system;       // sum_p eps_S_p sp^S
  Matrix h_environment;  // eps_E_x sx^E + eps_E_z sz^E
  Matrix h_coupling;     // J sz^E sz^S
};
IsingGenerators generators(const IsingParams& p);

// [exp(-i hS t/m) exp(-i hE t/m) exp(-i hSE t/m)]^m
Matrix trotterized_total_propagator(const Matrix& h_system, const Matrix& h_environment,
                                    const Matrix& h_coupling, double t, int slices);

}  // namespace nmsim::ising
