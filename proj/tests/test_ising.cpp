#include <gtest/gtest.h>

#include <numbers>

#include "nmsim/errors.hpp"
#include "nmsim/gates.hpp"
#include "nmsim/ising.hpp"
#include "support.hpp"

using namespace nmsim;
using namespace nmsim::ising;
using std::numbers::pi;

namespace {

IsingParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  IsingParams p;
  p.eps_S_x = u(rng);
  p.eps_S_y = u(rng);
  p.eps_S_z = u(rng);
  p.J = u(rng);
  p.eps_E_x = u(rng);
  return p;
}

double trotter_error(const IsingGenerators& g, double t, int m) {
  const Matrix exact = expm_hermitian(g.h_system + g.h_environment + g.h_coupling, t);
  return max_abs_diff(trotterized_total_propagator(g.h_system, g.h_environment, g.h_coupling, t, m), exact);
}

}  // namespace

TEST(BlockHamiltonians, Examples) {
  const auto [z0, z1] = block_hamiltonians(IsingParams{});
  EXPECT_EQ(z0, Matrix(2, 2));
  EXPECT_EQ(z1, Matrix(2, 2));
  IsingParams p;
  p.eps_S_z = p.J = 0.8;
  const auto [h0, h1] = block_hamiltonians(p);
  EXPECT_LT(max_abs_diff(h0, 1.6 * pauli::Z()), 1e-15);
  EXPECT_LT(h1.max_abs(), 1e-15);
}

TEST(BlockHamiltonians, DifferenceIsCoupling) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 50; ++i) {
    const IsingParams p = random_params(rng);
    const auto [h0, h1] = block_hamiltonians(p);
    EXPECT_LT(max_abs_diff(h0 - h1, (2.0 * p.J) * pauli::Z()), 1e-14);
    EXPECT_TRUE(h0.is_hermitian(0.0));
  }
}

TEST(BlockFrequency, SquareDifferenceIdentity) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 50; ++i) {
    IsingParams p = random_params(rng);
    p.eps_S_x = 0.0;
    const double n0 = block_frequency(p, 0), n1 = block_frequency(p, 1);
    EXPECT_NEAR(n0 * n0 - n1 * n1, 4.0 * p.J * p.eps_S_z, 1e-12);
  }
}

TEST(BlockPropagators, ClosedFormMatchesExpm) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> time(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const IsingParams p = random_params(rng);
    const double t = time(rng);
    const auto [h0, h1] = block_hamiltonians(p);
    const auto [u0, u1] = block_propagators(p, t);
    EXPECT_LT(max_abs_diff(u0, expm_hermitian(h0, t)), 1e-10);
    EXPECT_LT(max_abs_diff(u1, expm_hermitian(h1, t)), 1e-10);
  }
  const auto [i0, i1] = block_propagators(random_params(rng), 0.0);
  EXPECT_EQ(i0, pauli::I());
  EXPECT_EQ(i1, pauli::I());
}

TEST(BlockPropagators, PureYRotationBlock) {
  IsingParams p;
  p.eps_S_z = p.J = 1.1;
  const double phi = 0.9, t = 1.7;
  p.eps_S_y = phi / t;
  EXPECT_LT(max_abs_diff(block_propagators(p, t).second, gates::rotation(phi)), 1e-14);
}

TEST(SolveRotationParams, QuarterPiClosedForm) {
  const IsingParams p = solve_rotation_params(pi / 4, 1, 1.0);
  EXPECT_NEAR(p.J, pi / 8 * std::sqrt(15.0), 1e-14);
  EXPECT_NEAR(p.J, 1.5209170034901045, 1e-14);
  EXPECT_EQ(p.eps_S_x, 0.0);
  EXPECT_EQ(p.eps_S_z, p.J);
  EXPECT_NEAR(p.eps_S_y, pi / 4, 1e-15);
  EXPECT_NEAR(p.eps_E_x, 10.0 * p.J, 1e-13);
}

TEST(SolveRotationParams, ZeroRotationLimit) {
  const IsingParams p = solve_rotation_params(1e-9, 1, 1.0);
  EXPECT_NEAR(p.J, pi / 2, 1e-12);
  const CompiledGate g = compile_controlled_rotation(0.0, 1, 1.0);
  EXPECT_LT(distance_up_to_phase(g.u1, pauli::I()), 1e-12);
}

TEST(SolveRotationParams, RejectsUnreachableTargets) {
  EXPECT_THROW(solve_rotation_params(pi, 1, 1.0), NoSolution);
  EXPECT_THROW(solve_rotation_params(4.0, 1, 1.0), NoSolution);
  EXPECT_THROW(solve_rotation_params(-0.1, 1, 1.0), NoSolution);
  EXPECT_NO_THROW(solve_rotation_params(4.0, 2, 1.0));
  EXPECT_THROW(solve_rotation_params(0.5, 0, 1.0), ContractViolation);
  EXPECT_THROW(solve_rotation_params(0.5, 1, 0.0), ContractViolation);
}

TEST(CompileControlledRotation, GridResiduals) {
  for (double phi : {pi / 8, pi / 4, pi / 2})
    for (int n : {1, 2, 3})
      for (double tau : {0.5, 1.0, 2.0}) {
        const CompiledGate g = compile_controlled_rotation(phi, n, tau);
        EXPECT_LE(g.residual_u0, 1e-9) << phi << " " << n << " " << tau;
        EXPECT_LE(g.residual_u1, 1e-9) << phi << " " << n << " " << tau;
        EXPECT_LE(distance_up_to_phase(g.u0, pauli::I()), 1e-9);
        EXPECT_LE(distance_up_to_phase(g.u1, gates::rotation(phi)), 1e-9);
        // U0 = (-1)^n I exactly at resonance.
        EXPECT_LT(max_abs_diff(g.u0, (n % 2 ? -1.0 : 1.0) * pauli::I()), 1e-9);
      }
}

TEST(CompileControlledRotation, RandomRoundTrip) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(u(rng) * 4);
    const double phi = u(rng) * n * pi * 0.999;
    const double tau = 0.1 + 3.0 * u(rng);
    const CompiledGate g = compile_controlled_rotation(phi, n, tau);
    EXPECT_LE(g.blockwise_residual, 1e-9);
  }
}

TEST(CompileControlledRotation, RelativeBlockPhaseIsSurfaced) {
  const CompiledGate odd = compile_controlled_rotation(pi / 4, 1, 1.0);
  EXPECT_NEAR(std::abs(odd.relative_block_phase), pi, 1e-9);
  EXPECT_NEAR(odd.global_residual, 2.0, 1e-9);
  const CompiledGate even = compile_controlled_rotation(pi / 4, 2, 1.0);
  EXPECT_NEAR(even.relative_block_phase, 0.0, 1e-9);
  EXPECT_LE(even.global_residual, 1e-9);
}

TEST(ConditionalGate, BlockStructure) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 20; ++i) {
    const IsingParams p = random_params(rng);
    const Matrix g = conditional_gate_from_ising(p, 0.7);
    EXPECT_TRUE(g.is_unitary(1e-12));
    for (std::size_t s = 0; s < 2; ++s)
      for (std::size_t t = 0; t < 2; ++t) {
        EXPECT_EQ(g(2 * s + 0, 2 * t + 1), cplx{});
        EXPECT_EQ(g(2 * s + 1, 2 * t + 0), cplx{});
      }
  }
  EXPECT_LT(max_abs_diff(conditional_gate_from_ising(random_params(rng), 0.0), Matrix::identity(4)), 1e-15);
  EXPECT_LT(max_abs_diff(conditional_gate_from_ising(IsingParams{}, 3.0), Matrix::identity(4)), 1e-15);
}

TEST(ConditionalGate, SolverOutputIsControlledRotation) {
  const IsingParams p = solve_rotation_params(pi / 4, 2, 1.0);
  EXPECT_LE(distance_up_to_phase(conditional_gate_from_ising(p, 1.0), gates::controlled_rotation(pi / 4)), 1e-9);
}

TEST(Generators, FullHamiltonianBlocks) {
  // With the environment field switched off, the full two-qubit evolution is the conditional gate.
  IsingParams p = solve_rotation_params(pi / 4, 1, 1.0);
  p.eps_E_x = 0.0;
  const IsingGenerators g = generators(p);
  EXPECT_LT(max_abs_diff(expm_hermitian(g.h_system + g.h_environment + g.h_coupling, 1.0),
                         conditional_gate_from_ising(p, 1.0)),
            1e-10);
}

TEST(Trotter, CommutingTermsAreExact) {
  IsingParams p;
  p.eps_S_z = 0.7;
  p.eps_E_z = -0.3;
  p.J = 1.1;
  const IsingGenerators g = generators(p);
  for (int m : {1, 3, 8}) EXPECT_LT(trotter_error(g, 2.0, m), 1e-12);
}

TEST(Trotter, FirstOrderConvergence) {
  const IsingGenerators g = generators(solve_rotation_params(pi / 4, 1, 1.0));
  const double t = 0.1;
  double prev = trotter_error(g, t, 1);
  EXPECT_GT(prev, 1e-6);
  for (int m = 2; m <= 16; m *= 2) {
    const double e = trotter_error(g, t, m);
    EXPECT_GE(prev / e, 1.8) << "m=" << m;
    EXPECT_LE(prev / e, 2.2) << "m=" << m;
    prev = e;
  }
}

TEST(Trotter, ErrorDecreasesAtFullGateTime) {
  const IsingGenerators g = generators(solve_rotation_params(pi / 4, 1, 1.0));
  double prev = trotter_error(g, 1.0, 1);
  for (int m = 2; m <= 64; m *= 2) {
    const double e = trotter_error(g, 1.0, m);
    EXPECT_LT(e, prev) << "m=" << m;
    prev = e;
  }
  EXPECT_THROW(trotterized_total_propagator(g.h_system, g.h_environment, g.h_coupling, 1.0, 0), ContractViolation);
}
