#include <gtest/gtest.h>

#include <numbers>

#include "nmsim/errors.hpp"
#include "nmsim/qstate.hpp"
#include "support.hpp"

using namespace nmsim;
using enum Subsystem;

namespace {

// rho_{ase, a'e's'} summed by brute force over the traced indices.
Matrix naive_trace_out(const Matrix& rho, int drop) {
  Matrix out(4, 4);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const int bi = (i >> (2 - drop)) & 1, bj = (j >> (2 - drop)) & 1;
      if (bi != bj) continue;
      auto squeeze = [drop](int x) {
        int r = 0;
        for (int q = 0; q < 3; ++q)
          if (q != drop) r = 2 * r + ((x >> (2 - q)) & 1);
        return r;
      };
      out(squeeze(i), squeeze(j)) += rho(i, j);
    }
  return out;
}

}  // namespace

TEST(Matrix, TensorOfPaulis) {
  const Matrix zx = tensor(pauli::Z(), pauli::X());
  const Matrix expected{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, -1, 0}};
  EXPECT_EQ(zx, expected);
  EXPECT_EQ(tensor({pauli::I(), pauli::I(), pauli::I()}), Matrix::identity(8));
}

TEST(Matrix, TensorMixedProduct) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = gen::random_complex(rng, 2, 2), b = gen::random_complex(rng, 2, 2);
    const Matrix c = gen::random_complex(rng, 2, 2), d = gen::random_complex(rng, 2, 2);
    EXPECT_LT(max_abs_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)), 1e-12);
  }
}

TEST(Matrix, ShapeMismatchThrows) {
  EXPECT_THROW(Matrix(2, 2) * Matrix(3, 3), ContractViolation);
  EXPECT_THROW(Matrix(2, 2) + Matrix(2, 3), ContractViolation);
}

TEST(StateVector, RejectsBadInput) {
  EXPECT_THROW(StateVector({1.0, 1.0}), ContractViolation);
  EXPECT_THROW(StateVector({1.0, 0.0, 0.0}), ContractViolation);
  EXPECT_NO_THROW(StateVector::normalized({1.0, 1.0}));
}

TEST(StateVector, BellProjectors) {
  const Matrix p = states::phi_plus().projector();
  EXPECT_NEAR(p(0, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(p(0, 3).real(), 0.5, 1e-15);
  EXPECT_NEAR(p(1, 1).real(), 0.0, 1e-15);
  const Matrix sum = states::phi_plus().projector() + states::phi_minus().projector() +
                     states::psi_plus().projector() + states::psi_minus().projector();
  EXPECT_LT(max_abs_diff(sum, Matrix::identity(4)), 1e-15);
}

TEST(DensityMatrix, ValidatesOnConstruction) {
  EXPECT_THROW(DensityMatrix(Matrix::identity(2)), InvariantViolation);
  EXPECT_THROW(DensityMatrix(Matrix{{1.5, 0}, {0, -0.5}}), InvariantViolation);
  EXPECT_THROW(DensityMatrix(Matrix{{0.5, 0.1}, {0.2, 0.5}}), InvariantViolation);
  EXPECT_THROW(DensityMatrix(0.25 * Matrix::identity(4), {S, A}), ContractViolation);
  EXPECT_NO_THROW(DensityMatrix(0.5 * Matrix::identity(2), {E}));
}

TEST(DensityMatrix, DefaultLabels) {
  EXPECT_EQ(DensityMatrix(0.5 * Matrix::identity(2)).labels(), (SubsystemList{S}));
  EXPECT_EQ(DensityMatrix(0.25 * Matrix::identity(4)).labels(), (SubsystemList{A, S}));
  EXPECT_EQ(DensityMatrix(0.125 * Matrix::identity(8)).labels(), (SubsystemList{A, S, E}));
}

TEST(PartialTrace, MatchesNaiveLoops) {
  std::mt19937_64 rng(2);
  const SubsystemList keeps[3] = {{S, E}, {A, E}, {A, S}};
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix rho(gen::random_density(rng, 8));
    for (int drop = 0; drop < 3; ++drop) {
      const DensityMatrix r = partial_trace(rho, keeps[drop]);
      EXPECT_LT(max_abs_diff(r.matrix(), naive_trace_out(rho.matrix(), drop)), 1e-14);
      EXPECT_EQ(r.labels(), keeps[drop]);
    }
  }
}

TEST(PartialTrace, OfProductRecoversFactors) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix sa(gen::random_density(rng, 4), {A, S});
    const DensityMatrix e(gen::random_density(rng, 2), {E});
    const DensityMatrix joint = tensor(sa, e);
    EXPECT_LT(max_abs_diff(partial_trace(joint, {A, S}).matrix(), sa.matrix()), 1e-14);
    EXPECT_LT(max_abs_diff(partial_trace(joint, {E}).matrix(), e.matrix()), 1e-14);
  }
}

TEST(PartialTrace, PreservesTraceAndPositivity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix rho(gen::random_density(rng, 8));
    for (const auto& keep : {SubsystemList{A}, SubsystemList{S}, SubsystemList{E}, SubsystemList{A, E}}) {
      const DensityMatrix r = partial_trace(rho, keep);
      EXPECT_NEAR(r.matrix().trace().real(), 1.0, 1e-12);
      EXPECT_GE(eig_hermitian(r.matrix()).values.back(), -1e-12);
    }
  }
}

TEST(PartialTranspose, BellStateHasNegativeEigenvalue) {
  const DensityMatrix bell = DensityMatrix::pure(states::phi_plus(), {S, E});
  const Matrix pt = partial_transpose(bell, E);
  EXPECT_NEAR(eig_hermitian(pt).values.back(), -0.5, 1e-14);
  // Transposing either side gives the same spectrum.
  const auto a = eig_hermitian(partial_transpose(bell, S)).values;
  const auto b = eig_hermitian(pt).values;
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], 1e-14);
}

TEST(PartialTranspose, OfProductTransposesFactor) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix sa(gen::random_density(rng, 4), {A, S});
    const DensityMatrix e(gen::random_density(rng, 2), {E});
    EXPECT_LT(max_abs_diff(partial_transpose(tensor(sa, e), E), tensor(sa.matrix(), e.matrix().transpose())), 1e-15);
  }
}

TEST(EigHermitian, ReconstructsRandomMatrices) {
  std::mt19937_64 rng(6);
  for (std::size_t n : {1u, 2u, 3u, 4u, 8u}) {
    for (int trial = 0; trial < 25; ++trial) {
      const Matrix h = gen::random_hermitian(rng, n);
      const EigenSystem es = eig_hermitian(h);
      EXPECT_TRUE(es.vectors.is_unitary(1e-12));
      for (std::size_t k = 1; k < n; ++k) EXPECT_GE(es.values[k - 1], es.values[k]);
      const Matrix rebuilt = es.vectors * Matrix::diagonal(es.values) * es.vectors.adjoint();
      EXPECT_LT(max_abs_diff(rebuilt, h), 1e-12 * (1.0 + h.max_abs()));
      double sum = 0.0;
      for (double v : es.values) sum += v;
      EXPECT_NEAR(sum, h.trace().real(), 1e-11);
    }
  }
}

TEST(EigHermitian, DegenerateSpectrum) {
  const EigenSystem es = eig_hermitian(Matrix::identity(4) + tensor(pauli::Z(), pauli::I()));
  EXPECT_NEAR(es.values[0], 2.0, 1e-15);
  EXPECT_NEAR(es.values[1], 2.0, 1e-15);
  EXPECT_NEAR(es.values[3], 0.0, 1e-15);
}

TEST(EigHermitian, RejectsNonHermitian) {
  EXPECT_THROW(eig_hermitian(Matrix{{0, 1}, {0, 0}}), ContractViolation);
}

TEST(Expm, PauliRotationClosedForm) {
  const double t = 0.7;
  const Matrix u = expm_hermitian(pauli::X(), t);
  const Matrix expected{{std::cos(t), cplx{0, -std::sin(t)}}, {cplx{0, -std::sin(t)}, std::cos(t)}};
  EXPECT_LT(max_abs_diff(u, expected), 1e-14);
}

TEST(Expm, GroupPropertyAndUnitarity) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix h = gen::random_hermitian(rng, 4);
    const Matrix a = expm_hermitian(h, 0.3), b = expm_hermitian(h, 0.9);
    EXPECT_TRUE(a.is_unitary(1e-12));
    EXPECT_LT(max_abs_diff(a * b, expm_hermitian(h, 1.2)), 1e-12);
    EXPECT_LT(max_abs_diff(expm_hermitian(h, 0.0), Matrix::identity(4)), 1e-13);
  }
}

TEST(DistanceUpToPhase, IgnoresGlobalPhase) {
  std::mt19937_64 rng(8);
  const Matrix u = gen::random_unitary(rng, 4);
  for (double theta : {0.0, 0.4, std::numbers::pi, -2.5})
    EXPECT_LT(distance_up_to_phase(std::polar(1.0, theta) * u, u), 1e-14);
  EXPECT_GT(distance_up_to_phase(pauli::Z(), Matrix::identity(2)), 1.0);
}

TEST(ApplyUnitary, PreservesSpectrum) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityMatrix rho(gen::random_density(rng, 8));
    const DensityMatrix out = apply_unitary(rho, gen::random_unitary(rng, 8));
    const auto a = eig_hermitian(rho.matrix()).values, b = eig_hermitian(out.matrix()).values;
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
    EXPECT_EQ(out.labels(), rho.labels());
  }
  EXPECT_THROW(apply_unitary(DensityMatrix(0.5 * Matrix::identity(2)), 2.0 * Matrix::identity(2)),
               ContractViolation);
}

TEST(TraceDistance, Basics) {
  const Matrix h = StateVector::basis(2, 0).projector(), v = StateVector::basis(2, 1).projector();
  EXPECT_NEAR(trace_distance(h, v), 1.0, 1e-15);
  EXPECT_NEAR(trace_distance(h, h), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(h, 0.5 * Matrix::identity(2)), 0.5, 1e-15);
}
