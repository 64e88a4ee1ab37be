// measures.hpp
// Entanglement and information measures. Logarithms are base 2 throughout.

#pragma once

#include <array>
#include <string>

#include "nmsim/qstate.hpp"

namespace nmsim::measures {

enum class Kind { Concurrence, EntanglementOfFormation, VonNeumannEntropy, Negativity, Fidelity, Purity };

// A measure value tagged with what it was computed from.
struct MeasureResult {
  double value = 0.0;
  Kind kind = Kind::Purity;
  std::size_t dim = 0;
  double input_trace = 0.0;
};

std::string to_string(Kind k);

// Wootters lambdas, non-increasing. All three routes agree on full-rank states.
//
// wootters_lambdas: singular values of W^T (sy (x) sy) W with rho = W W^dagger restricted
// to the numerical support of rho. Their squares are the nonzero spectrum of
// rho * rho_tilde, but no square root of a rounding-level eigenvalue is ever taken, so
// rank-deficient (e.g. pure) states stay accurate to ~1e-15.
std::array<double, 4> wootters_lambdas(const DensityMatrix& rho);
// Square roots of the eigenvalues of the non-Hermitian product rho * rho_tilde.
std::array<double, 4> wootters_lambdas_product(const DensityMatrix& rho);
// Eigenvalues of R = sqrt(sqrt(rho) rho_tilde sqrt(rho)).
std::array<double, 4> wootters_lambdas_via_r(const DensityMatrix& rho);

// rho_tilde = (sy (x) sy) rho* (sy (x) sy)
Matrix spin_flip(const Matrix& rho);

// max(0, l1 - l2 - l3 - l4) for each lambda route.
double concurrence(const DensityMatrix& rho);
double concurrence_product(const DensityMatrix& rho);
double concurrence_via_r(const DensityMatrix& rho);

// h(x) = -x log2 x - (1 - x) log2 (1 - x)
double binary_entropy(double x);
double eof_from_concurrence(double c);
double eof(const DensityMatrix& rho);

double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const Matrix& rho);

// Sum of |negative eigenvalues| of the partial transpose on `sub`.
double negativity(const DensityMatrix& rho, Subsystem sub);
bool is_ppt(const DensityMatrix& rho, Subsystem sub);
double min_partial_transpose_eigenvalue(const DensityMatrix& rho, Subsystem sub);

// <target|rho|target>
double fidelity(const DensityMatrix& rho, const StateVector& target);
double fidelity(const Matrix& rho, const StateVector& target);
// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 for two mixed states.
double state_fidelity(const Matrix& a, const Matrix& b);

double purity(const DensityMatrix& rho);

MeasureResult measure(Kind kind, const DensityMatrix& rho);

// Matrix square root of a PSD Hermitian matrix (negative drift clamped to 0).
Matrix psd_sqrt(const Matrix& m);

}  // namespace nmsim::measures
