// qstate.hpp
// Dense complex linear algebra and few-qubit state primitives.
//
// Every multi-qubit object in the library uses one subsystem order, (A, S, E):
// ancilla, system, environment. A 3-qubit basis index is 4*a + 2*s + e with
// |H> = |r> = 0 and |V> = |l> = 1. Reduced states keep the surviving labels in
// the same relative order, so rho_SE is indexed 2*s + e.

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nmsim {

using cplx = std::complex<double>;

inline constexpr double kStructuralTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  // Row-major nested initializer: Matrix{{1, 0}, {0, 1}}.
  Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const cplx> data() const { return data_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conj() const;
  cplx trace() const;
  double max_abs() const;
  bool is_finite() const;
  bool is_hermitian(double tol = kStructuralTol) const;
  bool is_unitary(double tol = kStructuralTol) const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(cplx s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(cplx s, Matrix a);

// Kronecker product; a is the more significant factor.
Matrix tensor(const Matrix& a, const Matrix& b);
Matrix tensor(std::initializer_list<Matrix> factors);

double max_abs_diff(const Matrix& a, const Matrix& b);

namespace pauli {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
Matrix H();  // Hadamard
}  // namespace pauli

class StateVector {
 public:
  // Throws ContractViolation unless the norm is 1 within 1e-12 and the length is 2^n.
  explicit StateVector(std::vector<cplx> amplitudes);
  // Normalizes first; throws on the zero vector.
  static StateVector normalized(std::vector<cplx> amplitudes);
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amps_.size(); }
  std::size_t n_qubits() const;
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  std::span<const cplx> amplitudes() const { return amps_; }

  Matrix projector() const;  // |psi><psi|
  Matrix as_column() const;

 private:
  std::vector<cplx> amps_;
};

StateVector tensor(const StateVector& a, const StateVector& b);

enum class Subsystem { A = 0, S = 1, E = 2 };
const char* to_string(Subsystem s);

// Labels kept in canonical (A, S, E) order.
using SubsystemList = std::vector<Subsystem>;

namespace states {
StateVector phi_plus();   // (|00> + |11>)/sqrt2
StateVector phi_minus();  // (|00> - |11>)/sqrt2
StateVector psi_plus();   // (|01> + |10>)/sqrt2
StateVector psi_minus();  // (|01> - |10>)/sqrt2
// alpha|r> + sqrt(1 - alpha^2)|l>
StateVector environment(double alpha);
}  // namespace states

struct EigenSystem {
  std::vector<double> values;  // non-increasing
  Matrix vectors;              // column j pairs with values[j]
};

// Cyclic complex Jacobi. Throws ContractViolation if m is not Hermitian within 1e-8.
EigenSystem eig_hermitian(const Matrix& m);

// exp(-i h t) by spectral decomposition.
Matrix expm_hermitian(const Matrix& h, double t);

// Applies f to the spectrum of a Hermitian matrix.
template <class F>
Matrix hermitian_function(const Matrix& h, F&& f) {
  EigenSystem es = eig_hermitian(h);
  const std::size_t n = h.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx fk = f(es.values[k]);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = es.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(es.vectors(j, k));
    }
  }
  return out;
}

// max|u - e^{i theta} v| at the global phase theta = arg Tr(v^dagger u) that aligns v
// with u. Falls back to theta = 0 when the overlap vanishes.
double distance_up_to_phase(const Matrix& u, const Matrix& v);

// Hermitian, PSD, unit-trace state over 1-3 labelled qubits. Construction validates
// every invariant and throws InvariantViolation on failure.
class DensityMatrix {
 public:
  DensityMatrix(Matrix m, SubsystemList labels);
  // Labels default by size: 1 qubit {S}, 2 qubits {A, S}, 3 qubits {A, S, E}.
  explicit DensityMatrix(Matrix m);
  static DensityMatrix pure(const StateVector& psi, SubsystemList labels);
  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(SubsystemList labels);

  const Matrix& matrix() const { return m_; }
  const SubsystemList& labels() const { return labels_; }
  std::size_t n_qubits() const { return labels_.size(); }
  std::size_t dim() const { return m_.rows(); }
  // Position of a label within this state, or throws ContractViolation.
  std::size_t position(Subsystem s) const;
  bool has(Subsystem s) const;

  double purity() const;

 private:
  Matrix m_;
  SubsystemList labels_;
};

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemList& keep);
Matrix partial_transpose(const DensityMatrix& rho, Subsystem sub);
DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u);

// Trace distance 0.5 * ||a - b||_1 for Hermitian a, b.
double trace_distance(const Matrix& a, const Matrix& b);

}  // namespace nmsim
