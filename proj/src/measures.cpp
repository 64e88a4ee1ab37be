#include "nmsim/measures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "nmsim/errors.hpp"

namespace nmsim::measures {

namespace {

// Eigenvalues of rho at or below this are treated as rounding noise on a zero.
constexpr double kSupportTol = 1e-13;

Eigen::MatrixXcd to_eigen(const Matrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  return out;
}

// W with W W^dagger = m, columns sqrt(p_i)|v_i> over eigenvalues above kSupportTol.
Eigen::MatrixXcd support_factor(const Matrix& m) {
  const EigenSystem es = eig_hermitian(m);
  const std::size_t n = m.rows();
  std::size_t rank = 0;
  while (rank < n && es.values[rank] > kSupportTol) ++rank;
  Eigen::MatrixXcd w(n, rank);
  for (std::size_t j = 0; j < rank; ++j) {
    const double s = std::sqrt(es.values[j]);
    for (std::size_t i = 0; i < n; ++i) w(i, j) = es.vectors(i, j) * s;
  }
  return w;
}

Matrix yy() { return tensor(pauli::Y(), pauli::Y()); }

void require_two_qubit(const DensityMatrix& rho, const char* op) {
  if (rho.n_qubits() != 2) throw ContractViolation(std::string(op) + ": two-qubit state required");
}

std::array<double, 4> sorted_desc(std::array<double, 4> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

double wootters_combination(const std::array<double, 4>& l) {
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

double clamped_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

}  // namespace

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Concurrence: return "concurrence";
    case Kind::EntanglementOfFormation: return "eof";
    case Kind::VonNeumannEntropy: return "von_neumann_entropy";
    case Kind::Negativity: return "negativity";
    case Kind::Fidelity: return "fidelity";
    case Kind::Purity: return "purity";
  }
  return "unknown";
}

Matrix spin_flip(const Matrix& rho) {
  const Matrix f = yy();
  return f * rho.conj() * f;
}

Matrix psd_sqrt(const Matrix& m) {
  return hermitian_function(m, [](double x) { return cplx{clamped_sqrt(x), 0.0}; });
}

std::array<double, 4> wootters_lambdas(const DensityMatrix& rho) {
  require_two_qubit(rho, "wootters_lambdas");
  const Eigen::MatrixXcd w = support_factor(rho.matrix());
  const Eigen::Index rank = w.cols();
  const Eigen::MatrixXcd tau = w.transpose() * to_eigen(yy()) * w;
  std::array<double, 4> l{0.0, 0.0, 0.0, 0.0};
  if (rank > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tau);
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) l[static_cast<std::size_t>(i)] = sv(i);
  }
  return sorted_desc(l);
}

std::array<double, 4> wootters_lambdas_product(const DensityMatrix& rho) {
  require_two_qubit(rho, "wootters_lambdas_product");
  const Eigen::MatrixXcd prod = to_eigen(rho.matrix() * spin_flip(rho.matrix()));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(prod, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw InvariantViolation("wootters_lambdas_product: eigenvalue iteration failed");
  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i) {
    // The spectrum is real and non-negative; drift below -1e-12 signals a bad input.
    const double re = solver.eigenvalues()(i).real();
    if (re < -1e-12) throw ContractViolation("wootters_lambdas_product: negative eigenvalue of rho*rho_tilde");
    l[static_cast<std::size_t>(i)] = clamped_sqrt(re);
  }
  return sorted_desc(l);
}

std::array<double, 4> wootters_lambdas_via_r(const DensityMatrix& rho) {
  require_two_qubit(rho, "wootters_lambdas_via_r");
  const Matrix root = psd_sqrt(rho.matrix());
  Matrix inner = root * spin_flip(rho.matrix()) * root;
  inner = 0.5 * (inner + inner.adjoint());
  const Matrix r = psd_sqrt(inner);
  const EigenSystem es = eig_hermitian(0.5 * (r + r.adjoint()));
  return sorted_desc({std::max(0.0, es.values[0]), std::max(0.0, es.values[1]),
                      std::max(0.0, es.values[2]), std::max(0.0, es.values[3])});
}

double concurrence(const DensityMatrix& rho) { return wootters_combination(wootters_lambdas(rho)); }
double concurrence_product(const DensityMatrix& rho) {
  return wootters_combination(wootters_lambdas_product(rho));
}
double concurrence_via_r(const DensityMatrix& rho) {
  return wootters_combination(wootters_lambdas_via_r(rho));
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double eof(const DensityMatrix& rho) { return eof_from_concurrence(concurrence(rho)); }

double von_neumann_entropy(const Matrix& rho) {
  double s = 0.0;
  for (double lambda : eig_hermitian(rho).values) {
    if (lambda < -kPsdTol) throw ContractViolation("von_neumann_entropy: state has a negative eigenvalue");
    if (lambda <= 0.0) continue;
    s -= lambda * std::log2(lambda);
  }
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

double min_partial_transpose_eigenvalue(const DensityMatrix& rho, Subsystem sub) {
  if (rho.n_qubits() < 2) throw ContractViolation("partial transpose needs a bipartite state");
  return eig_hermitian(partial_transpose(rho, sub)).values.back();
}

double negativity(const DensityMatrix& rho, Subsystem sub) {
  if (rho.n_qubits() < 2) throw ContractViolation("negativity needs a bipartite state");
  double n = 0.0;
  for (double v : eig_hermitian(partial_transpose(rho, sub)).values)
    if (v < 0.0) n -= v;
  return n;
}

bool is_ppt(const DensityMatrix& rho, Subsystem sub) {
  return min_partial_transpose_eigenvalue(rho, sub) >= -kPsdTol;
}

double fidelity(const Matrix& rho, const StateVector& target) {
  if (rho.rows() != target.dim() || rho.cols() != target.dim())
    throw ContractViolation("fidelity: dimension mismatch");
  cplx acc{};
  for (std::size_t i = 0; i < target.dim(); ++i)
    for (std::size_t j = 0; j < target.dim(); ++j)
      acc += std::conj(target[i]) * rho(i, j) * target[j];
  return std::clamp(acc.real(), 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
  return fidelity(rho.matrix(), target);
}

double state_fidelity(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ContractViolation("state_fidelity: dimension mismatch");
  // ||sqrt(a) sqrt(b)||_1 = ||A^dagger B||_1 for any factors a = A A^dagger, b = B B^dagger.
  const Eigen::MatrixXcd fa = support_factor(a), fb = support_factor(b);
  if (fa.cols() == 0 || fb.cols() == 0) return 0.0;
  const Eigen::MatrixXcd overlap = fa.adjoint() * fb;
  const double tr = Eigen::JacobiSVD<Eigen::MatrixXcd>(overlap).singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double purity(const DensityMatrix& rho) { return rho.purity(); }

MeasureResult measure(Kind kind, const DensityMatrix& rho) {
  MeasureResult r;
  r.kind = kind;
  r.dim = rho.dim();
  r.input_trace = rho.matrix().trace().real();
  switch (kind) {
    case Kind::Concurrence: r.value = concurrence(rho); break;
    case Kind::EntanglementOfFormation: r.value = eof(rho); break;
    case Kind::VonNeumannEntropy: r.value = von_neumann_entropy(rho); break;
    case Kind::Negativity: r.value = negativity(rho, rho.labels().back()); break;
    case Kind::Purity: r.value = purity(rho); break;
    case Kind::Fidelity: throw ContractViolation("measure: fidelity needs a target state");
  }
  return r;
}

}  // namespace nmsim::measures
