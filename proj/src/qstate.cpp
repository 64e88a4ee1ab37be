#include "nmsim/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "nmsim/errors.hpp"

namespace nmsim {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  std::size_t q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  return q;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw ContractViolation(os.str());
  }
}

SubsystemList default_labels(std::size_t n_qubits) {
  switch (n_qubits) {
    case 1: return {Subsystem::S};
    case 2: return {Subsystem::A, Subsystem::S};
    case 3: return {Subsystem::A, Subsystem::S, Subsystem::E};
    default: throw ContractViolation("DensityMatrix: only 1-3 qubits are supported");
  }
}

// Bit of the qubit at `pos` (0 = most significant) inside an n-qubit index.
inline std::size_t bit_at(std::size_t index, std::size_t pos, std::size_t n) {
  return (index >> (n - 1 - pos)) & 1U;
}

}  // namespace

// ---- Matrix ----------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ContractViolation("Matrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Matrix Matrix::conj() const {
  Matrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

cplx Matrix::trace() const {
  cplx t{0.0, 0.0};
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool Matrix::is_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

bool Matrix::is_hermitian(double tol) const {
  if (!is_square()) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r; c < cols_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
  return true;
}

bool Matrix::is_unitary(double tol) const {
  if (!is_square()) return false;
  return max_abs_diff(adjoint() * *this, identity(rows_)) <= tol;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ContractViolation("operator*: inner dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac) {
      const cplx x = a(ar, ac);
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = x * b(br, bc);
    }
  return out;
}

Matrix tensor(std::initializer_list<Matrix> factors) {
  Matrix out = Matrix::identity(1);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  return (a - b).max_abs();
}

namespace pauli {
Matrix I() { return Matrix::identity(2); }
Matrix X() { return Matrix{{0.0, 1.0}, {1.0, 0.0}}; }
Matrix Y() { return Matrix{{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}; }
Matrix Z() { return Matrix{{1.0, 0.0}, {0.0, -1.0}}; }
Matrix H() {
  const double s = 1.0 / std::sqrt(2.0);
  return Matrix{{s, s}, {s, -s}};
}
}  // namespace pauli

// ---- StateVector -----------------------------------------------------------

StateVector::StateVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
  if (!is_power_of_two(amps_.size()))
    throw ContractViolation("StateVector: length must be a power of two");
  double norm2 = 0.0;
  for (const auto& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw ContractViolation("StateVector: non-finite amplitude");
    norm2 += std::norm(a);
  }
  if (std::abs(norm2 - 1.0) > 1e-12) throw ContractViolation("StateVector: not normalized");
}

StateVector StateVector::normalized(std::vector<cplx> amplitudes) {
  double norm2 = 0.0;
  for (const auto& a : amplitudes) norm2 += std::norm(a);
  if (!(norm2 > 0.0)) throw ContractViolation("StateVector: zero vector");
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : amplitudes) a *= inv;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw ContractViolation("StateVector::basis: index out of range");
  std::vector<cplx> v(dim);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

std::size_t StateVector::n_qubits() const { return log2_exact(amps_.size()); }

Matrix StateVector::projector() const {
  Matrix p(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) p(i, j) = amps_[i] * std::conj(amps_[j]);
  return p;
}

Matrix StateVector::as_column() const {
  Matrix c(dim(), 1);
  for (std::size_t i = 0; i < dim(); ++i) c(i, 0) = amps_[i];
  return c;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<cplx> v;
  v.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes())
    for (const auto& y : b.amplitudes()) v.push_back(x * y);
  return StateVector::normalized(std::move(v));
}

const char* to_string(Subsystem s) {
  switch (s) {
    case Subsystem::A: return "A";
    case Subsystem::S: return "S";
    case Subsystem::E: return "E";
  }
  return "?";
}

namespace states {
StateVector phi_plus() { return StateVector::normalized({1.0, 0.0, 0.0, 1.0}); }
StateVector phi_minus() { return StateVector::normalized({1.0, 0.0, 0.0, -1.0}); }
StateVector psi_plus() { return StateVector::normalized({0.0, 1.0, 1.0, 0.0}); }
StateVector psi_minus() { return StateVector::normalized({0.0, 1.0, -1.0, 0.0}); }
StateVector environment(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ContractViolation("environment: alpha must lie in [0, 1]");
  return StateVector::normalized({alpha, std::sqrt(std::max(0.0, 1.0 - alpha * alpha))});
}
}  // namespace states

// ---- eigen / exp -----------------------------------------------------------

EigenSystem eig_hermitian(const Matrix& m) {
  if (!m.is_square() || !m.is_hermitian(1e-8))
    throw ContractViolation("eig_hermitian: input is not Hermitian");
  const std::size_t n = m.rows();
  Matrix a = m;
  Matrix v = Matrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a(p, q));
    return std::sqrt(s);
  };
  const double scale = std::max(1.0, m.max_abs());

  double prev_off = std::numeric_limits<double>::infinity();
  for (int sweep = 0; sweep < 100; ++sweep) {
    const double off = off_norm();
    if (off <= 1e-15 * scale) break;
    if (off <= 1e-11 * scale && off >= prev_off) break;  // stalled at rounding level
    prev_off = off;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag < 1e-300) continue;
        // Phase the (p,q) element real, then rotate as in the real symmetric case.
        const cplx phase = a(p, q) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag-phase * rotation, acting on the (p, q) plane:
        //   J_pp = c, J_pq = s, J_qp = -s conj(phase), J_qq = c conj(phase)
        const cplx jpp = c, jpq = s, jqp = -s * std::conj(phase), jqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {  // A <- A J
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {  // V <- V J
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }
  if (off_norm() > 1e-11 * scale)
    throw InvariantViolation("eig_hermitian: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  EigenSystem es{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
  }
  return es;
}

Matrix expm_hermitian(const Matrix& h, double t) {
  return hermitian_function(h, [t](double lambda) { return std::exp(cplx{0.0, -lambda * t}); });
}

double distance_up_to_phase(const Matrix& u, const Matrix& v) {
  require_same_shape(u, v, "distance_up_to_phase");
  const cplx overlap = (v.adjoint() * u).trace();
  const cplx phase = std::abs(overlap) > 1e-300 ? overlap / std::abs(overlap) : cplx{1.0, 0.0};
  return (u - phase * v).max_abs();
}

// ---- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix m, SubsystemList labels)
    : m_(std::move(m)), labels_(std::move(labels)) {
  if (labels_.empty() || labels_.size() > 3)
    throw ContractViolation("DensityMatrix: 1-3 subsystem labels required");
  for (std::size_t i = 1; i < labels_.size(); ++i)
    if (static_cast<int>(labels_[i - 1]) >= static_cast<int>(labels_[i]))
      throw ContractViolation("DensityMatrix: labels must be distinct and in (A, S, E) order");
  const std::size_t dim = std::size_t{1} << labels_.size();
  if (m_.rows() != dim || m_.cols() != dim)
    throw ContractViolation("DensityMatrix: matrix size does not match label count");
  if (!m_.is_finite()) throw InvariantViolation("DensityMatrix: non-finite entry");
  if (!m_.is_hermitian(kStructuralTol)) throw InvariantViolation("DensityMatrix: not Hermitian");
  if (std::abs(m_.trace() - cplx{1.0, 0.0}) > kStructuralTol)
    throw InvariantViolation("DensityMatrix: trace differs from 1");
  if (eig_hermitian(m_).values.back() < -kPsdTol)
    throw InvariantViolation("DensityMatrix: negative eigenvalue");
}

DensityMatrix::DensityMatrix(Matrix m)
    : DensityMatrix(m, default_labels(is_power_of_two(m.rows()) ? log2_exact(m.rows()) : 0)) {}

DensityMatrix DensityMatrix::pure(const StateVector& psi, SubsystemList labels) {
  return DensityMatrix(psi.projector(), std::move(labels));
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(SubsystemList labels) {
  const std::size_t dim = std::size_t{1} << labels.size();
  Matrix m = Matrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(m), std::move(labels));
}

std::size_t DensityMatrix::position(Subsystem s) const {
  auto it = std::find(labels_.begin(), labels_.end(), s);
  if (it == labels_.end())
    throw ContractViolation(std::string("subsystem ") + to_string(s) + " not present in state");
  return static_cast<std::size_t>(it - labels_.begin());
}

bool DensityMatrix::has(Subsystem s) const {
  return std::find(labels_.begin(), labels_.end(), s) != labels_.end();
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  SubsystemList labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  for (std::size_t i = 1; i < labels.size(); ++i)
    if (static_cast<int>(labels[i - 1]) >= static_cast<int>(labels[i]))
      throw ContractViolation("tensor: factors must follow the (A, S, E) order");
  return DensityMatrix(tensor(a.matrix(), b.matrix()), std::move(labels));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemList& keep) {
  if (keep.empty()) throw ContractViolation("partial_trace: keep set is empty");
  std::vector<std::size_t> kept;
  for (Subsystem s : keep) kept.push_back(rho.position(s));
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end())
    throw ContractViolation("partial_trace: duplicate subsystem in keep set");

  const std::size_t n = rho.n_qubits();
  std::vector<std::size_t> traced;
  for (std::size_t p = 0; p < n; ++p)
    if (!std::binary_search(kept.begin(), kept.end(), p)) traced.push_back(p);

  auto compose = [&](std::size_t kept_idx, std::size_t traced_idx) {
    std::size_t full = 0;
    for (std::size_t i = 0; i < kept.size(); ++i)
      full |= bit_at(kept_idx, i, kept.size()) << (n - 1 - kept[i]);
    for (std::size_t i = 0; i < traced.size(); ++i)
      full |= bit_at(traced_idx, i, traced.size()) << (n - 1 - traced[i]);
    return full;
  };

  const std::size_t dk = std::size_t{1} << kept.size();
  const std::size_t dt = std::size_t{1} << traced.size();
  Matrix out(dk, dk);
  for (std::size_t r = 0; r < dk; ++r)
    for (std::size_t c = 0; c < dk; ++c) {
      cplx acc{};
      for (std::size_t t = 0; t < dt; ++t) acc += rho.matrix()(compose(r, t), compose(c, t));
      out(r, c) = acc;
    }

  SubsystemList labels;
  for (std::size_t p : kept) labels.push_back(rho.labels()[p]);
  return DensityMatrix(std::move(out), std::move(labels));
}

Matrix partial_transpose(const DensityMatrix& rho, Subsystem sub) {
  const std::size_t n = rho.n_qubits();
  const std::size_t mask = std::size_t{1} << (n - 1 - rho.position(sub));
  const std::size_t d = rho.dim();
  Matrix out(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) {
      // swap the sub-bit between row and column
      const std::size_t rb = r & mask, cb = c & mask;
      out((r & ~mask) | cb, (c & ~mask) | rb) = rho.matrix()(r, c);
    }
  return out;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u) {
  if (u.rows() != rho.dim() || u.cols() != rho.dim())
    throw ContractViolation("apply_unitary: dimension mismatch");
  if (!u.is_unitary(kStructuralTol)) throw ContractViolation("apply_unitary: operator is not unitary");
  Matrix out = u * rho.matrix() * u.adjoint();
  // re-symmetrize rounding noise so the Hermiticity check sees the exact structure
  Matrix herm = 0.5 * (out + out.adjoint());
  return DensityMatrix(std::move(herm), rho.labels());
}

double trace_distance(const Matrix& a, const Matrix& b) {
  Matrix d = a - b;
  d = 0.5 * (d + d.adjoint());
  double s = 0.0;
  for (double v : eig_hermitian(d).values) s += std::abs(v);
  return 0.5 * s;
}

}  // namespace nmsim
