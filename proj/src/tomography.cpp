#include "nmsim/tomography.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "nmsim/errors.hpp"

namespace nmsim::tomography {

namespace {

struct Letters {
  const char* zero;
  const char* one;
  const char* diag;
  const char* anti;
  const char* circ_minus;
  const char* circ_plus;
};

Letters letters(Alphabet a) {
  if (a == Alphabet::Polarization) return {"H", "V", "D", "A", "L", "R"};
  return {"r", "l", "d", "a", "c", "k"};
}

StateVector ket(double a, cplx b) { return StateVector::normalized({a, b}); }

// Hermitian operator basis: tensor products of {I, X, Y, Z}.
std::vector<Matrix> pauli_basis(std::size_t n_qubits) {
  const std::vector<Matrix> single{pauli::I(), pauli::X(), pauli::Y(), pauli::Z()};
  std::vector<Matrix> basis{Matrix::identity(1)};
  for (std::size_t q = 0; q < n_qubits; ++q) {
    std::vector<Matrix> next;
    for (const auto& b : basis)
      for (const auto& s : single) next.push_back(tensor(b, s));
    basis = std::move(next);
  }
  return basis;
}

std::size_t qubits_of(std::size_t dim) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

Eigen::MatrixXd measurement_matrix(const ProjectorSet& ps) {
  const auto basis = pauli_basis(qubits_of(ps.dim()));
  Eigen::MatrixXd m(ps.size(), basis.size());
  for (std::size_t p = 0; p < ps.size(); ++p) {
    const Matrix proj = ps[p].state.projector();
    for (std::size_t j = 0; j < basis.size(); ++j)
      m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(j)) =
          (proj * basis[j]).trace().real() / static_cast<double>(ps.dim());
  }
  return m;
}

ProjectorSet path_computational() { return ProjectorSet::computational(1, Alphabet::Path); }

}  // namespace

ProjectorSet::ProjectorSet(std::vector<Projector> items) : items_(std::move(items)) {
  if (items_.empty()) throw ContractViolation("ProjectorSet: empty");
  for (const auto& p : items_)
    if (p.state.dim() != items_.front().state.dim())
      throw ContractViolation("ProjectorSet: projectors of different dimension");
}

ProjectorSet ProjectorSet::single_qubit(Alphabet a) {
  const Letters l = letters(a);
  const double s = 1.0 / std::sqrt(2.0);
  return ProjectorSet({{l.zero, ket(1.0, 0.0)},
                       {l.one, ket(0.0, 1.0)},
                       {l.diag, ket(s, s)},
                       {l.circ_minus, ket(s, cplx{0.0, -s})}});
}

ProjectorSet ProjectorSet::single_qubit_pauli(Alphabet a) {
  const Letters l = letters(a);
  const double s = 1.0 / std::sqrt(2.0);
  return ProjectorSet({{l.zero, ket(1.0, 0.0)},
                       {l.one, ket(0.0, 1.0)},
                       {l.diag, ket(s, s)},
                       {l.anti, ket(s, -s)},
                       {l.circ_minus, ket(s, cplx{0.0, -s})},
                       {l.circ_plus, ket(s, cplx{0.0, s})}});
}

ProjectorSet ProjectorSet::two_qubit(Alphabet first, Alphabet second) {
  return product(single_qubit(first), single_qubit(second));
}

ProjectorSet ProjectorSet::computational(std::size_t n_qubits, Alphabet a) {
  if (n_qubits == 0) throw ContractViolation("computational: need at least one qubit");
  const Letters l = letters(a);
  ProjectorSet one({{l.zero, ket(1.0, 0.0)}, {l.one, ket(0.0, 1.0)}});
  ProjectorSet out = one;
  for (std::size_t q = 1; q < n_qubits; ++q) out = product(out, one);
  return out;
}

ProjectorSet ProjectorSet::product(const ProjectorSet& a, const ProjectorSet& b, const std::string& sep) {
  std::vector<Projector> items;
  items.reserve(a.size() * b.size());
  for (const auto& pa : a.items())
    for (const auto& pb : b.items()) items.push_back({pa.label + sep + pb.label, tensor(pa.state, pb.state)});
  return ProjectorSet(std::move(items));
}

std::optional<std::size_t> ProjectorSet::find(const std::string& label) const {
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (items_[i].label == label) return i;
  return std::nullopt;
}

std::size_t ProjectorSet::measurement_rank() const {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(measurement_matrix(*this));
  qr.setThreshold(1e-10);
  return static_cast<std::size_t>(qr.rank());
}

double CountTable::at(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return counts[i];
  throw ContractViolation("CountTable: no entry labelled '" + label + "'");
}

CountTable simulate_counts(const Matrix& rho, const ProjectorSet& ps, std::uint64_t total,
                           std::optional<std::uint64_t> poisson_seed) {
  if (rho.rows() != ps.dim() || rho.cols() != ps.dim())
    throw ContractViolation("simulate_counts: state and projector dimensions differ");
  if (total == 0) throw ContractViolation("simulate_counts: total must be positive");
  CountTable t;
  t.total = total;
  t.seed = poisson_seed;
  std::optional<std::mt19937_64> rng;
  if (poisson_seed) rng.emplace(*poisson_seed);
  for (const auto& p : ps.items()) {
    cplx overlap{};
    for (std::size_t i = 0; i < ps.dim(); ++i)
      for (std::size_t j = 0; j < ps.dim(); ++j)
        overlap += std::conj(p.state[i]) * rho(i, j) * p.state[j];
    const double mean = static_cast<double>(total) * std::max(0.0, overlap.real());
    double count = mean;
    if (rng) {
      count = 0.0;
      if (mean > 0.0) count = static_cast<double>(std::poisson_distribution<long long>(mean)(*rng));
    }
    t.labels.push_back(p.label);
    t.counts.push_back(count);
  }
  return t;
}

CountTable simulate_counts(const DensityMatrix& rho, const ProjectorSet& ps, std::uint64_t total,
                           std::optional<std::uint64_t> poisson_seed) {
  return simulate_counts(rho.matrix(), ps, total, poisson_seed);
}

Matrix reconstruct_linear(const CountTable& counts, const ProjectorSet& ps) {
  if (counts.counts.size() != ps.size() || counts.labels.size() != ps.size())
    throw ContractViolation("reconstruct_linear: count table does not match projector set");
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (counts.labels[i] != ps[i].label)
      throw ContractViolation("reconstruct_linear: label mismatch at '" + ps[i].label + "'");
  if (counts.total == 0) throw ContractViolation("reconstruct_linear: total must be positive");

  const std::size_t d = ps.dim();
  const Eigen::MatrixXd m = measurement_matrix(ps);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  if (static_cast<std::size_t>(qr.rank()) != d * d)
    throw ContractViolation("reconstruct_linear: projector set is not informationally complete");

  Eigen::VectorXd b(static_cast<Eigen::Index>(ps.size()));
  for (std::size_t i = 0; i < ps.size(); ++i)
    b(static_cast<Eigen::Index>(i)) = counts.counts[i] / static_cast<double>(counts.total);
  const Eigen::VectorXd x = qr.solve(b);

  const auto basis = pauli_basis(qubits_of(d));
  Matrix rho(d, d);
  for (std::size_t j = 0; j < basis.size(); ++j)
    rho += cplx{x(static_cast<Eigen::Index>(j)) / static_cast<double>(d)} * basis[j];
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw ContractViolation("reconstruct_linear: counts give a non-positive trace");
  rho *= 1.0 / tr;
  return 0.5 * (rho + rho.adjoint());
}

DensityMatrix project_to_physical(const Matrix& m, SubsystemList labels) {
  if (!m.is_hermitian(1e-8)) throw ContractViolation("project_to_physical: input is not Hermitian");
  const Matrix h = 0.5 * (m + m.adjoint());
  EigenSystem es = eig_hermitian(h);
  std::vector<double>& lam = es.values;  // non-increasing
  const double tr = std::accumulate(lam.begin(), lam.end(), 0.0);
  if (!(tr > 0.0)) throw ContractViolation("project_to_physical: non-positive trace");
  for (auto& v : lam) v /= tr;

  // Walk up from the smallest eigenvalue, zeroing while the shifted value stays negative.
  std::size_t keep = lam.size();
  double carry = 0.0;
  while (keep > 0 && lam[keep - 1] + carry / static_cast<double>(keep) < 0.0) {
    carry += lam[keep - 1];
    lam[keep - 1] = 0.0;
    --keep;
  }
  for (std::size_t i = 0; i < keep; ++i) lam[i] += carry / static_cast<double>(keep);

  const std::size_t n = h.rows();
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (lam[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lam[k] * es.vectors(i, k) * std::conj(es.vectors(j, k));
  }
  out = 0.5 * (out + out.adjoint());
  out *= 1.0 / out.trace().real();
  if (labels.empty()) return DensityMatrix(std::move(out));
  return DensityMatrix(std::move(out), std::move(labels));
}

DensityMatrix project_to_physical(const Matrix& m) { return project_to_physical(m, {}); }

ProjectorSet joint_projectors_for_e(const ProjectorSet& e_set) {
  if (e_set.dim() != 2) throw ContractViolation("joint_projectors_for_e: E projectors must be single-qubit");
  return ProjectorSet::product(ProjectorSet::computational(2), e_set, "|");
}

CountTable marginalize_counts_for_e(const CountTable& joint, const ProjectorSet& e_set) {
  const ProjectorSet pol = ProjectorSet::computational(2);
  CountTable out;
  out.total = joint.total;
  out.seed = joint.seed;
  for (const auto& pe : e_set.items()) {
    double sum = 0.0;
    for (const auto& pp : pol.items()) {
      const std::string label = pp.label + "|" + pe.label;
      auto it = std::find(joint.labels.begin(), joint.labels.end(), label);
      if (it == joint.labels.end())
        throw ContractViolation("marginalize_counts_for_e: missing polarization outcome " + label);
      sum += joint.counts[static_cast<std::size_t>(it - joint.labels.begin())];
    }
    out.labels.push_back(pe.label);
    out.counts.push_back(sum);
  }
  return out;
}

ProjectorSet joint_projectors_for_sa(const ProjectorSet& sa_set) {
  if (sa_set.dim() != 4) throw ContractViolation("joint_projectors_for_sa: A-S projectors must be two-qubit");
  return ProjectorSet::product(sa_set, path_computational(), "|");
}

CountTable marginalize_counts_for_sa(const CountTable& joint, const ProjectorSet& sa_set) {
  const ProjectorSet path = path_computational();
  CountTable out;
  out.total = joint.total;
  out.seed = joint.seed;
  for (const auto& psa : sa_set.items()) {
    double sum = 0.0;
    for (const auto& pe : path.items()) {
      const std::string label = psa.label + "|" + pe.label;
      auto it = std::find(joint.labels.begin(), joint.labels.end(), label);
      if (it == joint.labels.end())
        throw ContractViolation("marginalize_counts_for_sa: missing path outcome " + label);
      sum += joint.counts[static_cast<std::size_t>(it - joint.labels.begin())];
    }
    out.labels.push_back(psa.label);
    out.counts.push_back(sum);
  }
  return out;
}

Matrix to_bell_basis(const Matrix& rho_sa) {
  if (rho_sa.rows() != 4 || rho_sa.cols() != 4) throw ContractViolation("to_bell_basis: 4x4 input required");
  const StateVector bell[] = {states::phi_plus(), states::phi_minus(), states::psi_plus(), states::psi_minus()};
  Matrix b(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) {
      cplx acc{};
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) acc += std::conj(bell[r][i]) * rho_sa(i, j) * bell[c][j];
      b(r, c) = acc;
    }
  return b;
}

double bell_coherence(const Matrix& rho_sa) {
  const Matrix b = to_bell_basis(rho_sa);
  double s = 0.0;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (r != c) s += std::abs(b(r, c));
  return s;
}

}  // namespace nmsim::tomography
