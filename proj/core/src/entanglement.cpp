#include "djc/entanglement.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace djc {

namespace {

// (sy x sy) in the basis (|ee>, |el>, |le>, |ll>): antidiagonal (-1, 1, 1, -1).
TwoQubitState spin_flip_matrix() {
  TwoQubitState f = TwoQubitState::Zero();
  f(0, 3) = -1.0;
  f(1, 2) = 1.0;
  f(2, 1) = 1.0;
  f(3, 0) = -1.0;
  return f;
}

void require_two_qubit_state(const TwoQubitState& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("two-qubit state is not Hermitian within tolerance");
}

double wootters_combine(Eigen::Vector4d lams) {
  for (int i = 0; i < 4; ++i) lams(i) = std::max(0.0, lams(i));
  std::sort(lams.data(), lams.data() + 4, std::greater<double>());
  const double c = std::sqrt(lams(0)) - std::sqrt(lams(1)) -
                   std::sqrt(lams(2)) - std::sqrt(lams(3));
  return std::clamp(c, 0.0, 1.0);
}

struct AtomCavityIndex {
  int na, nb;
  // canonical layout: index = ((iA*na + ka)*2 + iB)*nb + kb
  int operator()(int atom_a, int fock_a, int atom_b, int fock_b) const {
    return ((atom_a * na + fock_a) * 2 + atom_b) * nb + fock_b;
  }
};

}  // namespace

TwoQubitState reduce_to_atoms(const Matrix& rho, const HilbertSpace& space) {
  if (!space.is_canonical_double_jc())
    throw LayoutError("reduce_to_atoms needs the canonical 4-factor layout");
  if (rho.rows() != space.total_dim() || rho.cols() != space.total_dim())
    throw LayoutError("reduce_to_atoms: state shape does not match space");
  const AtomCavityIndex idx{space.dim(Site::CavA), space.dim(Site::CavB)};
  TwoQubitState out = TwoQubitState::Zero();
  for (int ia = 0; ia < 2; ++ia)
    for (int ja = 0; ja < 2; ++ja)
      for (int ib = 0; ib < 2; ++ib)
        for (int jb = 0; jb < 2; ++jb) {
          Complex s = 0.0;
          for (int ka = 0; ka < idx.na; ++ka)
            for (int kb = 0; kb < idx.nb; ++kb)
              s += rho(idx(ia, ka, ib, kb), idx(ja, ka, jb, kb));
          out(ia * 2 + ib, ja * 2 + jb) = s;
        }
  return out;
}

TwoQubitState reduce_to_atoms(const DensityMatrix& rho) {
  return reduce_to_atoms(rho.mat, rho.space);
}

TwoQubitState reduce_to_atoms(const Vector& psi, const HilbertSpace& space) {
  if (!space.is_canonical_double_jc())
    throw LayoutError("reduce_to_atoms needs the canonical 4-factor layout");
  if (psi.size() != space.total_dim())
    throw LayoutError("reduce_to_atoms: state size does not match space");
  const AtomCavityIndex idx{space.dim(Site::CavA), space.dim(Site::CavB)};
  TwoQubitState out = TwoQubitState::Zero();
  for (int ia = 0; ia < 2; ++ia)
    for (int ja = 0; ja < 2; ++ja)
      for (int ib = 0; ib < 2; ++ib)
        for (int jb = 0; jb < 2; ++jb) {
          Complex s = 0.0;
          for (int ka = 0; ka < idx.na; ++ka)
            for (int kb = 0; kb < idx.nb; ++kb)
              s += psi(idx(ia, ka, ib, kb)) * std::conj(psi(idx(ja, ka, jb, kb)));
          out(ia * 2 + ib, ja * 2 + jb) = s;
        }
  return out;
}

double concurrence(const TwoQubitState& rho) {
  require_two_qubit_state(rho);
  const TwoQubitState herm = 0.5 * (rho + rho.adjoint());
  const TwoQubitState f = spin_flip_matrix();
  const TwoQubitState flipped = f * herm.conjugate() * f;

  // sqrt(rho) via spectral decomposition, negative roundoff clamped
  Eigen::SelfAdjointEigenSolver<TwoQubitState> es(herm);
  Eigen::Vector4d evals = es.eigenvalues().cwiseMax(0.0);
  const TwoQubitState sqrt_rho = es.eigenvectors() *
                                 evals.cwiseSqrt().asDiagonal() *
                                 es.eigenvectors().adjoint();

  // eigenvalues of rho*rho~ equal those of the Hermitian sqrt(rho) rho~ sqrt(rho)
  const TwoQubitState m = sqrt_rho * flipped * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<TwoQubitState> es2(0.5 * (m + m.adjoint()),
                                                   Eigen::EigenvaluesOnly);
  return wootters_combine(es2.eigenvalues());
}

double concurrence_product_route(const TwoQubitState& rho) {
  require_two_qubit_state(rho);
  const TwoQubitState herm = 0.5 * (rho + rho.adjoint());
  const TwoQubitState f = spin_flip_matrix();
  const TwoQubitState prod = herm * (f * herm.conjugate() * f);
  Eigen::ComplexEigenSolver<TwoQubitState> es(prod);
  return wootters_combine(es.eigenvalues().real());
}

double ConcurrenceTrace::scaled_time(int i) const {
  return times.at(i) / (2.0 * M_PI);
}

std::vector<EsdEvent> detect_events(const ConcurrenceTrace& trace,
                                    double threshold, int persistence) {
  const int n = trace.size();
  if (n < 5) throw ValidationError("event detection needs at least 5 samples");
  const double dt = trace.times[1] - trace.times[0];
  for (int i = 1; i + 1 < n; ++i)
    if (std::abs((trace.times[i + 1] - trace.times[i]) - dt) > 1e-9 * std::abs(dt))
      throw ValidationError("event detection needs a uniformly sampled trace");

  const auto& v = trace.values;
  const auto below = [&](int k) { return v[k] <= threshold; };
  const auto slope = [&](int hi) {  // finite difference ending at sample hi
    return (v[hi] - v[hi - 1]) / dt;
  };

  std::vector<EsdEvent> events;
  for (int k = 1; k < n; ++k) {
    if (!below(k - 1) && below(k)) {
      // needs `persistence` consecutive samples at/below threshold
      bool sustained = k + persistence - 1 < n;
      for (int j = k; sustained && j < k + persistence; ++j)
        sustained = below(j);
      if (sustained)
        events.push_back({EventKind::Death, trace.times[k],
                          k >= 2 ? slope(k - 1) : 0.0,
                          k + 1 < n ? slope(k + 1) : 0.0});
    } else if (below(k - 1) && !below(k)) {
      bool sustained = k - persistence >= 0;
      for (int j = k - persistence; sustained && j < k; ++j)
        sustained = below(j);
      if (sustained)
        events.push_back({EventKind::Revival, trace.times[k],
                          k >= 2 ? slope(k - 1) : 0.0,
                          k + 1 < n ? slope(k + 1) : 0.0});
    }
  }
  return events;
}

}  // namespace djc
