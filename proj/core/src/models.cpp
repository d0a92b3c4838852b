#include "djc/models.hpp"

#include <cmath>
#include <sstream>

namespace djc {

namespace {

void require_canonical(const HilbertSpace& space, const char* who) {
  if (!space.is_canonical_double_jc())
    throw LayoutError(std::string(who) +
                      " needs the canonical (AtomA, CavA, AtomB, CavB) layout");
}

Matrix matrix_power(const Matrix& m, int n) {
  Matrix out = Matrix::Identity(m.rows(), m.cols());
  for (int k = 0; k < n; ++k) out = (out * m).eval();
  return out;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

void ModelParams::check() const {
  if (g_b <= 0) throw ValidationError("g_b must be positive (reference scale)");
  if (g_a < 0) throw ValidationError("g_a must be nonnegative");
  if (n_photon < 1) throw ValidationError("n_photon must be >= 1");
}

bool ModelParams::linear_resonant(double tol) const {
  return std::abs(omega0 - omega) <= tol;
}

bool ModelParams::multiphoton_resonant(double tol) const {
  return std::abs(omega0 - n_photon * omega) <= tol;
}

void DriveParams::check() const {
  if (epsilon < 0) throw ValidationError("drive epsilon must be nonnegative");
  if (m_order < 1) throw ValidationError("drive m_order must be >= 1");
}

Operator build_double_jc(const ModelParams& p, const HilbertSpace& space) {
  ModelParams lin = p;
  lin.n_photon = 1;
  return build_multiphoton_double_jc(lin, space);
}

Operator build_multiphoton_double_jc(const ModelParams& p,
                                     const HilbertSpace& space) {
  p.check();
  require_canonical(space, "build_multiphoton_double_jc");
  const int N = p.n_photon;
  for (Site cav : {Site::CavA, Site::CavB})
    if (space.dim(cav) < N + 1) {
      std::ostringstream os;
      os << "Fock cutoff " << space.dim(cav) << " on " << site_name(cav)
         << " cannot represent an " << N << "-photon transition; need >= "
         << N + 1;
      throw TruncationError(os.str(), 1.0, N + 2);
    }

  const QubitOps q = qubit_ops();
  const Matrix a = fock_destroy(space.dim(Site::CavA));
  const Matrix b = fock_destroy(space.dim(Site::CavB));
  const Matrix aN = matrix_power(a, N);
  const Matrix bN = matrix_power(b, N);

  Matrix h = 0.5 * p.omega0 * embed(q.z, Site::AtomA, space).mat;
  h += p.omega * embed((a.adjoint() * a).eval(), Site::CavA, space).mat;
  h += p.g_a * (embed(q.plus, Site::AtomA, space).mat *
                    embed(aN, Site::CavA, space).mat +
                embed(q.minus, Site::AtomA, space).mat *
                    embed(aN.adjoint().eval(), Site::CavA, space).mat);
  h += 0.5 * p.omega0 * embed(q.z, Site::AtomB, space).mat;
  h += p.omega * embed((b.adjoint() * b).eval(), Site::CavB, space).mat;
  h += p.g_b * (embed(q.plus, Site::AtomB, space).mat *
                    embed(bN, Site::CavB, space).mat +
                embed(q.minus, Site::AtomB, space).mat *
                    embed(bN.adjoint().eval(), Site::CavB, space).mat);

  require_hermitian(h, 1e-12, "double JC Hamiltonian");
  return Operator{space, std::move(h)};
}

Operator build_driven_double_jc(const ModelParams& p, const DriveParams& d,
                                const HilbertSpace& space) {
  p.check();
  d.check();
  require_canonical(space, "build_driven_double_jc");
  const int N = p.n_photon;
  const int M = d.m_order;
  for (Site cav : {Site::CavA, Site::CavB})
    if (space.dim(cav) < std::max(N, M) + 1) {
      std::ostringstream os;
      os << "Fock cutoff " << space.dim(cav) << " on " << site_name(cav)
         << " too small for a^" << std::max(N, M);
      throw TruncationError(os.str(), 1.0, std::max(N, M) + 2);
    }

  const QubitOps q = qubit_ops();
  const Complex drive_amp = d.epsilon * std::exp(Complex(0.0, -d.chi));

  Matrix h = Matrix::Zero(space.total_dim(), space.total_dim());
  struct Pair {
    Site atom, cav;
    double g;
  };
  for (const Pair& pr : {Pair{Site::AtomA, Site::CavA, p.g_a},
                         Pair{Site::AtomB, Site::CavB, p.g_b}}) {
    const Matrix a = fock_destroy(space.dim(pr.cav));
    const Matrix aN = matrix_power(a, N);
    const Matrix aM = matrix_power(a, M);
    const Matrix nhat = (a.adjoint() * a).eval();

    h += d.delta_p * embed(nhat, pr.cav, space).mat;
    h += d.delta_p * (N * 0.5) * embed(q.z, pr.atom, space).mat;
    Matrix half = drive_amp * embed(aM, pr.cav, space).mat;
    half += pr.g * embed(q.plus, pr.atom, space).mat *
            embed(aN, pr.cav, space).mat;
    h += half + half.adjoint();
  }

  require_hermitian(h, 1e-12, "driven double JC Hamiltonian");
  return Operator{space, std::move(h)};
}

Operator excitation_operator(const ModelParams& p, const HilbertSpace& space) {
  require_canonical(space, "excitation_operator");
  const QubitOps q = qubit_ops();
  const Matrix a = fock_destroy(space.dim(Site::CavA));
  const Matrix b = fock_destroy(space.dim(Site::CavB));
  Matrix n = double(p.n_photon) *
             (embed((q.plus * q.minus).eval(), Site::AtomA, space).mat +
              embed((q.plus * q.minus).eval(), Site::AtomB, space).mat);
  n += embed((a.adjoint() * a).eval(), Site::CavA, space).mat;
  n += embed((b.adjoint() * b).eval(), Site::CavB, space).mat;
  return Operator{space, std::move(n)};
}

ModelParams apply_disorder(const ModelParams& p, double delta_a,
                           double delta_b) {
  ModelParams out = p;
  out.g_a = p.g_a * (1.0 + delta_a);
  out.g_b = p.g_b * (1.0 + delta_b);
  return out;
}

double resonant_delta_p(const ModelParams& p, int m_order, bool plus_branch) {
  if (m_order < p.n_photon) return 0.0;
  // N omega_P = N omega +- g sqrt(N!)  =>  Delta_P = -+ g sqrt(N!) / N
  const double shift =
      p.g_b * std::sqrt(factorial(p.n_photon)) / double(p.n_photon);
  return plus_branch ? -shift : shift;
}

Vector initial_state_vector(const InitialStateSpec& spec,
                            const HilbertSpace& space) {
  require_canonical(space, "initial_state");
  const int na = space.dim(Site::CavA);
  const int nb = space.dim(Site::CavB);
  const auto idx = [&](int atom_a, int atom_b) {
    return ((atom_a * na + 0) * 2 + atom_b) * nb + 0;  // cavities in vacuum
  };
  Vector psi = Vector::Zero(space.total_dim());
  // atom basis: |e> = 0, |l> = 1
  if (spec.which == InitialCase::NoSuddenDeath) {
    psi(idx(1, 0)) = std::sin(spec.alpha);
    psi(idx(0, 1)) = std::cos(spec.alpha);
  } else {
    psi(idx(1, 1)) = std::sin(spec.alpha);
    psi(idx(0, 0)) = std::cos(spec.alpha);
  }
  if (std::abs(psi.norm() - 1.0) > 1e-12)
    throw ValidationError("initial state vector is not normalized");
  return psi;
}

DensityMatrix initial_state(const InitialStateSpec& spec,
                            const HilbertSpace& space) {
  const Vector psi = initial_state_vector(spec, space);
  return DensityMatrix{space, psi * psi.adjoint()};
}

}  // namespace djc
