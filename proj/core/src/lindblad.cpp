#include "djc/lindblad.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace djc {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::vector<Complex>;
constexpr Complex kImag{0.0, 1.0};

// ---------------------------------------------------------------------------
// Embedded-factor multiplication.  Operators of the catalog act on a single
// tensor factor, so products with (I_L (x) X (x) I_R) never need the full
// dense GEMM.  `sparse` selects an entry-skipping path for ladder-type X.

// out = (I_L (x) X (x) I_R) * in
void mul_embedded_left(const Matrix& x, int L, int d, int R, const Matrix& in,
                       Matrix& out, bool sparse) {
  const int D = static_cast<int>(in.rows());
  const int cols = static_cast<int>(in.cols());
  out.resize(D, cols);
  if (R == 1 && !sparse) {
    for (int l = 0; l < L; ++l)
      out.middleRows(l * d, d).noalias() = x * in.middleRows(l * d, d);
    return;
  }
  if (L == 1 && !sparse) {
    // per-column contraction: column c viewed as (R x d), right-multiplied
    for (int c = 0; c < cols; ++c) {
      Eigen::Map<const Matrix> mc(in.col(c).data(), R, d);
      Eigen::Map<Matrix> oc(out.col(c).data(), R, d);
      oc.noalias() = mc * x.transpose();
    }
    return;
  }
  out.setZero();
  for (int l = 0; l < L; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Complex v = x(i, j);
        if (v == 0.0) continue;
        out.middleRows((l * d + i) * R, R).noalias() +=
            v * in.middleRows((l * d + j) * R, R);
      }
}

// out = in * (I_L (x) X (x) I_R)
void mul_embedded_right(const Matrix& x, int L, int d, int R, const Matrix& in,
                        Matrix& out, bool sparse) {
  const int rows = static_cast<int>(in.rows());
  const int D = static_cast<int>(in.cols());
  out.resize(rows, D);
  if (R == 1 && !sparse) {
    for (int l = 0; l < L; ++l)
      out.middleCols(l * d, d).noalias() = in.middleCols(l * d, d) * x;
    return;
  }
  if (L == 1 && !sparse) {
    // columns j*R+s for fixed s form a strided (rows x d) panel
    using StridedC = Eigen::Map<const Matrix, 0, Eigen::OuterStride<>>;
    using StridedM = Eigen::Map<Matrix, 0, Eigen::OuterStride<>>;
    for (int s = 0; s < R; ++s) {
      StridedC panel(in.data() + static_cast<std::ptrdiff_t>(s) * rows, rows, d,
                     Eigen::OuterStride<>(static_cast<std::ptrdiff_t>(R) * rows));
      StridedM opanel(out.data() + static_cast<std::ptrdiff_t>(s) * rows, rows,
                      d,
                      Eigen::OuterStride<>(static_cast<std::ptrdiff_t>(R) * rows));
      opanel.noalias() = panel * x;
    }
    return;
  }
  out.setZero();
  for (int l = 0; l < L; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        const Complex v = x(j, i);
        if (v == 0.0) continue;
        out.middleCols((l * d + i) * R, R).noalias() +=
            v * in.middleCols((l * d + j) * R, R);
      }
}

// H decomposed as left (x) I + I (x) right across one bipartition, which every
// pair-local model Hamiltonian admits.  Cuts the RHS from D^3 to ~D^2 work.
struct PairSplit {
  int m = 0, n = 0;
  Matrix left, right;
};

std::optional<PairSplit> detect_pair_split(const Matrix& h,
                                           const HilbertSpace& space) {
  const double scale = max_abs(h);
  if (scale == 0.0) return std::nullopt;
  const double tol = 1e-13 * scale;
  for (int k = 1; k < space.n_factors(); ++k) {
    int m = 1;
    for (int f = 0; f < k; ++f) m *= space.factors()[f].dim;
    const int n = space.total_dim() / m;
    Matrix a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        a(i, j) = h.block(i * n, j * n, n, n).trace() / double(n);
    Matrix e = h.block(0, 0, n, n) - a(0, 0) * Matrix::Identity(n, n);
    bool ok = true;
    for (int i = 0; ok && i < m; ++i)
      for (int j = 0; ok && j < m; ++j) {
        Matrix expect = a(i, j) * Matrix::Identity(n, n);
        if (i == j) expect += e;
        ok = max_abs(h.block(i * n, j * n, n, n) - expect) <= tol;
      }
    if (ok) return PairSplit{m, n, std::move(a), std::move(e)};
  }
  return std::nullopt;
}

struct FactorGeometry {
  int L, d, R;
};

FactorGeometry geometry(const HilbertSpace& space, Site site) {
  const int i = space.factor_index(site);
  return {space.left_dim(i), space.factors()[i].dim, space.right_dim(i)};
}

// Prebaked master-equation generator.
//   drho/dt = -i (Heff rho - rho Heff') + sum_n rate_n A_n rho A_n'
// with Heff = H - i/2 sum rate A'A.
class Generator {
 public:
  Generator(const Operator& h, const std::vector<CollapseTerm>& terms)
      : space_(h.space), dim_(h.dim()) {
    Matrix heff = h.mat;
    for (const auto& t : terms) {
      const auto g = geometry(space_, t.site);
      Matrix ada = (t.local_op.adjoint() * t.local_op).eval();
      Matrix emb;
      mul_embedded_left(ada, g.L, g.d, g.R,
                        Matrix::Identity(dim_, dim_), emb, true);
      heff -= 0.5 * kImag * t.rate * emb;
      sandwiches_.push_back({g, t.local_op, t.local_op.adjoint().eval(), t.rate});
    }
    split_ = detect_pair_split(heff, space_);
    if (!split_) heff_dense_ = std::move(heff);
  }

  int dim() const { return dim_; }

  void apply(const Matrix& rho, Matrix& out) const {
    if (split_) {
      mul_embedded_left(split_->left, 1, split_->m, split_->n, rho, m_, false);
      mul_embedded_left(split_->right, split_->m, split_->n, 1, rho, t_, false);
      m_ += t_;
    } else {
      m_.noalias() = heff_dense_ * rho;
    }
    out = -kImag * (m_ - m_.adjoint());
    for (const auto& s : sandwiches_) {
      mul_embedded_left(s.op, s.geo.L, s.geo.d, s.geo.R, rho, m_, true);
      mul_embedded_right(s.op_dag, s.geo.L, s.geo.d, s.geo.R, m_, t_, true);
      out.noalias() += s.rate * t_;
    }
  }

 private:
  struct Sandwich {
    FactorGeometry geo;
    Matrix op, op_dag;
    double rate;
  };
  HilbertSpace space_;
  int dim_;
  std::optional<PairSplit> split_;
  Matrix heff_dense_;
  std::vector<Sandwich> sandwiches_;
  mutable Matrix m_, t_;  // scratch
};

// Rank-1 extraction: rho = psi psi' within tight tolerance, or nothing.
std::optional<Vector> extract_pure_state(const Matrix& rho) {
  const int d = static_cast<int>(rho.rows());
  int k = 0;
  double best = 0.0;
  for (int i = 0; i < d; ++i) {
    const double p = rho(i, i).real();
    if (p > best) {
      best = p;
      k = i;
    }
  }
  if (best <= 0.0) return std::nullopt;
  Vector psi = rho.col(k) / std::sqrt(best);
  // fix global phase so psi(k) is real positive
  psi *= std::conj(psi(k)) / std::abs(psi(k));
  if (max_abs(rho - psi * psi.adjoint()) > 1e-12) return std::nullopt;
  return psi;
}

struct TailAccumulator {
  // population of the two highest Fock levels, tracked per cavity factor
  struct Band {
    Site site;
    FactorGeometry geo;
  };
  std::vector<Band> bands;

  explicit TailAccumulator(const HilbertSpace& space) {
    for (const auto& f : space.factors())
      if (f.label == Site::CavA || f.label == Site::CavB)
        bands.push_back({f.label, geometry(space, f.label)});
  }

  // worst cavity band population of the given state
  template <typename DiagFn>
  double worst(DiagFn&& population_at) const {
    double worst_val = 0.0;
    for (const auto& b : bands) {
      double p = 0.0;
      for (int lvl = b.geo.d - 2; lvl < b.geo.d; ++lvl)
        for (int l = 0; l < b.geo.L; ++l)
          for (int r = 0; r < b.geo.R; ++r)
            p += population_at((l * b.geo.d + lvl) * b.geo.R + r);
      worst_val = std::max(worst_val, p);
    }
    return worst_val;
  }
};

int suggested_cutoff_after(const HilbertSpace& space) {
  int worst = 0;
  for (const auto& f : space.factors())
    if (f.label == Site::CavA || f.label == Site::CavB)
      worst = std::max(worst, f.dim);
  return worst * 2;
}

[[noreturn]] void throw_tail_error(double tail, const HilbertSpace& space,
                                   double t) {
  const int suggestion = suggested_cutoff_after(space);
  std::ostringstream os;
  os << "Fock truncation band populated at t=" << t << ": top-2 level mass "
     << tail << " exceeds tolerance; raise the cavity cutoff (try "
     << suggestion << ")";
  throw TruncationError(os.str(), tail, suggestion);
}

}  // namespace

void NoiseRates::check() const {
  for (double r : {kappa_a, kappa_b, gamma_a, gamma_b, gamma_phi_a, gamma_phi_b,
                   n_th})
    if (r < 0.0) throw ValidationError("noise rates and n_th must be >= 0");
}

bool NoiseRates::any_nonzero() const {
  return kappa_a > 0 || kappa_b > 0 || gamma_a > 0 || gamma_b > 0 ||
         gamma_phi_a > 0 || gamma_phi_b > 0;
}

bool NoiseRates::thermal_active() const {
  return n_th > 0 && (kappa_a > 0 || kappa_b > 0);
}

CollapseTerm make_collapse_term(const Matrix& local_op, Site site, double rate,
                                const HilbertSpace& space) {
  if (rate < 0.0) throw ValidationError("collapse rate must be >= 0");
  Operator emb = embed(local_op, site, space);
  Matrix c = std::sqrt(rate) * emb.mat;
  return CollapseTerm{site, local_op, rate, std::move(emb), std::move(c)};
}

std::vector<CollapseTerm> collapse_catalog(const NoiseRates& rates,
                                           const HilbertSpace& space) {
  rates.check();
  const QubitOps q = qubit_ops();
  std::vector<CollapseTerm> terms;
  const auto add = [&](const Matrix& op, Site site, double rate) {
    if (rate > 0.0) terms.push_back(make_collapse_term(op, site, rate, space));
  };
  struct Pair {
    Site atom, cav;
    double kappa, gamma, gamma_phi;
  };
  std::vector<Pair> pairs = {
      {Site::AtomA, Site::CavA, rates.kappa_a, rates.gamma_a, rates.gamma_phi_a}};
  if (space.is_canonical_double_jc())
    pairs.push_back({Site::AtomB, Site::CavB, rates.kappa_b, rates.gamma_b,
                     rates.gamma_phi_b});
  for (const auto& p : pairs) {
    const Matrix a = fock_destroy(space.dim(p.cav));
    add(a, p.cav, p.kappa * (1.0 + rates.n_th));
    add(a.adjoint(), p.cav, p.kappa * rates.n_th);
    add(q.minus, p.atom, p.gamma);
    add(q.z, p.atom, p.gamma_phi);
  }
  return terms;
}

void TimeGrid::check() const {
  if (t_end <= 0.0) throw ValidationError("grid t_end must be > 0");
  if (n_samples < 2) throw ValidationError("grid needs n_samples >= 2");
  if (rtol <= 0.0 || atol <= 0.0)
    throw ValidationError("integrator tolerances must be > 0");
}

std::vector<double> TimeGrid::sample_times() const {
  std::vector<double> ts(n_samples);
  const double t1 = t_end_raw();
  for (int i = 0; i < n_samples; ++i)
    ts[i] = t1 * double(i) / double(n_samples - 1);
  return ts;
}

Matrix rhs(const Operator& h, const std::vector<CollapseTerm>& terms,
           const Matrix& rho) {
  if (rho.rows() != h.dim() || rho.cols() != h.dim())
    throw LayoutError("rhs: state shape does not match Hamiltonian");
  Matrix out = -kImag * (h.mat * rho - rho * h.mat);
  for (const auto& t : terms) {
    const Matrix& c = t.c_full;
    const Matrix cdc = (c.adjoint() * c).eval();
    out += c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
  }
  return out;
}

namespace {

struct EvolveContext {
  const HilbertSpace& space;
  const TimeGrid& grid;
  const EvolveOptions& opts;
  const SampleObserver& obs;
  TailAccumulator tails;
  Diagnostics diag;
  int eig_cadence = 1;

  EvolveContext(const HilbertSpace& s, const TimeGrid& g,
                const EvolveOptions& o, const SampleObserver& cb)
      : space(s), grid(g), opts(o), obs(cb), tails(s) {
    diag.min_eigenvalue = 1.0;
    eig_cadence = std::max(1, g.n_samples / 16);
  }

  void check_tail(double tail, double t) {
    diag.max_tail = std::max(diag.max_tail, tail);
    if (opts.check_tail && tail > opts.tail_tol)
      throw_tail_error(tail, space, t);
  }

  void check_trace(double dev, double t) {
    diag.max_trace_dev = std::max(diag.max_trace_dev, dev);
    if (dev > opts.trace_tol) {
      std::ostringstream os;
      os << "trace deviation " << dev << " at t=" << t
         << " exceeds tolerance; tighten rtol/atol";
      throw ValidationError(os.str());
    }
  }
};

void observe_matrix_sample(EvolveContext& cx, const Matrix& raw, double t,
                           int index) {
  static thread_local Matrix sym;
  sym = 0.5 * (raw + raw.adjoint());
  cx.diag.max_herm_dev =
      std::max(cx.diag.max_herm_dev, max_abs(raw - raw.adjoint()));
  cx.check_trace(std::abs(sym.trace().real() - 1.0) +
                     std::abs(sym.trace().imag()),
                 t);
  cx.check_tail(
      cx.tails.worst([&](int i) { return sym(i, i).real(); }), t);

  const int d = static_cast<int>(sym.rows());
  const bool exact_here = d <= cx.opts.exact_eig_max_dim ||
                          index % cx.eig_cadence == 0 ||
                          index == cx.grid.n_samples - 1;
  if (exact_here) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    cx.diag.min_eigenvalue =
        std::min(cx.diag.min_eigenvalue, es.eigenvalues().minCoeff());
  } else {
    // certify min eig > -eig_floor without the full spectrum
    Eigen::LLT<Matrix> llt(
        (sym + (cx.opts.eig_floor * 1.0) * Matrix::Identity(d, d)).eval());
    if (llt.info() != Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
      cx.diag.min_eigenvalue =
          std::min(cx.diag.min_eigenvalue, es.eigenvalues().minCoeff());
    }
  }
  if (cx.diag.min_eigenvalue < -cx.opts.eig_floor) {
    std::ostringstream os;
    os << "state positivity violated (min eigenvalue "
       << cx.diag.min_eigenvalue << ") at t=" << t
       << "; tighten rtol/atol";
    throw ValidationError(os.str());
  }
  Sample s{t, index, &sym, nullptr};
  if (cx.obs) cx.obs(s);
}

void observe_pure_sample(EvolveContext& cx, const Vector& psi, double t,
                         int index) {
  cx.check_trace(std::abs(psi.squaredNorm() - 1.0), t);
  cx.check_tail(cx.tails.worst([&](int i) { return std::norm(psi(i)); }), t);
  cx.diag.min_eigenvalue = std::min(cx.diag.min_eigenvalue, 0.0);
  Sample s{t, index, nullptr, &psi};
  if (cx.obs) cx.obs(s);
}

}  // namespace

Diagnostics evolve_observe(const Operator& h,
                           const std::vector<CollapseTerm>& terms,
                           const DensityMatrix& rho0, const TimeGrid& grid,
                           const EvolveOptions& opts,
                           const SampleObserver& obs) {
  grid.check();
  if (rho0.space != h.space)
    throw LayoutError("evolve: state and Hamiltonian live on different spaces");
  for (const auto& t : terms)
    if (t.op.space != h.space)
      throw LayoutError("evolve: collapse term on a different space");

  const int d = h.dim();
  const std::vector<double> times = grid.sample_times();
  EvolveContext cx(h.space, grid, opts, obs);

  const auto run = [&](auto&& system, State& state, auto&& observer) {
    auto stepper =
        ode::make_controlled<ode::runge_kutta_dopri5<State>>(grid.atol,
                                                             grid.rtol);
    try {
      size_t steps = ode::integrate_times(
          stepper, system, state, times.begin(), times.end(),
          (times[1] - times[0]) / 10.0, observer, ode::max_step_checker(10000));
      cx.diag.n_steps = static_cast<long>(steps);
    } catch (const std::overflow_error&) {
      throw StiffnessError(
          "integrator step count exploded (stiff system or step-size "
          "underflow); loosen tolerances or rescale the problem");
    } catch (const std::runtime_error& e) {
      // odeint signals controlled-step failure as runtime_error
      if (std::string(e.what()).find("Max number of iterations") !=
          std::string::npos)
        throw StiffnessError(e.what());
      throw;
    }
  };

  std::optional<Vector> psi0;
  if (terms.empty()) psi0 = extract_pure_state(rho0.mat);

  if (psi0) {
    cx.diag.pure_path = true;
    State state(d);
    Eigen::Map<Vector>(state.data(), d) = *psi0;
    int index = 0;
    const Matrix& hm = h.mat;
    auto system = [&](const State& x, State& dxdt, double) {
      Eigen::Map<const Vector> p(x.data(), d);
      Eigen::Map<Vector> out(dxdt.data(), d);
      out.noalias() = hm * p;
      out *= -kImag;
    };
    auto observer = [&](const State& x, double t) {
      Eigen::Map<const Vector> p(x.data(), d);
      observe_pure_sample(cx, Vector(p), t, index++);
    };
    run(system, state, observer);
    return cx.diag;
  }

  Generator gen(h, terms);
  State state(static_cast<size_t>(d) * d);
  Eigen::Map<Matrix>(state.data(), d, d) = rho0.mat;
  int index = 0;
  auto system = [&](const State& x, State& dxdt, double) {
    Eigen::Map<const Matrix> rho(x.data(), d, d);
    static thread_local Matrix out;
    gen.apply(rho, out);
    Eigen::Map<Matrix>(dxdt.data(), d, d) = out;
  };
  auto observer = [&](const State& x, double t) {
    Eigen::Map<const Matrix> rho(x.data(), d, d);
    observe_matrix_sample(cx, rho, t, index++);
  };
  run(system, state, observer);
  return cx.diag;
}

Trajectory evolve(const Operator& h, const std::vector<CollapseTerm>& terms,
                  const DensityMatrix& rho0, const TimeGrid& grid,
                  const EvolveOptions& opts) {
  Trajectory traj;
  traj.times = grid.sample_times();
  traj.states.reserve(grid.n_samples);
  traj.diagnostics = evolve_observe(
      h, terms, rho0, grid, opts, [&](const Sample& s) {
        if (s.rho)
          traj.states.push_back(DensityMatrix{h.space, *s.rho});
        else
          traj.states.push_back(DensityMatrix{h.space, *s.psi * s.psi->adjoint()});
      });
  return traj;
}

DensityMatrix expm_oracle(const Operator& h,
                          const std::vector<CollapseTerm>& terms,
                          const DensityMatrix& rho0, double t) {
  const int d = h.dim();
  if (d > 64)
    throw DimensionError(
        "expm_oracle is limited to total dimension <= 64 (vectorized "
        "generator <= 4096^2)");
  if (rho0.space != h.space)
    throw LayoutError("expm_oracle: state and Hamiltonian spaces differ");
  const Matrix id = Matrix::Identity(d, d);
  // column-stacking convention: vec(A X B) = (B^T (x) A) vec(X)
  Matrix liouv =
      -kImag * (Eigen::kroneckerProduct(id, h.mat).eval() -
                Eigen::kroneckerProduct(h.mat.transpose(), id).eval());
  for (const auto& term : terms) {
    const Matrix& c = term.c_full;
    const Matrix cdc = (c.adjoint() * c).eval();
    liouv += Eigen::kroneckerProduct(c.conjugate(), c).eval();
    liouv -= 0.5 * Eigen::kroneckerProduct(id, cdc).eval();
    liouv -= 0.5 * Eigen::kroneckerProduct(cdc.transpose(), id).eval();
  }
  const Matrix prop = (liouv * t).exp();
  Eigen::Map<const Vector> v0(rho0.mat.data(), static_cast<Eigen::Index>(d) * d);
  Vector vt = prop * v0;
  Matrix rho_t = Eigen::Map<Matrix>(vt.data(), d, d);
  return DensityMatrix{h.space, std::move(rho_t)};
}

}  // namespace djc
