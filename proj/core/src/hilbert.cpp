#include "djc/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace djc {

const char* site_name(Site s) {
  switch (s) {
    case Site::AtomA: return "AtomA";
    case Site::CavA: return "CavA";
    case Site::AtomB: return "AtomB";
    case Site::CavB: return "CavB";
  }
  return "?";
}

HilbertSpace::HilbertSpace(std::vector<FactorInfo> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) throw LayoutError("HilbertSpace needs at least one factor");
  total_dim_ = 1;
  for (const auto& f : factors_) {
    const bool is_atom = f.label == Site::AtomA || f.label == Site::AtomB;
    if (is_atom && f.dim != 2)
      throw LayoutError(std::string("atom factor ") + site_name(f.label) +
                        " must have dim 2");
    if (!is_atom && f.dim < 2)
      throw DimensionError(std::string("cavity factor ") + site_name(f.label) +
                           " needs Fock cutoff >= 2");
    for (const auto& g : factors_)
      if (&f != &g && f.label == g.label)
        throw LayoutError(std::string("duplicate factor ") + site_name(f.label));
    total_dim_ *= f.dim;
  }
}

HilbertSpace HilbertSpace::double_jc(int fock_a, int fock_b) {
  return HilbertSpace({{Site::AtomA, 2},
                       {Site::CavA, fock_a},
                       {Site::AtomB, 2},
                       {Site::CavB, fock_b}});
}

HilbertSpace HilbertSpace::single_jc(int fock) {
  return HilbertSpace({{Site::AtomA, 2}, {Site::CavA, fock}});
}

int HilbertSpace::factor_index(Site s) const {
  for (int i = 0; i < n_factors(); ++i)
    if (factors_[i].label == s) return i;
  throw LayoutError(std::string("no factor labeled ") + site_name(s));
}

int HilbertSpace::left_dim(int i) const {
  int d = 1;
  for (int k = 0; k < i; ++k) d *= factors_[k].dim;
  return d;
}

int HilbertSpace::right_dim(int i) const {
  int d = 1;
  for (int k = i + 1; k < n_factors(); ++k) d *= factors_[k].dim;
  return d;
}

bool HilbertSpace::is_canonical_double_jc() const {
  return n_factors() == 4 && factors_[0].label == Site::AtomA &&
         factors_[1].label == Site::CavA && factors_[2].label == Site::AtomB &&
         factors_[3].label == Site::CavB;
}

bool HilbertSpace::operator==(const HilbertSpace& o) const {
  if (factors_.size() != o.factors_.size()) return false;
  for (size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label != o.factors_[i].label ||
        factors_[i].dim != o.factors_[i].dim)
      return false;
  return true;
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol,
                             bool check_eigenvalues) const {
  if (mat.rows() != mat.cols() || mat.rows() != space.total_dim())
    throw LayoutError("density matrix shape does not match its space");
  if (max_abs(mat - mat.adjoint()) > herm_tol)
    throw ValidationError("density matrix is not Hermitian within tolerance");
  if (std::abs(mat.trace().real() - 1.0) > trace_tol ||
      std::abs(mat.trace().imag()) > trace_tol)
    throw ValidationError("density matrix trace deviates from 1");
  if (check_eigenvalues) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -eig_tol)
      throw ValidationError("density matrix has a negative eigenvalue");
  }
}

Matrix fock_destroy(int dim) {
  if (dim < 2) throw DimensionError("fock_destroy needs dim >= 2");
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

QubitOps qubit_ops() {
  QubitOps q;
  q.plus = Matrix::Zero(2, 2);
  q.plus(0, 1) = 1.0;
  q.minus = q.plus.adjoint();
  q.z = Matrix::Zero(2, 2);
  q.z(0, 0) = 1.0;
  q.z(1, 1) = -1.0;
  return q;
}

Operator tensor(const HilbertSpace& space, std::span<const Matrix> factors) {
  if (static_cast<int>(factors.size()) != space.n_factors())
    throw LayoutError("tensor: factor count does not match space");
  for (int i = 0; i < space.n_factors(); ++i)
    if (factors[i].rows() != space.factors()[i].dim ||
        factors[i].cols() != space.factors()[i].dim) {
      std::ostringstream os;
      os << "tensor: factor " << i << " is " << factors[i].rows() << "x"
         << factors[i].cols() << ", expected dim " << space.factors()[i].dim;
      throw LayoutError(os.str());
    }
  Matrix out = factors[0];
  for (size_t i = 1; i < factors.size(); ++i) {
    const Matrix& b = factors[i];
    Matrix next(out.rows() * b.rows(), out.cols() * b.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c)
        next.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) =
            out(r, c) * b;
    out = std::move(next);
  }
  return Operator{space, std::move(out)};
}

Operator embed(const Matrix& op, Site site, const HilbertSpace& space) {
  const int i = space.factor_index(site);
  const int d = space.factors()[i].dim;
  if (op.rows() != d || op.cols() != d) {
    std::ostringstream os;
    os << "embed: operator is " << op.rows() << "x" << op.cols() << " but "
       << site_name(site) << " has dim " << d;
    throw DimensionError(os.str());
  }
  std::vector<Matrix> fs;
  fs.reserve(space.n_factors());
  for (int k = 0; k < space.n_factors(); ++k)
    fs.push_back(k == i ? op : Matrix::Identity(space.factors()[k].dim,
                                                space.factors()[k].dim));
  return tensor(space, fs);
}

Operator identity(const HilbertSpace& space) {
  return Operator{space, Matrix::Identity(space.total_dim(), space.total_dim())};
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_hermitian(const Matrix& h, double rel_tol, const char* what) {
  const double scale = max_abs(h);
  if (scale == 0.0) return;
  if (max_abs(h - h.adjoint()) > rel_tol * scale)
    throw ValidationError(std::string(what) + " is not Hermitian");
}

}  // namespace djc
