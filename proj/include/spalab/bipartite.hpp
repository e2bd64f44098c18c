#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <utility>

namespace spalab {

// Default tolerances for the dense Hermitian kernel. Every check that uses
// one also takes an override argument.
namespace tol {
inline constexpr double hermiticity_reject = 1e-9;
inline constexpr double psd = 1e-9;
inline constexpr double rank_rel = 1e-7;
inline constexpr double unit_norm = 1e-12;
}  // namespace tol

template <typename Scalar>
using ComplexMatrix =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Hermitian matrix acting on an m (x) n tensor product. Rows and columns
/// are addressed by the composite index (i,k) -> i*n + k; entries are kept
/// row-major. Construction symmetrizes (M + M^dag)/2 and rejects inputs whose
/// anti-Hermitian part is larger than `reject_tol`.
template <typename Scalar>
class BipartiteMatrix {
 public:
  using Complex = std::complex<Scalar>;
  using Dense = ComplexMatrix<Scalar>;

  BipartiteMatrix(Eigen::Index dim_a, Eigen::Index dim_b, const Dense& raw,
                  Scalar reject_tol = Scalar(tol::hermiticity_reject))
      : dim_a_(dim_a), dim_b_(dim_b) {
    if (dim_a < 1 || dim_b < 1)
      throw std::invalid_argument("BipartiteMatrix: factor dimensions must be positive");
    const Eigen::Index d = dim_a * dim_b;
    if (raw.rows() != d || raw.cols() != d)
      throw std::invalid_argument("BipartiteMatrix: matrix must be dim_a*dim_b square");
    if (!raw.allFinite())
      throw std::invalid_argument("BipartiteMatrix: non-finite entry");
    const Scalar skew = ((raw - raw.adjoint()).cwiseAbs().maxCoeff()) / Scalar(2);
    if (!(skew <= reject_tol))
      throw std::invalid_argument("BipartiteMatrix: anti-Hermitian part exceeds tolerance");
    entries_ = ((raw + raw.adjoint()) / Scalar(2)).eval();
  }

  Eigen::Index dim_a() const { return dim_a_; }
  Eigen::Index dim_b() const { return dim_b_; }
  Eigen::Index size() const { return dim_a_ * dim_b_; }
  const Dense& entries() const { return entries_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

 private:
  Eigen::Index dim_a_, dim_b_;
  Dense entries_;
};

template <typename Scalar = double>
BipartiteMatrix<Scalar> identity(Eigen::Index m, Eigen::Index n) {
  const Eigen::Index d = m * n;
  return BipartiteMatrix<Scalar>(m, n, ComplexMatrix<Scalar>::Identity(d, d));
}

/// Kronecker product of two square Hermitian blocks, A on the first factor.
template <typename DerivedA, typename DerivedB>
auto tensor(const Eigen::MatrixBase<DerivedA>& A, const Eigen::MatrixBase<DerivedB>& B) {
  using Scalar = typename Eigen::NumTraits<typename DerivedA::Scalar>::Real;
  using Complex = std::complex<Scalar>;
  if (A.rows() != A.cols() || B.rows() != B.cols())
    throw std::invalid_argument("tensor: factors must be square");
  const Eigen::Index m = A.rows(), n = B.rows();
  ComplexMatrix<Scalar> out(m * n, m * n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
          out(i * n + k, j * n + l) = static_cast<Complex>(A(i, j)) * static_cast<Complex>(B(k, l));
  return BipartiteMatrix<Scalar>(m, n, out);
}

/// Transpose on the second tensor factor: ((i,k),(j,l)) -> ((i,l),(j,k)).
/// An exact entry permutation, so applying it twice restores the input
/// bit for bit.
template <typename Scalar>
BipartiteMatrix<Scalar> partial_transpose(const BipartiteMatrix<Scalar>& M) {
  const Eigen::Index m = M.dim_a(), n = M.dim_b();
  ComplexMatrix<Scalar> out(M.size(), M.size());
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
          out(i * n + k, j * n + l) = M(i * n + l, j * n + k);
  return BipartiteMatrix<Scalar>(m, n, out);
}

template <typename Scalar>
struct Spectrum {
  RealVector<Scalar> eigenvalues;  // ascending
};

template <typename Scalar>
Spectrum<Scalar> spectrum(const BipartiteMatrix<Scalar>& M) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> es(M.entries(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spectrum: eigensolver did not converge");
  return Spectrum<Scalar>{es.eigenvalues()};
}

template <typename Scalar>
struct EigenSystem {
  RealVector<Scalar> values;    // ascending
  ComplexMatrix<Scalar> vectors;  // columns, matching order
};

template <typename Scalar>
EigenSystem<Scalar> eigen_system(const BipartiteMatrix<Scalar>& M) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> es(M.entries());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigen_system: eigensolver did not converge");
  return EigenSystem<Scalar>{es.eigenvalues(), es.eigenvectors()};
}

template <typename Scalar>
Scalar min_eigenvalue(const BipartiteMatrix<Scalar>& M) {
  return spectrum(M).eigenvalues(0);
}

template <typename Scalar>
bool is_psd(const BipartiteMatrix<Scalar>& M, Scalar tol = Scalar(tol::psd)) {
  return min_eigenvalue(M) >= -tol;
}

/// Count of eigenvalues above `rel_tol` times the largest magnitude.
template <typename Scalar>
int numerical_rank(const BipartiteMatrix<Scalar>& M, Scalar rel_tol = Scalar(tol::rank_rel)) {
  const auto ev = spectrum(M).eigenvalues;
  const Scalar amax = ev.cwiseAbs().maxCoeff();
  if (amax == Scalar(0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > rel_tol * amax) ++rank;
  return rank;
}

/// Tr(A B). Real for Hermitian arguments; the rounding-level imaginary
/// residue is discarded.
template <typename Scalar>
Scalar trace_pairing(const BipartiteMatrix<Scalar>& A, const BipartiteMatrix<Scalar>& B) {
  if (A.dim_a() != B.dim_a() || A.dim_b() != B.dim_b())
    throw std::invalid_argument("trace_pairing: dimension mismatch");
  return (A.entries() * B.entries()).trace().real();
}

template <typename Scalar>
ComplexVector<Scalar> tensor_vector(const ComplexVector<Scalar>& phi,
                                    const ComplexVector<Scalar>& psi) {
  ComplexVector<Scalar> out(phi.size() * psi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    for (Eigen::Index k = 0; k < psi.size(); ++k)
      out(i * psi.size() + k) = phi(i) * psi(k);
  return out;
}

/// <phi (x) psi | M | phi (x) psi> for unit vectors.
template <typename Scalar>
Scalar product_expectation(const BipartiteMatrix<Scalar>& M, const ComplexVector<Scalar>& phi,
                           const ComplexVector<Scalar>& psi,
                           Scalar norm_tol = Scalar(tol::unit_norm)) {
  if (phi.size() != M.dim_a() || psi.size() != M.dim_b())
    throw std::invalid_argument("product_expectation: vector dimensions do not match");
  if (std::abs(phi.norm() - Scalar(1)) > norm_tol || std::abs(psi.norm() - Scalar(1)) > norm_tol)
    throw std::invalid_argument("product_expectation: vectors must be unit norm");
  const ComplexVector<Scalar> x = tensor_vector(phi, psi);
  return x.dot(M.entries() * x).real();
}

}  // namespace spalab
