#pragma once

#include "spalab/bipartite.hpp"
#include "spalab/threading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace spalab {

/// Splitmix-style stream split: restart i draws from its own generator, so
/// outcomes do not depend on scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t idx) {
  std::uint64_t z = seed + std::uint64_t(0x9E3779B97F4A7C15) * (idx + 1);
  z = (z ^ (z >> 30)) * std::uint64_t(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * std::uint64_t(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

template <typename Scalar, typename Rng>
ComplexVector<Scalar> random_unit_vector(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<Scalar> gauss(Scalar(0), Scalar(1));
  ComplexVector<Scalar> v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Scalar re = gauss(rng);
    const Scalar im = gauss(rng);
    v(i) = std::complex<Scalar>(re, im);
  }
  v.normalize();
  return v;
}

/// Unit product vector phi (x) psi with the global phase of each factor
/// fixed: the first component of visible magnitude is made real and
/// nonnegative, so equal rays compare equal entrywise.
template <typename Scalar>
struct ProductVector {
  ComplexVector<Scalar> phi, psi;

  ProductVector(ComplexVector<Scalar> phi_, ComplexVector<Scalar> psi_,
                Scalar norm_tol = Scalar(tol::unit_norm))
      : phi(std::move(phi_)), psi(std::move(psi_)) {
    if (std::abs(phi.norm() - Scalar(1)) > norm_tol ||
        std::abs(psi.norm() - Scalar(1)) > norm_tol)
      throw std::invalid_argument("ProductVector: factors must be unit norm");
    fix_phase(phi);
    fix_phase(psi);
  }

  ComplexVector<Scalar> tensor() const { return tensor_vector(phi, psi); }

 private:
  static void fix_phase(ComplexVector<Scalar>& v) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const Scalar mag = std::abs(v(k));
      if (mag > Scalar(1e-14)) {
        v *= std::conj(v(k)) / mag;
        v(k) = std::complex<Scalar>(std::abs(v(k)), Scalar(0));
        return;
      }
    }
  }
};

/// A(i,j) = sum_{k,l} conj(psi_k) M((i,k),(j,l)) psi_l; the operator seen by
/// the first factor once the second is pinned to psi.
template <typename Scalar>
ComplexMatrix<Scalar> contract_second(const BipartiteMatrix<Scalar>& M,
                                      const ComplexVector<Scalar>& psi) {
  const Eigen::Index m = M.dim_a(), n = M.dim_b();
  ComplexMatrix<Scalar> A = ComplexMatrix<Scalar>::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
          A(i, j) += std::conj(psi(k)) * M(i * n + k, j * n + l) * psi(l);
  return A;
}

/// B(k,l) = sum_{i,j} conj(phi_i) M((i,k),(j,l)) phi_j.
template <typename Scalar>
ComplexMatrix<Scalar> contract_first(const BipartiteMatrix<Scalar>& M,
                                     const ComplexVector<Scalar>& phi) {
  const Eigen::Index m = M.dim_a(), n = M.dim_b();
  ComplexMatrix<Scalar> B = ComplexMatrix<Scalar>::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          B(k, l) += std::conj(phi(i)) * M(i * n + k, j * n + l) * phi(j);
  return B;
}

namespace detail {

template <typename Scalar>
std::pair<Scalar, ComplexVector<Scalar>> min_eig_vector(const ComplexMatrix<Scalar>& H) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("min_eig_vector: eigensolver did not converge");
  return {es.eigenvalues()(0), es.eigenvectors().col(0)};
}

}  // namespace detail

template <typename Scalar>
struct LocalMinimum {
  Scalar value;
  ProductVector<Scalar> point;
  int iterations;
};

/// Coordinate descent on <phi (x) psi | W | phi (x) psi>: each half-step
/// replaces one factor by the bottom eigenvector of the contraction, so the
/// value never increases. Stops once a full sweep gains less than step_tol.
template <typename Scalar>
LocalMinimum<Scalar> alternate_minimize(const BipartiteMatrix<Scalar>& W,
                                        ComplexVector<Scalar> phi, ComplexVector<Scalar> psi,
                                        Scalar step_tol = Scalar(1e-13), int max_iters = 500) {
  Scalar value = std::numeric_limits<Scalar>::infinity();
  int it = 0;
  for (; it < max_iters; ++it) {
    auto [va, new_phi] = detail::min_eig_vector(contract_second(W, psi));
    phi = std::move(new_phi);
    auto [vb, new_psi] = detail::min_eig_vector(contract_first(W, phi));
    psi = std::move(new_psi);
    if (value - vb < step_tol) {
      value = vb;
      ++it;
      break;
    }
    value = vb;
  }
  return LocalMinimum<Scalar>{value, ProductVector<Scalar>(phi.normalized(), psi.normalized()),
                              it};
}

template <typename Scalar>
struct SearchOutcome {
  Scalar best_value;
  ProductVector<Scalar> argmin;
  int restarts_used;
  std::vector<LocalMinimum<Scalar>> converged_minima;  // one per restart, in index order
};

/// Global minimum estimate over product vectors via seeded random restarts.
/// Restart i is a deterministic function of (seed, i) alone; the best value
/// is folded in index order with first-wins ties, so the report is identical
/// for any thread budget.
template <typename Scalar>
SearchOutcome<Scalar> minimize_product_expectation(const BipartiteMatrix<Scalar>& W,
                                                   int restarts = 50,
                                                   std::uint64_t seed = 12345,
                                                   Scalar step_tol = Scalar(1e-13),
                                                   int max_iters = 500) {
  if (restarts < 1)
    throw std::invalid_argument("minimize_product_expectation: restarts must be positive");
  std::vector<std::optional<LocalMinimum<Scalar>>> slots(restarts);
  parallel_indexed(restarts, [&](int i) {
    std::mt19937_64 rng(mix_seed(seed, std::uint64_t(i)));
    ComplexVector<Scalar> phi = random_unit_vector<Scalar>(W.dim_a(), rng);
    ComplexVector<Scalar> psi = random_unit_vector<Scalar>(W.dim_b(), rng);
    slots[i] = alternate_minimize(W, std::move(phi), std::move(psi), step_tol, max_iters);
  });
  std::vector<LocalMinimum<Scalar>> minima;
  minima.reserve(restarts);
  for (auto& s : slots) minima.push_back(std::move(*s));
  int best = 0;
  for (int i = 1; i < restarts; ++i)
    if (minima[i].value < minima[best].value) best = i;
  return SearchOutcome<Scalar>{minima[best].value, minima[best].point, restarts,
                               std::move(minima)};
}

/// Product vectors where the expectation vanishes (up to zero_tol), deduped
/// by ray: two hits count as one when both factor overlaps are near 1.
template <typename Scalar>
std::vector<ProductVector<Scalar>> zero_product_vectors(const BipartiteMatrix<Scalar>& W,
                                                        int restarts = 500,
                                                        std::uint64_t seed = 12345,
                                                        Scalar zero_tol = Scalar(1e-8)) {
  const auto outcome = minimize_product_expectation(W, restarts, seed);
  std::vector<ProductVector<Scalar>> kept;
  for (const auto& lm : outcome.converged_minima) {
    if (!(std::abs(lm.value) <= zero_tol)) continue;
    bool fresh = true;
    for (const auto& pv : kept) {
      const Scalar fa = std::norm(pv.phi.dot(lm.point.phi));
      const Scalar fb = std::norm(pv.psi.dot(lm.point.psi));
      if (fa * fb > Scalar(1) - Scalar(1e-6)) {
        fresh = false;
        break;
      }
    }
    if (fresh) kept.push_back(lm.point);
  }
  return kept;
}

/// Dimension of the span of the given product vectors inside the composite
/// space, judged by singular values relative to the largest.
template <typename Scalar>
int spanning_rank(const std::vector<ProductVector<Scalar>>& vectors,
                  Scalar rel_tol = Scalar(1e-6)) {
  if (vectors.empty()) return 0;
  const Eigen::Index d = vectors.front().tensor().size();
  ComplexMatrix<Scalar> cols(d, Eigen::Index(vectors.size()));
  for (Eigen::Index j = 0; j < cols.cols(); ++j) cols.col(j) = vectors[j].tensor();
  Eigen::JacobiSVD<ComplexMatrix<Scalar>> svd(cols);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == Scalar(0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

namespace detail {

template <typename Scalar>
ComplexMatrix<Scalar> kernel_projector(const BipartiteMatrix<Scalar>& M, Scalar rel_tol,
                                       int& kernel_dim) {
  const auto es = eigen_system(M);
  const Scalar amax = es.values.cwiseAbs().maxCoeff();
  const Eigen::Index d = M.size();
  ComplexMatrix<Scalar> P = ComplexMatrix<Scalar>::Zero(d, d);
  kernel_dim = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (amax == Scalar(0) || std::abs(es.values(i)) <= rel_tol * amax) {
      P += es.vectors.col(i) * es.vectors.col(i).adjoint();
      ++kernel_dim;
    }
  }
  return P;
}

}  // namespace detail

/// Minimum over unit product vectors (e,f) of
///   <e (x) f | K | e (x) f> + <e (x) conj(f) | K' | e (x) conj(f)>
/// where K, K' project onto the kernels of rho and of rho transposed on the
/// second factor. A strictly positive minimum certifies that no product
/// vector lies in the range of rho with its partial conjugate in the range
/// of the transpose. Requires rho PPT.
template <typename Scalar>
Scalar edge_state_residual(const BipartiteMatrix<Scalar>& rho, int restarts = 200,
                           std::uint64_t seed = 12345, Scalar psd_tol = Scalar(tol::psd),
                           Scalar kernel_rel = Scalar(tol::rank_rel),
                           Scalar step_tol = Scalar(1e-13), int max_iters = 500) {
  if (restarts < 1)
    throw std::invalid_argument("edge_state_residual: restarts must be positive");
  const BipartiteMatrix<Scalar> rho_pt = partial_transpose(rho);
  if (!is_psd(rho, psd_tol) || !is_psd(rho_pt, psd_tol))
    throw std::invalid_argument("edge_state_residual: state must be PPT");
  int k1 = 0, k2 = 0;
  const ComplexMatrix<Scalar> P1 = detail::kernel_projector(rho, kernel_rel, k1);
  const ComplexMatrix<Scalar> P2 = detail::kernel_projector(rho_pt, kernel_rel, k2);
  if (k1 == 0 && k2 == 0) return Scalar(0);
  const BipartiteMatrix<Scalar> K1(rho.dim_a(), rho.dim_b(), P1);
  const BipartiteMatrix<Scalar> K2(rho.dim_a(), rho.dim_b(), P2);

  std::vector<Scalar> slots(restarts, std::numeric_limits<Scalar>::infinity());
  parallel_indexed(restarts, [&](int r) {
    std::mt19937_64 rng(mix_seed(seed, std::uint64_t(r)));
    ComplexVector<Scalar> e = random_unit_vector<Scalar>(rho.dim_a(), rng);
    ComplexVector<Scalar> f = random_unit_vector<Scalar>(rho.dim_b(), rng);
    Scalar value = std::numeric_limits<Scalar>::infinity();
    for (int it = 0; it < max_iters; ++it) {
      const ComplexMatrix<Scalar> A =
          contract_second(K1, f) + contract_second(K2, ComplexVector<Scalar>(f.conjugate()));
      auto [va, new_e] = detail::min_eig_vector(A);
      e = std::move(new_e);
      // The second term seen from f's side: with x = conj(f) the quadratic
      // form x^dag B2 x equals f^dag conj(B2) f.
      const ComplexMatrix<Scalar> B =
          contract_first(K1, e) + ComplexMatrix<Scalar>(contract_first(K2, e).conjugate());
      auto [vb, new_f] = detail::min_eig_vector(B);
      f = std::move(new_f);
      if (value - vb < step_tol) {
        value = vb;
        break;
      }
      value = vb;
    }
    slots[r] = value;
  });
  Scalar best = slots[0];
  for (int r = 1; r < restarts; ++r) best = std::min(best, slots[r]);
  return std::max(best, Scalar(0));
}

enum class EdgeVerdict {
  EntangledEdge,  // no product vector fits both ranges: entangled
  Inconclusive,   // a compatible product vector was found (or is within noise)
};

template <typename Scalar>
EdgeVerdict is_entangled_by_edge_criterion(const BipartiteMatrix<Scalar>& rho,
                                           int restarts = 200, std::uint64_t seed = 12345,
                                           Scalar residual_tol = Scalar(1e-6)) {
  const int effective = std::max(restarts, 200);
  const Scalar r = edge_state_residual(rho, effective, seed);
  return r > residual_tol ? EdgeVerdict::EntangledEdge : EdgeVerdict::Inconclusive;
}

}  // namespace spalab
