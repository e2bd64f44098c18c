#pragma once

#include "spalab/bipartite.hpp"
#include "spalab/classification.hpp"

#include <stdexcept>
#include <utility>

namespace spalab {

template <typename Scalar>
struct SegmentPoint {
  Scalar t;
  BipartiteMatrix<Scalar> matrix;
};

/// (1-t) id + t W for t in [0,1].
template <typename Scalar>
SegmentPoint<Scalar> segment_at(const BipartiteMatrix<Scalar>& W, Scalar t) {
  if (!(t >= Scalar(0) && t <= Scalar(1)))
    throw std::domain_error("segment_at: t must lie in [0,1]");
  const Eigen::Index d = W.size();
  ComplexMatrix<Scalar> M =
      (Scalar(1) - t) * ComplexMatrix<Scalar>::Identity(d, d) + t * W.entries();
  return SegmentPoint<Scalar>{t, BipartiteMatrix<Scalar>(W.dim_a(), W.dim_b(), M)};
}

namespace detail {

// Largest t in [0,1] with pred(t) true, where pred(0) holds and pred is
// monotone (true then false). Fixed-count bisection; the returned midpoint
// sits within 2^-iters of the crossing.
template <typename Scalar, typename Pred>
Scalar bisect_segment(Pred&& pred, int iters) {
  if (pred(Scalar(1))) return Scalar(1);
  Scalar lo = Scalar(0), hi = Scalar(1);
  for (int i = 0; i < iters; ++i) {
    const Scalar mid = (lo + hi) / Scalar(2);
    (pred(mid) ? lo : hi) = mid;
  }
  return (lo + hi) / Scalar(2);
}

}  // namespace detail

/// Furthest the segment stays PSD, found by bisection on the least
/// eigenvalue. eig_tol absorbs solver noise at the boundary.
template <typename Scalar>
Scalar alpha_numeric(const BipartiteMatrix<Scalar>& W, Scalar eig_tol = Scalar(1e-11),
                     int iters = 60) {
  return detail::bisect_segment<Scalar>(
      [&](Scalar t) { return min_eigenvalue(segment_at(W, t).matrix) >= -eig_tol; }, iters);
}

/// Same reach for the segment transposed on the second factor. Transposing
/// the whole segment equals the segment of the transposed matrix, entry for
/// entry, so this is alpha of W^Gamma.
template <typename Scalar>
Scalar beta_numeric(const BipartiteMatrix<Scalar>& W, Scalar eig_tol = Scalar(1e-11),
                    int iters = 60) {
  return alpha_numeric(partial_transpose(W), eig_tol, iters);
}

template <typename Scalar>
struct SpaReport {
  Scalar alpha;
  Scalar beta;
  WitnessType type;
  BipartiteMatrix<Scalar> spa;  // segment point at alpha
  bool spa_is_ppt;
  std::pair<int, int> rank_signature;  // (rank spa, rank spa^Gamma)
};

/// Numeric classification of any Hermitian bipartite matrix whose segment
/// leaves the PSD cone somewhere (alpha or beta below 1 is fine; a matrix
/// that is PSD together with its transpose reports PPTType with both at 1).
template <typename Scalar>
SpaReport<Scalar> classify(const BipartiteMatrix<Scalar>& W, Scalar tie_tol = Scalar(1e-8),
                           Scalar eig_tol = Scalar(1e-11), int iters = 60) {
  const Scalar alpha = alpha_numeric(W, eig_tol, iters);
  const Scalar beta = beta_numeric(W, eig_tol, iters);
  WitnessType type;
  if (alpha > beta + tie_tol)
    type = WitnessType::PositiveType;
  else if (beta > alpha + tie_tol)
    type = WitnessType::CopositiveType;
  else
    type = WitnessType::PPTType;
  BipartiteMatrix<Scalar> spa = segment_at(W, alpha).matrix;
  const BipartiteMatrix<Scalar> spa_pt = partial_transpose(spa);
  const bool spa_ppt = is_psd(spa, Scalar(tol::psd)) && is_psd(spa_pt, Scalar(tol::psd));
  const std::pair<int, int> ranks{numerical_rank(spa, Scalar(tol::rank_rel)),
                                  numerical_rank(spa_pt, Scalar(tol::rank_rel))};
  return SpaReport<Scalar>{alpha, beta, type, std::move(spa), spa_ppt, ranks};
}

}  // namespace spalab
