#pragma once

#include "spalab/bipartite.hpp"
#include "spalab/classification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spalab {

/// Parameters of the diagonal-plus-phase family on a 3 (x) 3 system.
/// theta is stored reduced to [-pi, pi].
template <typename Scalar>
struct WitnessParams {
  Scalar a, b, c, theta;

  WitnessParams(Scalar a_, Scalar b_, Scalar c_, Scalar theta_)
      : a(a_), b(b_), c(c_), theta(std::remainder(theta_, Scalar(2) * std::numbers::pi_v<Scalar>)) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(theta)))
      throw std::invalid_argument("WitnessParams: non-finite parameter");
    if (a < Scalar(0) || b < Scalar(0) || c < Scalar(0))
      throw std::invalid_argument("WitnessParams: diagonal weights must be nonnegative");
  }
};

template <typename Scalar>
Scalar q_theta(Scalar theta) {
  return Scalar(2) * std::cos(theta);
}

/// Largest of 2cos at theta and its two 2pi/3 translates; ranges over [1,2].
template <typename Scalar>
Scalar p_theta(Scalar theta) {
  const Scalar shift = Scalar(2) * std::numbers::pi_v<Scalar> / Scalar(3);
  return std::max({q_theta(theta - shift), q_theta(theta), q_theta(theta + shift)});
}

/// The angle in [0, pi/3] whose p_theta equals p.
template <typename Scalar>
Scalar theta_for_p(Scalar p) {
  if (!(p >= Scalar(1) && p <= Scalar(2)))
    throw std::domain_error("theta_for_p: p must lie in [1,2]");
  return std::acos(p / Scalar(2));
}

/// The 9x9 matrix: diagonal (a,c,b,b,a,c,c,b,a) plus phases -e^{i theta}
/// at (0,4),(4,8),(8,0) and conjugates at the transposed slots.
template <typename Scalar>
BipartiteMatrix<Scalar> build_witness(const WitnessParams<Scalar>& w) {
  using Complex = std::complex<Scalar>;
  ComplexMatrix<Scalar> M = ComplexMatrix<Scalar>::Zero(9, 9);
  const Scalar diag[9] = {w.a, w.c, w.b, w.b, w.a, w.c, w.c, w.b, w.a};
  for (int i = 0; i < 9; ++i) M(i, i) = Complex(diag[i], Scalar(0));
  const Complex phase(std::cos(w.theta), std::sin(w.theta));
  const int hot[3][2] = {{0, 4}, {4, 8}, {8, 0}};
  for (auto& rc : hot) {
    M(rc[0], rc[1]) = -phase;
    M(rc[1], rc[0]) = -std::conj(phase);
  }
  return BipartiteMatrix<Scalar>(3, 3, M);
}

/// Both the matrix and its second-factor transpose are PSD exactly when
/// a >= p_theta and bc >= 1. The slack keeps points computed to sit exactly
/// on the boundary from flipping on the last ulp.
template <typename Scalar>
bool is_ppt_closed_form(const WitnessParams<Scalar>& w, Scalar slack = Scalar(1e-12)) {
  return w.a >= p_theta(w.theta) - slack && w.b * w.c >= Scalar(1) - slack;
}

/// Expectation over product vectors is nonnegative exactly when
/// a+b+c >= p_theta and additionally a > 1 or bc >= (1-a)^2, again up to
/// slack on each clause.
template <typename Scalar>
bool is_block_positive_closed_form(const WitnessParams<Scalar>& w,
                                   Scalar slack = Scalar(1e-12)) {
  if (w.a + w.b + w.c < p_theta(w.theta) - slack) return false;
  return w.a > Scalar(1) - slack ||
         w.b * w.c >= (Scalar(1) - w.a) * (Scalar(1) - w.a) - slack;
}

/// How far the segment (1-t) id + t W stays PSD. Requires block positivity.
template <typename Scalar>
Scalar alpha_closed_form(const WitnessParams<Scalar>& w) {
  if (!is_block_positive_closed_form(w))
    throw std::domain_error("alpha_closed_form: matrix is not block positive");
  const Scalar p = p_theta(w.theta);
  if (w.a >= p) return Scalar(1);
  return Scalar(1) / (p + Scalar(1) - w.a);
}

/// Discriminant polynomial of the transposed segment's 2x2 blocks:
/// F(t) = (b+c-bc) t^2 - (b+c-2) t - 1. The blocks stay PSD while F <= 0.
template <typename Scalar>
Scalar copositivity_poly(const WitnessParams<Scalar>& w, Scalar t) {
  const Scalar A = w.b + w.c - w.b * w.c;
  const Scalar B = w.b + w.c - Scalar(2);
  return A * t * t - B * t - Scalar(1);
}

/// How far the transposed segment stays PSD. Requires block positivity.
template <typename Scalar>
Scalar beta_closed_form(const WitnessParams<Scalar>& w) {
  if (!is_block_positive_closed_form(w))
    throw std::domain_error("beta_closed_form: matrix is not block positive");
  if (w.b * w.c >= Scalar(1)) return Scalar(1);
  const Scalar A = w.b + w.c - w.b * w.c;
  const Scalar B = Scalar(2) - w.b - w.c;
  // F has exactly one root in (0,1]; written to avoid cancellation when
  // b+c is tiny, and valid in the linear A == 0 case as well.
  const Scalar root = Scalar(2) / (B + std::sqrt(B * B + Scalar(4) * A));
  return std::min(root, Scalar(1));
}

/// Segment-distance comparison without the block-positivity gate, so scans
/// can label every grid point. Ties within `tie_tol` count as equal reach.
template <typename Scalar>
WitnessType witness_type_from_criterion(const WitnessParams<Scalar>& w,
                                        Scalar tie_tol = Scalar(1e-10)) {
  const Scalar p = p_theta(w.theta);
  if (w.a < p && w.b * w.c < Scalar(1)) {
    const Scalar tau = (p - w.a + w.b) * (p - w.a + w.c);
    if (tau > Scalar(1) + tie_tol) return WitnessType::CopositiveType;
    if (tau < Scalar(1) - tie_tol) return WitnessType::PositiveType;
    return WitnessType::PPTType;
  }
  const Scalar alpha = w.a >= p ? Scalar(1) : Scalar(1) / (p + Scalar(1) - w.a);
  Scalar beta;
  if (w.b * w.c >= Scalar(1)) {
    beta = Scalar(1);
  } else {
    const Scalar A = w.b + w.c - w.b * w.c;
    const Scalar B = Scalar(2) - w.b - w.c;
    beta = std::min(Scalar(2) / (B + std::sqrt(B * B + Scalar(4) * A)), Scalar(1));
  }
  if (alpha > beta + tie_tol) return WitnessType::PositiveType;
  if (beta > alpha + tie_tol) return WitnessType::CopositiveType;
  return WitnessType::PPTType;
}

template <typename Scalar>
struct FamilyClassification {
  bool is_ppt_matrix;
  bool is_block_positive;
  WitnessType type;
  Scalar p;
};

template <typename Scalar>
FamilyClassification<Scalar> classify_family(const WitnessParams<Scalar>& w,
                                             Scalar tie_tol = Scalar(1e-10)) {
  FamilyClassification<Scalar> out;
  out.p = p_theta(w.theta);
  out.is_ppt_matrix = is_ppt_closed_form(w);
  out.is_block_positive = is_block_positive_closed_form(w);
  out.type = out.is_block_positive ? witness_type_from_criterion(w, tie_tol)
                                   : WitnessType::NotAWitness;
  return out;
}

/// The best PSD point on the segment, expressed inside the family again:
/// segment value at alpha equals `scale` times the witness at `params`.
template <typename Scalar>
struct SpaForm {
  Scalar scale;
  WitnessParams<Scalar> params;
};

template <typename Scalar>
SpaForm<Scalar> spa_closed_form(const WitnessParams<Scalar>& w) {
  const Scalar p = p_theta(w.theta);
  if (!is_block_positive_closed_form(w))
    throw std::domain_error("spa_closed_form: matrix is not block positive");
  if (w.a >= p)
    throw std::domain_error("spa_closed_form: matrix is already PSD at t = 1");
  const Scalar scale = Scalar(1) / (p + Scalar(1) - w.a);
  return SpaForm<Scalar>{scale,
                         WitnessParams<Scalar>(p, p - w.a + w.b, p - w.a + w.c, w.theta)};
}

/// The segment stays inside the family up to overall scale:
/// (1-t) id + t W[a,b,c] = t W[(1-t+ta)/t, (1-t+tb)/t, (1-t+tc)/t].
template <typename Scalar>
bool scaling_identity_holds(const WitnessParams<Scalar>& w, Scalar t,
                            Scalar tol = Scalar(1e-12)) {
  if (!(t > Scalar(0) && t <= Scalar(1)))
    throw std::domain_error("scaling_identity_holds: t must lie in (0,1]");
  const auto W = build_witness(w);
  const auto one = identity<Scalar>(3, 3);
  const ComplexMatrix<Scalar> segment =
      (Scalar(1) - t) * one.entries() + t * W.entries();
  const WitnessParams<Scalar> rescaled((Scalar(1) - t + t * w.a) / t,
                                       (Scalar(1) - t + t * w.b) / t,
                                       (Scalar(1) - t + t * w.c) / t, w.theta);
  const ComplexMatrix<Scalar> rhs = t * build_witness(rescaled).entries();
  return (segment - rhs).cwiseAbs().maxCoeff() <= tol;
}

/// Tr(W W') within the family: 3(aa' + bb' + cc') + 6 cos(theta - theta').
template <typename Scalar>
Scalar family_pairing(const WitnessParams<Scalar>& w1, const WitnessParams<Scalar>& w2) {
  return Scalar(3) * (w1.a * w2.a + w1.b * w2.b + w1.c * w2.c) +
         Scalar(6) * std::cos(w1.theta - w2.theta);
}

}  // namespace spalab
