#pragma once

// Shared helpers for the test binaries: seeded samplers over the family
// parameter box and analytic eigenvalue references derived independently of
// the library implementation (circulant core plus diagonal for the plain
// matrix, 2x2 corner blocks plus diagonal for the transposed one).

#include "spalab/bipartite.hpp"
#include "spalab/witness_family.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace testsupport {

using spalab::BipartiteMatrix;
using spalab::ComplexMatrix;
using spalab::WitnessParams;

inline constexpr double pi = std::numbers::pi;

template <typename Rng>
WitnessParams<double> sample_params(Rng& rng) {
  std::uniform_real_distribution<double> ua(0.0, 2.5), ubc(0.0, 2.0), uth(-pi, pi);
  return WitnessParams<double>(ua(rng), ubc(rng), ubc(rng), uth(rng));
}

// Block-positive sample away from the alpha/beta knife edges a = p and
// bc = 1, where closed form and bisection legitimately disagree at the
// tolerance scale.
template <typename Rng>
WitnessParams<double> sample_bp_params(Rng& rng, double edge_margin = 1e-5) {
  for (;;) {
    const auto w = sample_params(rng);
    if (!spalab::is_block_positive_closed_form(w)) continue;
    const double p = spalab::p_theta(w.theta);
    if (std::abs(w.a - p) < edge_margin) continue;
    if (std::abs(w.b * w.c - 1.0) < edge_margin) continue;
    return w;
  }
}

// Eigenvalues of the family matrix: the phased circulant core contributes
// a - 2cos(theta + 2 pi k/3), the rest of the diagonal contributes b and c
// three times each.
inline std::array<double, 9> family_eigs_plain(const WitnessParams<double>& w) {
  const double shift = 2.0 * pi / 3.0;
  std::array<double, 9> ev{w.a - 2.0 * std::cos(w.theta),
                           w.a - 2.0 * std::cos(w.theta + shift),
                           w.a - 2.0 * std::cos(w.theta - shift),
                           w.b, w.b, w.b,
                           w.c, w.c, w.c};
  std::sort(ev.begin(), ev.end());
  return ev;
}

// After transposing the second factor the phases pair b with c in three
// identical 2x2 blocks [[c, -e^{i theta}], [-e^{-i theta}, b]]; a survives
// on the diagonal three times.
inline std::array<double, 9> family_eigs_transposed(const WitnessParams<double>& w) {
  const double s = std::sqrt((w.b - w.c) * (w.b - w.c) + 4.0);
  const double lo = ((w.b + w.c) - s) / 2.0;
  const double hi = ((w.b + w.c) + s) / 2.0;
  std::array<double, 9> ev{lo, lo, lo, w.a, w.a, w.a, hi, hi, hi};
  std::sort(ev.begin(), ev.end());
  return ev;
}

template <typename Rng>
BipartiteMatrix<double> random_hermitian(Eigen::Index m, Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index d = m * n;
  ComplexMatrix<double> R(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) R(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  const ComplexMatrix<double> H = (R + R.adjoint()) / 2.0;
  return BipartiteMatrix<double>(m, n, H);
}

}  // namespace testsupport
