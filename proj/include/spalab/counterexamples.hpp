#pragma once

#include "spalab/bipartite.hpp"
#include "spalab/product_search.hpp"
#include "spalab/spa_engine.hpp"
#include "spalab/witness_family.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spalab {

enum class CaseTag { CaseI, CaseII };

inline constexpr std::string_view to_token(CaseTag t) {
  return t == CaseTag::CaseI ? "i" : "ii";
}

/// A family point whose best PSD segment point stays PPT while remaining
/// entangled. `partner` is the mirror with b and c swapped, present when
/// they differ.
template <typename Scalar>
struct CaseSolution {
  CaseTag tag;
  Scalar p;
  Scalar theta;
  WitnessParams<Scalar> params;
  std::optional<WitnessParams<Scalar>> partner;
};

/// Curve bc = (1-a)^2 with a+b+c = p and the additional constraint
/// 2(p-a)^2 + (1-a)^2 = 1, i.e. the admissible root of
/// 3a^2 - 2(2p+1)a + 2p^2 = 0 with 2-p <= a < 1. Nonempty for p in
/// [4/3, 1+1/sqrt(2)) up to window_tol at the edges.
template <typename Scalar>
std::optional<CaseSolution<Scalar>> solve_case_i(Scalar p, Scalar window_tol = Scalar(1e-9)) {
  if (!(p > Scalar(1) && p < Scalar(2))) return std::nullopt;
  const Scalar disc = -Scalar(2) * p * p + Scalar(4) * p + Scalar(1);
  if (disc < Scalar(0)) return std::nullopt;
  const Scalar sq = std::sqrt(disc);
  const Scalar roots[2] = {(Scalar(2) * p + Scalar(1) - sq) / Scalar(3),
                           (Scalar(2) * p + Scalar(1) + sq) / Scalar(3)};
  for (const Scalar a : roots) {
    if (!(a >= Scalar(2) - p - window_tol && a < Scalar(1) - window_tol)) continue;
    Scalar D = (p - a) * (p - a) - Scalar(4) * (Scalar(1) - a) * (Scalar(1) - a);
    D = std::max(D, Scalar(0));
    const Scalar sd = std::sqrt(D);
    const Scalar b = ((p - a) + sd) / Scalar(2);
    const Scalar c = ((p - a) - sd) / Scalar(2);
    const Scalar theta = theta_for_p(p);
    CaseSolution<Scalar> out{CaseTag::CaseI, p, theta, WitnessParams<Scalar>(a, b, c, theta),
                             std::nullopt};
    if (b != c) out.partner = WitnessParams<Scalar>(a, c, b, theta);
    return out;
  }
  return std::nullopt;
}

/// Boundary branch c = 0, b = p - a with a = p - 1/sqrt(2); admissible once
/// a reaches 1, i.e. p in [1 + 1/sqrt(2), 2) up to tol.
template <typename Scalar>
std::optional<CaseSolution<Scalar>> solve_case_ii(Scalar p, Scalar tol = Scalar(1e-9)) {
  if (!(p > Scalar(1) && p < Scalar(2))) return std::nullopt;
  const Scalar a = p - Scalar(1) / std::numbers::sqrt2_v<Scalar>;
  if (!(a >= Scalar(1) - tol)) return std::nullopt;
  const Scalar b = p - a;
  const Scalar theta = theta_for_p(p);
  CaseSolution<Scalar> out{CaseTag::CaseII, p, theta,
                           WitnessParams<Scalar>(a, b, Scalar(0), theta), std::nullopt};
  out.partner = WitnessParams<Scalar>(a, Scalar(0), b, theta);
  return out;
}

template <typename Scalar>
std::vector<CaseSolution<Scalar>> enumerate_counterexamples(const std::vector<Scalar>& p_grid) {
  std::vector<CaseSolution<Scalar>> out;
  for (const Scalar p : p_grid) {
    if (auto s = solve_case_i(p)) out.push_back(std::move(*s));
    if (auto s = solve_case_ii(p)) out.push_back(std::move(*s));
  }
  return out;
}

/// A PPT family point paired negatively against w, i.e. a state in the PPT
/// cone that w separates from the separable set.
template <typename Scalar>
struct Detection {
  WitnessParams<Scalar> state_params;
  Scalar pairing;
};

/// Scan the PPT boundary of the family (a' = p_theta', b'c' = 1) for a point
/// pairing below -neg_tol against w. Angles are tried outward from the
/// antipode of w's angle; at each angle the split b'/c' widens from 1 by
/// powers of two, both orientations. Requires w block positive and not PPT.
template <typename Scalar>
std::optional<Detection<Scalar>> find_detected_ppt_state(const WitnessParams<Scalar>& w,
                                                         Scalar neg_tol = Scalar(1e-9)) {
  if (!is_block_positive_closed_form(w))
    throw std::invalid_argument("find_detected_ppt_state: matrix must be block positive");
  if (is_ppt_closed_form(w))
    throw std::invalid_argument("find_detected_ppt_state: matrix is already PPT");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar step = pi / Scalar(180);
  const Scalar base = w.theta + pi;
  const auto try_angle = [&](Scalar theta_p) -> std::optional<Detection<Scalar>> {
    const Scalar ap = p_theta(theta_p);
    for (int k = 0; k <= 26; ++k) {
      const Scalar bp = std::ldexp(Scalar(1), -k);
      const Scalar cp = Scalar(1) / bp;
      const WitnessParams<Scalar> cand1(ap, bp, cp, theta_p);
      const Scalar v1 = family_pairing(w, cand1);
      if (v1 < -neg_tol) return Detection<Scalar>{cand1, v1};
      if (k == 0) continue;
      const WitnessParams<Scalar> cand2(ap, cp, bp, theta_p);
      const Scalar v2 = family_pairing(w, cand2);
      if (v2 < -neg_tol) return Detection<Scalar>{cand2, v2};
    }
    return std::nullopt;
  };
  if (auto hit = try_angle(base)) return hit;
  for (int k = 1; k <= 180; ++k) {
    if (auto hit = try_angle(base + Scalar(k) * step)) return hit;
    if (auto hit = try_angle(base - Scalar(k) * step)) return hit;
  }
  return std::nullopt;
}

struct VerifyBudget {
  int oracle_restarts = 50;
  int edge_restarts = 200;
  int zero_restarts = 500;
  std::uint64_t seed = 12345;
};

template <typename Scalar>
struct DossierStage {
  std::string name;
  bool pass;
  Scalar value;
  Scalar tolerance;
};

template <typename Scalar>
struct VerificationDossier {
  CaseSolution<Scalar> solution;
  SpaReport<Scalar> classification;
  bool spa_ppt;
  EdgeVerdict spa_entangled;
  std::optional<Detection<Scalar>> detected;
  std::pair<int, int> spanning;  // zero-set span of W and of its transpose
  std::vector<DossierStage<Scalar>> stages;
  std::vector<std::string> notes;
  int failed_stage;  // 1-based index of the first failed stage, 0 when clean
  bool pass;
};

/// Run the full battery on one catalog point. Stages never throw past this
/// function; a stage that cannot run is recorded as failed with value -1.
template <typename Scalar>
VerificationDossier<Scalar> verify_counterexample(const CaseSolution<Scalar>& s,
                                                  const VerifyBudget& budget = {}) {
  std::vector<DossierStage<Scalar>> stages;
  std::vector<std::string> notes;
  const WitnessParams<Scalar>& w = s.params;
  const BipartiteMatrix<Scalar> W = build_witness(w);

  const bool bp_closed = is_block_positive_closed_form(w);
  const auto search = minimize_product_expectation(W, budget.oracle_restarts, budget.seed);
  stages.push_back({"block-positive", bp_closed && search.best_value >= Scalar(-1e-6),
                    search.best_value, Scalar(1e-6)});

  const Scalar worst =
      std::max(min_eigenvalue(W), min_eigenvalue(partial_transpose(W)));
  stages.push_back({"indefinite-both-sides", worst < Scalar(-1e-9), worst, Scalar(1e-9)});

  const SpaReport<Scalar> report = classify(W);
  const Scalar p = p_theta(w.theta);
  const Scalar tau = (p - w.a + w.b) * (p - w.a + w.c);
  const Scalar gap = std::abs(report.alpha - report.beta);
  stages.push_back({"equal-segment-reach",
                    report.type == WitnessType::PPTType && gap <= Scalar(1e-8) &&
                        std::abs(tau - Scalar(1)) <= Scalar(1e-10),
                    gap, Scalar(1e-8)});

  const Scalar spa_worst = std::min(min_eigenvalue(report.spa),
                                    min_eigenvalue(partial_transpose(report.spa)));
  stages.push_back(
      {"approximation-ppt", report.spa_is_ppt && spa_worst >= Scalar(-1e-9), spa_worst,
       Scalar(1e-9)});

  EdgeVerdict verdict = EdgeVerdict::Inconclusive;
  {
    const Scalar tr = report.spa.entries().trace().real();
    Scalar residual = Scalar(-1);
    bool ran = false;
    try {
      const BipartiteMatrix<Scalar> rho(3, 3,
                                        ComplexMatrix<Scalar>(report.spa.entries() / tr));
      residual = edge_state_residual(rho, budget.edge_restarts, budget.seed);
      ran = true;
    } catch (const std::exception& ex) {
      notes.push_back(std::string("edge residual not evaluated: ") + ex.what());
    }
    if (ran && residual > Scalar(1e-6)) verdict = EdgeVerdict::EntangledEdge;
    stages.push_back({"approximation-entangled", verdict == EdgeVerdict::EntangledEdge,
                      residual, Scalar(1e-6)});
  }

  std::optional<Detection<Scalar>> detected;
  try {
    detected = find_detected_ppt_state(w);
  } catch (const std::exception& ex) {
    notes.push_back(std::string("detection not evaluated: ") + ex.what());
  }
  stages.push_back({"detects-ppt-state", detected.has_value(),
                    detected ? detected->pairing : Scalar(0), Scalar(1e-9)});

  const auto zw = zero_product_vectors(W, budget.zero_restarts, budget.seed);
  const auto zg =
      zero_product_vectors(partial_transpose(W), budget.zero_restarts, budget.seed);
  const int span_w = spanning_rank(zw);
  const int span_g = spanning_rank(zg);
  if (s.tag == CaseTag::CaseI) {
    // Both sides are expected to span here.
    const int achieved = std::min(span_w, span_g);
    stages.push_back({"zero-set-spans", achieved >= 9, Scalar(achieved), Scalar(9)});
  } else if (s.params.a > Scalar(1) + Scalar(1e-9)) {
    // Interior of the second window: only the transposed side is asserted.
    stages.push_back({"zero-set-spans", span_g >= 9, Scalar(span_g), Scalar(9)});
    notes.push_back("plain-side zero set spans " + std::to_string(span_w) +
                    " of 9 dimensions (reported without pass/fail on this branch)");
  } else {
    // Window edge a = 1: the search can only exhibit zeros, never exhaust
    // them, so span shortfall here is evidence, not a verdict.
    stages.push_back({"zero-set-spans", true, Scalar(std::min(span_w, span_g)), Scalar(9)});
    notes.push_back("window edge: zero sets span " + std::to_string(span_w) + " (plain) and " +
                    std::to_string(span_g) +
                    " (transposed) of 9 under budget; reported as evidence only, no pass/fail");
  }

  bool all = true;
  int failed_stage = 0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (!stages[i].pass && failed_stage == 0) failed_stage = int(i) + 1;
    all = all && stages[i].pass;
  }
  return VerificationDossier<Scalar>{s,
                                     report,
                                     stages[3].pass,
                                     verdict,
                                     detected,
                                     {span_w, span_g},
                                     std::move(stages),
                                     std::move(notes),
                                     failed_stage,
                                     all};
}

}  // namespace spalab
