#include "support.hpp"

#include "spalab/spa_engine.hpp"
#include "spalab/witness_family.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace spalab;
using testsupport::sample_bp_params;

TEST_CASE("segment endpoints and bounds") {
  const auto W = build_witness(WitnessParams<double>(1.0, 1.0, 1.0, 0.0));
  const auto at0 = segment_at(W, 0.0);
  CHECK(at0.t == 0.0);
  CHECK((at0.matrix.entries() - identity<double>(3, 3).entries()).cwiseAbs().maxCoeff() == 0.0);
  const auto at1 = segment_at(W, 1.0);
  CHECK((at1.matrix.entries() - W.entries()).cwiseAbs().maxCoeff() == 0.0);
  const auto half = segment_at(W, 0.5).matrix;
  CHECK(half(0, 0) == std::complex<double>(1.0, 0));
  CHECK(std::abs(half(0, 4) - 0.5 * W(0, 4)) <= 1e-16);
  CHECK_THROWS_AS(segment_at(W, -0.1), std::domain_error);
  CHECK_THROWS_AS(segment_at(W, 1.1), std::domain_error);
}

TEST_CASE("numeric reach agrees with the closed form") {
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 50; ++trial) {
    const auto w = sample_bp_params(rng);
    const auto W = build_witness(w);
    CHECK(std::abs(alpha_numeric(W) - alpha_closed_form(w)) <= 1e-8);
    CHECK(std::abs(beta_numeric(W) - beta_closed_form(w)) <= 1e-8);
  }
}

TEST_CASE("psd input reaches the far end exactly") {
  const auto W = build_witness(WitnessParams<double>(2.0, 1.5, 1.5, 0.0));
  REQUIRE(min_eigenvalue(W) >= -1e-12);
  CHECK(alpha_numeric(W) == 1.0);
  CHECK(beta_numeric(W) == 1.0);
}

TEST_CASE("transposed reach is the plain reach of the transpose") {
  std::mt19937_64 rng(223);
  for (int trial = 0; trial < 20; ++trial) {
    const auto W = build_witness(sample_bp_params(rng));
    CHECK(beta_numeric(W) == alpha_numeric(partial_transpose(W)));
  }
}

TEST_CASE("full numeric report on the first catalog point") {
  const WitnessParams<double> cat(2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, theta_for_p(4.0 / 3.0));
  const auto report = classify(build_witness(cat));
  CHECK(std::abs(report.alpha - 0.6) <= 1e-8);
  CHECK(std::abs(report.beta - 0.6) <= 1e-8);
  CHECK(report.type == WitnessType::PPTType);
  CHECK(report.spa_is_ppt);
  CHECK(min_eigenvalue(report.spa) >= -1e-9);
  CHECK(min_eigenvalue(partial_transpose(report.spa)) >= -1e-9);
  CHECK(report.rank_signature.first == 8);
  CHECK(report.rank_signature.second == 6);
}

TEST_CASE("positive type report leaves the transposed side short") {
  const WitnessParams<double> w(1.2, 0.3, 0.2, theta_for_p(1.5));
  const auto report = classify(build_witness(w));
  CHECK(report.type == WitnessType::PositiveType);
  CHECK(report.alpha > report.beta + 1e-8);
  CHECK_FALSE(report.spa_is_ppt);
  // alpha segment point is positive by construction
  CHECK(min_eigenvalue(report.spa) >= -1e-9);
  CHECK(min_eigenvalue(partial_transpose(report.spa)) < -1e-6);
}
