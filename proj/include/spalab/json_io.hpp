#pragma once

#include "spalab/bipartite.hpp"
#include "spalab/counterexamples.hpp"
#include "spalab/product_search.hpp"
#include "spalab/spa_engine.hpp"
#include "spalab/witness_family.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace spalab {

using json = nlohmann::json;

template <typename Scalar>
json vector_to_json(const ComplexVector<Scalar>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back({double(v(i).real()), double(v(i).imag())});
  return out;
}

/// {"m": .., "n": .., "entries": [[re, im], ...]} with entries row-major.
template <typename Scalar>
json matrix_to_json(const BipartiteMatrix<Scalar>& M) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < M.size(); ++r)
    for (Eigen::Index c = 0; c < M.size(); ++c)
      entries.push_back({double(M(r, c).real()), double(M(r, c).imag())});
  return json{{"m", M.dim_a()}, {"n", M.dim_b()}, {"entries", std::move(entries)}};
}

template <typename Scalar = double>
BipartiteMatrix<Scalar> matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("n") || !j.contains("entries"))
    throw std::invalid_argument("matrix_from_json: need fields m, n, entries");
  if (!j["m"].is_number_integer() || !j["n"].is_number_integer())
    throw std::invalid_argument("matrix_from_json: m and n must be integers");
  const Eigen::Index m = j["m"].get<Eigen::Index>();
  const Eigen::Index n = j["n"].get<Eigen::Index>();
  if (m < 1 || n < 1) throw std::invalid_argument("matrix_from_json: dimensions must be positive");
  const Eigen::Index d = m * n;
  const json& e = j["entries"];
  if (!e.is_array() || Eigen::Index(e.size()) != d * d)
    throw std::invalid_argument("matrix_from_json: entries must hold (m*n)^2 pairs");
  ComplexMatrix<Scalar> M(d, d);
  Eigen::Index idx = 0;
  for (const auto& cell : e) {
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
      throw std::invalid_argument("matrix_from_json: each entry must be [re, im]");
    M(idx / d, idx % d) =
        std::complex<Scalar>(Scalar(cell[0].get<double>()), Scalar(cell[1].get<double>()));
    ++idx;
  }
  return BipartiteMatrix<Scalar>(m, n, M);
}

template <typename Scalar>
json params_to_json(const WitnessParams<Scalar>& w) {
  return json{{"a", double(w.a)}, {"b", double(w.b)}, {"c", double(w.c)},
              {"theta", double(w.theta)}};
}

template <typename Scalar = double>
WitnessParams<Scalar> params_from_json(const json& j) {
  for (const char* key : {"a", "b", "c", "theta"})
    if (!j.contains(key) || !j[key].is_number())
      throw std::invalid_argument(std::string("params_from_json: missing numeric field ") + key);
  return WitnessParams<Scalar>(Scalar(j["a"].get<double>()), Scalar(j["b"].get<double>()),
                               Scalar(j["c"].get<double>()), Scalar(j["theta"].get<double>()));
}

template <typename Scalar>
json spa_report_to_json(const SpaReport<Scalar>& r) {
  const Scalar tr = r.spa.entries().trace().real();
  json out{{"alpha", double(r.alpha)},
           {"beta", double(r.beta)},
           {"type", std::string(to_token(r.type))},
           {"rank", {r.rank_signature.first, r.rank_signature.second}},
           {"spa", matrix_to_json(r.spa)},
           {"spa_is_ppt", r.spa_is_ppt}};
  if (tr > Scalar(0)) {
    const BipartiteMatrix<Scalar> rho(r.spa.dim_a(), r.spa.dim_b(),
                                      ComplexMatrix<Scalar>(r.spa.entries() / tr));
    out["spa_normalized"] = matrix_to_json(rho);
  }
  return out;
}

template <typename Scalar>
json search_outcome_to_json(const SearchOutcome<Scalar>& s) {
  return json{{"best_value", double(s.best_value)},
              {"restarts", s.restarts_used},
              {"phi", vector_to_json(s.argmin.phi)},
              {"psi", vector_to_json(s.argmin.psi)}};
}

template <typename Scalar>
json dossier_to_json(const VerificationDossier<Scalar>& d) {
  json stages = json::array();
  for (const auto& st : d.stages)
    stages.push_back(json{{"name", st.name},
                          {"pass", st.pass},
                          {"value", double(st.value)},
                          {"tolerance", double(st.tolerance)}});
  json out{{"case", std::string(to_token(d.solution.tag))},
           {"p", double(d.solution.p)},
           {"params", params_to_json(d.solution.params)},
           {"alpha", double(d.classification.alpha)},
           {"beta", double(d.classification.beta)},
           {"type", std::string(to_token(d.classification.type))},
           {"rank", {d.classification.rank_signature.first, d.classification.rank_signature.second}},
           {"spa_is_ppt", d.spa_ppt},
           {"spa_entangled", d.spa_entangled == EdgeVerdict::EntangledEdge},
           {"spanning", {d.spanning.first, d.spanning.second}},
           {"stages", std::move(stages)},
           {"notes", d.notes},
           {"failed_stage", d.failed_stage},
           {"pass", d.pass}};
  if (d.solution.partner) out["partner"] = params_to_json(*d.solution.partner);
  if (d.detected) {
    out["detected"] = json{{"params", params_to_json(d.detected->state_params)},
                           {"pairing", double(d.detected->pairing)}};
  }
  return out;
}

}  // namespace spalab
