#include "spalab/bipartite.hpp"
#include "spalab/counterexamples.hpp"
#include "spalab/json_io.hpp"
#include "spalab/product_search.hpp"
#include "spalab/scan.hpp"
#include "spalab/spa_engine.hpp"
#include "spalab/witness_family.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace {

using spalab::BipartiteMatrix;
using spalab::WitnessParams;
using json = spalab::json;

constexpr double agreement_tol = 1e-8;

struct InputOpts {
  double a = 0, b = 0, c = 0, theta = 0, p = 0;
  std::string matrix_path;
  CLI::Option* a_opt = nullptr;
  CLI::Option* b_opt = nullptr;
  CLI::Option* c_opt = nullptr;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* p_opt = nullptr;
  CLI::Option* matrix_opt = nullptr;

  void attach(CLI::App* cmd) {
    a_opt = cmd->add_option("--a", a, "Diagonal weight a");
    b_opt = cmd->add_option("--b", b, "Diagonal weight b");
    c_opt = cmd->add_option("--c", c, "Diagonal weight c");
    theta_opt = cmd->add_option("--theta", theta, "Phase angle");
    p_opt = cmd->add_option("--p-theta", p, "Target value of the angle function p (picks the canonical angle)");
    matrix_opt = cmd->add_option("--matrix", matrix_path, "JSON file holding {m, n, entries}");
  }

  bool family_mode() const { return matrix_opt->count() == 0; }

  // Either the full parameter set or a matrix file; angle given exactly once.
  std::optional<std::string> validate() const {
    if (!family_mode()) {
      if (a_opt->count() || b_opt->count() || c_opt->count() || theta_opt->count() ||
          p_opt->count())
        return "--matrix cannot be combined with family parameters";
      return std::nullopt;
    }
    if (!(a_opt->count() && b_opt->count() && c_opt->count()))
      return "provide --a, --b and --c (or --matrix FILE)";
    if (theta_opt->count() + p_opt->count() != 1)
      return "provide exactly one of --theta / --p-theta";
    return std::nullopt;
  }

  WitnessParams<double> params() const {
    const double th = theta_opt->count() ? theta : spalab::theta_for_p(p);
    return WitnessParams<double>(a, b, c, th);
  }

  BipartiteMatrix<double> matrix() const {
    std::ifstream in(matrix_path);
    if (!in) throw std::runtime_error("cannot open " + matrix_path);
    return spalab::matrix_from_json<double>(json::parse(in));
  }
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_classify(const InputOpts& in, bool closed_only, bool numeric_only) {
  if (closed_only && numeric_only) {
    std::cerr << "error: --closed-form and --numeric are mutually exclusive\n";
    return 1;
  }
  if (!in.family_mode()) {
    if (closed_only) {
      std::cerr << "error: --closed-form needs family parameters\n";
      return 1;
    }
    const auto W = in.matrix();
    const auto search = spalab::minimize_product_expectation(W, 50, 12345);
    json out{{"input", "matrix"}, {"min_product_expectation", search.best_value}};
    if (search.best_value < -1e-6) {
      out["type"] = "not-a-witness";
      emit(out);
      return 2;
    }
    const auto rep = spalab::classify(W);
    out["numeric"] = json{{"alpha", rep.alpha},
                          {"beta", rep.beta},
                          {"type", std::string(to_token(rep.type))},
                          {"rank", {rep.rank_signature.first, rep.rank_signature.second}},
                          {"spa_is_ppt", rep.spa_is_ppt}};
    emit(out);
    return 0;
  }

  const auto w = in.params();
  const auto fam = spalab::classify_family(w);
  json out{{"params", spalab::params_to_json(w)},
           {"p", fam.p},
           {"ppt_matrix", fam.is_ppt_matrix},
           {"block_positive", fam.is_block_positive}};
  if (!fam.is_block_positive) {
    out["type"] = "not-a-witness";
    emit(out);
    return 2;
  }
  json closed{{"alpha", spalab::alpha_closed_form(w)},
              {"beta", spalab::beta_closed_form(w)},
              {"type", std::string(to_token(fam.type))}};
  if (closed_only) {
    out["closed_form"] = closed;
    emit(out);
    return 0;
  }
  const auto rep = spalab::classify(spalab::build_witness(w));
  json numeric{{"alpha", rep.alpha},
               {"beta", rep.beta},
               {"type", std::string(to_token(rep.type))},
               {"rank", {rep.rank_signature.first, rep.rank_signature.second}},
               {"spa_is_ppt", rep.spa_is_ppt}};
  if (numeric_only) {
    out["numeric"] = numeric;
    emit(out);
    return 0;
  }
  const bool agree = std::abs(double(closed["alpha"]) - rep.alpha) <= agreement_tol &&
                     std::abs(double(closed["beta"]) - rep.beta) <= agreement_tol &&
                     fam.type == rep.type;
  out["closed_form"] = closed;
  out["numeric"] = numeric;
  out["agreement"] = agree;
  emit(out);
  return agree ? 0 : 1;
}

int run_spa(const InputOpts& in, bool certify, int restarts, std::uint64_t seed) {
  json out;
  BipartiteMatrix<double> W = [&] {
    if (in.family_mode()) {
      const auto w = in.params();
      const auto sf = spalab::spa_closed_form(w);  // throws when a >= p or not block positive
      out["closed_form"] =
          json{{"scale", sf.scale}, {"params", spalab::params_to_json(sf.params)}};
      return spalab::build_witness(w);
    }
    auto M = in.matrix();
    if (spalab::min_eigenvalue(M) >= -1e-9)
      throw std::runtime_error("matrix is already positive semidefinite");
    return M;
  }();
  const auto rep = spalab::classify(W);
  out.update(spalab::spa_report_to_json(rep));
  int code = 0;
  if (certify) {
    const double tr = rep.spa.entries().trace().real();
    const BipartiteMatrix<double> rho(rep.spa.dim_a(), rep.spa.dim_b(),
                                      spalab::ComplexMatrix<double>(rep.spa.entries() / tr));
    const int effective = std::max(restarts, 200);
    const double residual = spalab::edge_state_residual(rho, effective, seed);
    const bool entangled = residual > 1e-6;
    out["edge_residual"] = residual;
    out["entangled"] = entangled;
    code = entangled ? 0 : 2;
  }
  emit(out);
  return code;
}

int run_scan(double p, int resolution, const std::string& out_path) {
  const auto rows = spalab::scan_plane(p, resolution);
  if (out_path.empty()) {
    spalab::write_scan_csv(std::cout, rows);
    return std::cout.good() ? 0 : 1;
  }
  std::ofstream f(out_path);
  if (!f) {
    std::cerr << "error: cannot open " << out_path << " for writing\n";
    return 1;
  }
  spalab::write_scan_csv(f, rows);
  f.flush();
  if (!f.good()) {
    std::cerr << "error: write to " << out_path << " failed\n";
    return 1;
  }
  return 0;
}

void report_stages(const spalab::VerificationDossier<double>& d) {
  std::cerr << "case " << to_token(d.solution.tag) << " at p=" << d.solution.p << ":\n";
  for (const auto& st : d.stages)
    std::cerr << "  " << (st.pass ? "pass" : "FAIL") << "  " << st.name
              << "  (value=" << st.value << ", tolerance=" << st.tolerance << ")\n";
  for (const auto& note : d.notes) std::cerr << "  note: " << note << "\n";
}

int run_verify(bool all, const std::string& case_tag, CLI::Option* case_opt, double p,
               CLI::Option* p_opt, double theta, CLI::Option* theta_opt, int edge_restarts,
               int zero_restarts, std::uint64_t seed) {
  spalab::VerifyBudget budget;
  budget.edge_restarts = edge_restarts;
  budget.zero_restarts = zero_restarts;
  budget.seed = seed;
  if (all) {
    const std::vector<double> sweep{1.35, 1.4, 1.5,
                                    1.6,  1.0 + 1.0 / std::numbers::sqrt2,
                                    1.75, 1.8,
                                    1.9};
    json arr = json::array();
    bool ok = true;
    for (const double pv : sweep) {
      for (const auto& sol : spalab::enumerate_counterexamples<double>({pv})) {
        const auto d = spalab::verify_counterexample(sol, budget);
        report_stages(d);
        arr.push_back(spalab::dossier_to_json(d));
        ok = ok && d.pass;
      }
    }
    emit(arr);
    return ok ? 0 : 1;
  }
  if (!case_opt->count()) {
    std::cerr << "error: provide --case i|ii (or --all)\n";
    return 1;
  }
  if (p_opt->count() + theta_opt->count() != 1) {
    std::cerr << "error: provide exactly one of --p / --theta\n";
    return 1;
  }
  const double pv = p_opt->count() ? p : spalab::p_theta(theta);
  const auto sol = case_tag == "i" ? spalab::solve_case_i(pv) : spalab::solve_case_ii(pv);
  if (!sol) {
    std::cerr << "no solution in window for case " << case_tag << " at p=" << pv << "\n";
    return 2;
  }
  const auto d = spalab::verify_counterexample(*sol, budget);
  report_stages(d);
  emit(spalab::dossier_to_json(d));
  return d.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Toolkit for block-positive matrices on a 3x3 tensor product: classification by "
      "identity-segment reach, best positive segment points, plane scans, and catalog "
      "verification."};
  app.require_subcommand(1);

  auto* classify_cmd =
      app.add_subcommand("classify", "Classify a matrix by how far its two identity segments stay positive");
  InputOpts classify_in;
  classify_in.attach(classify_cmd);
  bool closed_only = false, numeric_only = false;
  classify_cmd->add_flag("--closed-form", closed_only, "Closed-form results only");
  classify_cmd->add_flag("--numeric", numeric_only, "Numeric results only");

  auto* spa_cmd = app.add_subcommand(
      "spa", "Best positive point of the identity segment, optionally certified entangled");
  InputOpts spa_in;
  spa_in.attach(spa_cmd);
  bool certify = false;
  int spa_restarts = 200;
  std::uint64_t spa_seed = 12345;
  spa_cmd->add_flag("--certify-entangled", certify,
                    "Run the kernel-residual entanglement check on the normalized result");
  spa_cmd->add_option("--restarts", spa_restarts, "Search restarts for the residual check")
      ->default_val(200);
  spa_cmd->add_option("--seed", spa_seed, "Seed for randomized searches")->default_val(12345);

  auto* scan_cmd = app.add_subcommand("scan", "CSV map of the plane a = p - b - c");
  double scan_p = 0, scan_theta = 0;
  int scan_resolution = 60;
  std::string scan_out;
  auto* scan_p_opt = scan_cmd->add_option("--p-theta", scan_p, "Plane parameter p");
  auto* scan_theta_opt =
      scan_cmd->add_option("--theta", scan_theta, "Phase angle (plane parameter is p at this angle)");
  scan_cmd->add_option("--resolution", scan_resolution, "Grid steps per axis")->default_val(60);
  scan_cmd->add_option("--out", scan_out, "Output file (stdout when omitted)");

  auto* verify_cmd =
      app.add_subcommand("verify", "Check catalog entries: approximation stays PPT yet entangled");
  bool verify_all = false;
  std::string verify_case;
  double verify_p = 0, verify_theta = 0;
  int verify_edge_restarts = 200, verify_zero_restarts = 500;
  std::uint64_t verify_seed = 12345;
  auto* case_opt = verify_cmd->add_option("--case", verify_case, "Catalog branch: i or ii")
                       ->check(CLI::IsMember({"i", "ii"}));
  auto* verify_p_opt = verify_cmd->add_option("--p", verify_p, "Window parameter p");
  auto* verify_theta_opt = verify_cmd->add_option("--theta", verify_theta, "Phase angle");
  verify_cmd->add_flag("--all", verify_all, "Sweep a built-in grid over both branches");
  verify_cmd->add_option("--restarts", verify_edge_restarts, "Restarts for the residual check")
      ->default_val(200);
  verify_cmd->add_option("--zero-restarts", verify_zero_restarts,
                         "Restarts for the zero-set search")
      ->default_val(500);
  verify_cmd->add_option("--seed", verify_seed, "Seed for randomized searches")
      ->default_val(12345);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (classify_cmd->parsed()) {
      if (auto msg = classify_in.validate()) {
        std::cerr << "error: " << *msg << "\n";
        return 1;
      }
      return run_classify(classify_in, closed_only, numeric_only);
    }
    if (spa_cmd->parsed()) {
      if (auto msg = spa_in.validate()) {
        std::cerr << "error: " << *msg << "\n";
        return 1;
      }
      return run_spa(spa_in, certify, spa_restarts, spa_seed);
    }
    if (scan_cmd->parsed()) {
      if (scan_p_opt->count() + scan_theta_opt->count() != 1) {
        std::cerr << "error: provide exactly one of --p-theta / --theta\n";
        return 1;
      }
      const double p = scan_p_opt->count() ? scan_p : spalab::p_theta(scan_theta);
      return run_scan(p, scan_resolution, scan_out);
    }
    if (verify_cmd->parsed()) {
      return run_verify(verify_all, verify_case, case_opt, verify_p, verify_p_opt, verify_theta,
                        verify_theta_opt, verify_edge_restarts, verify_zero_restarts,
                        verify_seed);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}
