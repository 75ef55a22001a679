// Batch front end: every decision procedure and construction behind one
// binary with machine-readable JSON output.
//
// Exit codes: 0 holds/success, 1 fails/"no", 2 inconclusive, 3 domain error,
// 64 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "majkit/canon.hpp"
#include "majkit/decomp.hpp"
#include "majkit/error.hpp"
#include "majkit/horn.hpp"
#include "majkit/ideals.hpp"
#include "majkit/intermediate.hpp"
#include "majkit/json_io.hpp"
#include "majkit/majorize.hpp"
#include "majkit/stoch.hpp"

using namespace majkit;
using nlohmann::json;

namespace {

struct RunConfig {
  std::size_t horizon = 1000;
  double tolerance = 1e-10;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::size_t steps = 50;
  std::size_t depth = 16;
  std::string out_path;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::parse_error, "cannot open " + path);
  json j;
  in >> j;
  return j;
}

MonotoneSeq read_seq(const std::string& path) { return seq_from_json(read_json_file(path)); }
RationalMatTrunc read_mat(const std::string& path) { return mat_from_json(read_json_file(path)); }

int emit(const RunConfig& cfg, const json& payload, int code) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) raise(Errc::parse_error, "cannot write " + cfg.out_path);
    os = &file;
  }
  *os << payload.dump(2) << "\n";
  return code;
}

int verdict_code(const Verdict3& v) {
  switch (v.state()) {
    case Verdict3::State::holds: return 0;
    case Verdict3::State::fails: return 1;
    case Verdict3::State::inconclusive: return 2;
  }
  return 3;
}

RelKind parse_rel(const std::string& s) {
  if (s == "weak") return RelKind::weak;
  if (s == "strong") return RelKind::strong;
  if (s == "block") return RelKind::block;
  if (s == "at-inf") return RelKind::at_inf;
  if (s == "strong-at-inf") return RelKind::strong_at_inf;
  if (s == "p-shift") return RelKind::p_shift;
  throw CLI::ValidationError("kind", "unknown relation kind: " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact majorization calculus"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--horizon", cfg.horizon, "scan horizon")->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tolerance, "float pre-filter tolerance");
  app.add_option("--format", cfg.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", cfg.seed, "seed for randomized helpers");
  app.add_option("--steps", cfg.steps, "construction steps / rows");
  app.add_option("--depth", cfg.depth, "decomposition depth cap");
  app.add_option("--out", cfg.out_path, "write the payload here instead of stdout");

  std::string kind, xi_path, eta_path, mat_path, op, which;
  std::size_t pshift = 0;

  CLI::App* check = app.add_subcommand("check", "decide a majorization relation");
  check->add_option("kind", kind, "weak|strong|block|at-inf|strong-at-inf|p-shift")->required();
  check->add_option("xi", xi_path)->required();
  check->add_option("eta", eta_path)->required();
  check->add_option("--p", pshift, "shift amount for p-shift");

  CLI::App* horn = app.add_subcommand("horn", "finite Horn witness");
  horn->add_option("xi", xi_path)->required();
  horn->add_option("eta", eta_path)->required();

  CLI::App* canon = app.add_subcommand("canon", "canonical construction transcript");
  canon->add_option("xi", xi_path)->required();
  canon->add_option("eta", eta_path)->required();

  CLI::App* inter = app.add_subcommand("intermediate", "intermediate sequences");
  inter->add_option("kind", kind,
                    "finite-zeta|finite-rho|finite-zeta-inf|finite-rho-inf|zeta|rho|zeta-inf|rho-inf")
      ->required();
  inter->add_option("xi", xi_path)->required();
  inter->add_option("eta", eta_path)->required();

  CLI::App* decomp = app.add_subcommand("decompose", "direct-sum assembly of a weak majorization");
  decomp->add_option("xi", xi_path)->required();
  decomp->add_option("eta", eta_path)->required();

  CLI::App* classify_cmd = app.add_subcommand("classify", "stochastic classification");
  classify_cmd->add_option("matrix", mat_path)->required();

  CLI::App* birkhoff = app.add_subcommand("birkhoff", "decompose into permutations");
  birkhoff->add_option("matrix", mat_path)->required();

  CLI::App* ortho = app.add_subcommand("ortho-decide", "orthostochasticity by sign search");
  ortho->add_option("matrix", mat_path)->required();

  CLI::App* ideal = app.add_subcommand("ideal", "principal-ideal calculus");
  ideal->add_option("op", op, "member|am-closure|aminf-closure|probe")->required();
  ideal->add_option("arg", xi_path, "sequence (or matrix for probe)")->required();
  ideal->add_option("generator", eta_path)->required();
  std::string probe_sample;
  ideal->add_option("--sample", probe_sample, "sample sequence for probe");

  CLI::App* gen = app.add_subcommand("gen", "matrix generators");
  gen->add_option("which", which, "ex_2_11|ex_6_11")->required();
  std::size_t gen_k = 4;
  gen->add_option("--k", gen_k, "pair count / truncation size");
  std::string gen_seq;
  gen->add_option("--seq", gen_seq, "weight sequence for ex_6_11");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 64;
  }

  try {
    if (check->parsed()) {
      RelKind rk = parse_rel(kind);
      Verdict3 v = relation(rk, read_seq(xi_path), read_seq(eta_path), cfg.horizon, pshift);
      return emit(cfg, verdict_to_json(v, cfg.horizon), verdict_code(v));
    }
    if (horn->parsed()) {
      MonotoneSeq xs = read_seq(xi_path), es = read_seq(eta_path);
      std::size_t n = std::max(xs.support().end, es.support().end);
      if (n == 0 || !xs.support().is_finite() || !es.support().is_finite())
        raise(Errc::bad_support, "finite witness needs finite-support inputs");
      std::vector<Rat> xv, ev;
      for (std::size_t j = 1; j <= n; ++j) {
        xv.push_back(xs.term(j));
        ev.push_back(es.term(j));
      }
      HornWitness w = horn_witness(xv, ev);
      if (cfg.format == "csv") {
        std::cout << mat_to_csv(w.q);
        return 0;
      }
      return emit(cfg, horn_to_json(w), 0);
    }
    if (canon->parsed()) {
      CanonRun run = canon_run(read_seq(xi_path), read_seq(eta_path), cfg.steps);
      if (cfg.format == "csv") {
        std::cout << mat_to_csv(run.q_rows);
        return 0;
      }
      return emit(cfg, canon_run_to_json(run), 0);
    }
    if (inter->parsed()) {
      MonotoneSeq xs = read_seq(xi_path), es = read_seq(eta_path);
      if (kind.rfind("finite-", 0) == 0) {
        std::size_t n = std::max(xs.support().end, es.support().end);
        if (n == 0 || !xs.support().is_finite() || !es.support().is_finite())
          raise(Errc::bad_support, "finite kinds need finite-support inputs");
        std::vector<Rat> xv, ev;
        for (std::size_t j = 1; j <= n; ++j) {
          xv.push_back(xs.term(j));
          ev.push_back(es.term(j));
        }
        FiniteKind fk;
        if (kind == "finite-zeta") fk = FiniteKind::zeta_upper;
        else if (kind == "finite-rho") fk = FiniteKind::rho_upper;
        else if (kind == "finite-zeta-inf") fk = FiniteKind::zeta_tail;
        else if (kind == "finite-rho-inf") fk = FiniteKind::rho_tail;
        else throw CLI::ValidationError("kind", "unknown finite kind");
        std::vector<Rat> out = finite_intermediate(fk, xv, ev);
        json vals = json::array();
        for (const Rat& r : out) vals.push_back(r.str());
        return emit(cfg, json{{"kind", kind}, {"values", vals}}, 0);
      }
      IntermediateResult r;
      if (kind == "zeta") r = infinite_zeta(xs, es, cfg.horizon);
      else if (kind == "rho") r = infinite_rho(xs, es, cfg.horizon);
      else if (kind == "zeta-inf") r = inf_intermediate(InfKind::zeta, xs, es, cfg.horizon);
      else if (kind == "rho-inf") r = inf_intermediate(InfKind::rho, xs, es, cfg.horizon);
      else throw CLI::ValidationError("kind", "unknown kind: " + kind);
      json payload{{"kind", kind},
                   {"sequence", seq_to_json(r.seq)},
                   {"conclusive", r.conclusive},
                   {"verified_to", r.verified_to},
                   {"note", r.note}};
      return emit(cfg, payload, r.conclusive ? 0 : 2);
    }
    if (decomp->parsed()) {
      MonotoneSeq xs = read_seq(xi_path), es = read_seq(eta_path);
      AssembleReport rep =
          assemble(xs, es, cfg.depth, cfg.steps, std::max(cfg.horizon, std::size_t{2048}));
      json payload{{"q", mat_to_json(rep.q)},
                   {"covered_rows", rep.covered_rows},
                   {"uncovered_rows", rep.uncovered_rows},
                   {"depth_used", rep.depth_used}};
      // partition streams of the first level, when one exists
      try {
        ShiftCert cert = shift_search(xs, es, std::min<std::size_t>(cfg.horizon, 512));
        AlphaEstimate alpha = alpha_estimate(xs, es, std::min<std::size_t>(cfg.horizon, 512));
        PartitionPlan plan = partition_construct(xs, es, cert, alpha, cfg.horizon);
        payload["partition"] = json{{"n1", plan.n1}, {"m1", plan.m1},
                                    {"p", plan.base_p}, {"n", plan.base_n},
                                    {"beta", plan.beta.str()}};
      } catch (const Error&) {
        payload["partition"] = nullptr;  // strong pairs need no split
      }
      return emit(cfg, payload, rep.uncovered_rows.empty() ? 0 : 2);
    }
    if (classify_cmd->parsed()) {
      StochClass c = classify(read_mat(mat_path));
      json blocks = json::array();
      for (auto [lo, hi] : c.blocks) blocks.push_back(json::array({lo, hi}));
      json payload{{"substochastic", c.substochastic},
                   {"row_stochastic", c.row_stochastic},
                   {"column_stochastic", c.column_stochastic},
                   {"doubly_stochastic", c.doubly_stochastic},
                   {"block_doubly", c.block_doubly},
                   {"blocks", blocks}};
      return emit(cfg, payload, 0);
    }
    if (birkhoff->parsed()) {
      RationalMatTrunc p = read_mat(mat_path);
      std::size_t n = std::min(p.n_rows(), p.n_cols());
      auto terms = birkhoff_decompose(p, n);
      json out = json::array();
      for (const auto& t : terms)
        out.push_back(json{{"weight", t.weight.str()}, {"perm", t.perm}});
      return emit(cfg, json{{"terms", out}}, 0);
    }
    if (ortho->parsed()) {
      RationalMatTrunc q = read_mat(mat_path);
      std::size_t n = std::min(q.n_rows(), q.n_cols());
      auto w = orthostochastic_witness(q, n);
      if (!w) return emit(cfg, json{{"orthostochastic", false}}, 1);
      return emit(cfg, json{{"orthostochastic", true}, {"witness", sqrt_mat_to_json(*w)}}, 0);
    }
    if (ideal->parsed()) {
      PrincipalIdeal pi{read_seq(eta_path)};
      IdealSearchParams params = IdealSearchParams::defaults();
      if (op == "member" || op == "am-closure" || op == "aminf-closure") {
        MonotoneSeq s = read_seq(xi_path);
        MemberResult r = op == "member"
                             ? member(s, pi, params, cfg.horizon)
                             : closure_member(op == "am-closure" ? ClosureKind::am
                                                                 : ClosureKind::am_inf,
                                              s, pi, params, cfg.horizon);
        json payload = verdict_to_json(r.verdict, cfg.horizon);
        if (r.verdict.is_holds()) {
          payload["c"] = r.c.str();
          payload["m"] = r.m;
        }
        return emit(cfg, payload, verdict_code(r.verdict));
      }
      if (op == "probe") {
        if (probe_sample.empty()) raise(Errc::bad_params, "probe needs --sample");
        RationalMatTrunc p = read_mat(xi_path);
        ProbeReport rep = invariance_probe(pi, p, {read_seq(probe_sample)}, params,
                                           std::min(cfg.horizon, p.rows_finalized()));
        json out = json::array();
        int code = 0;
        for (const ProbeSample& s : rep.samples) {
          json e = verdict_to_json(s.verdict, s.checked_to);
          if (s.verdict.is_holds()) {
            e["c"] = s.c.str();
            e["m"] = s.m;
          }
          code = std::max(code, verdict_code(s.verdict));
          out.push_back(std::move(e));
        }
        return emit(cfg, json{{"samples", out}}, code);
      }
      raise(Errc::bad_params, "unknown ideal op: " + op);
    }
    if (gen->parsed()) {
      SignedSqrtMat u;
      if (which == "ex_2_11") {
        u = half_pair_matrix(gen_k);
      } else if (which == "ex_6_11") {
        if (gen_seq.empty()) raise(Errc::bad_params, "ex_6_11 needs --seq");
        u = nested_column_matrix(read_seq(gen_seq), gen_k);
      } else {
        raise(Errc::bad_params, "unknown generator: " + which);
      }
      if (cfg.format == "csv") {
        std::cout << sqrt_mat_to_csv(u);
        return 0;
      }
      return emit(cfg, json{{"u", sqrt_mat_to_json(u)}, {"q", mat_to_json(schur_square(u))}}, 0);
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 64;
  } catch (const Error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what();
    if (e.index()) std::cerr << " (index " << e.index() << ")";
    std::cerr << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 64;
}
