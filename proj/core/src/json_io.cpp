#include "majkit/json_io.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "majkit/error.hpp"

namespace majkit {

using nlohmann::json;

namespace {

json rat_list(const std::vector<Rat>& v) {
  json out = json::array();
  for (const Rat& r : v) out.push_back(r.str());
  return out;
}

std::vector<Rat> rat_list_from(const json& j) {
  if (!j.is_array()) raise(Errc::parse_error, "expected an array of rationals");
  std::vector<Rat> out;
  for (const auto& e : j) {
    if (e.is_string())
      out.push_back(Rat::parse(e.get<std::string>()));
    else if (e.is_number_integer())
      out.push_back(Rat(static_cast<long long>(e.get<long long>())));
    else
      raise(Errc::parse_error, "rationals must be strings or integers");
  }
  return out;
}

Rat rat_from(const json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat(static_cast<long long>(j.get<long long>()));
  raise(Errc::parse_error, "rationals must be strings or integers");
}

}  // namespace

json seq_to_json(const MonotoneSeq& s) {
  json j;
  switch (s.kind()) {
    case MonotoneSeq::Kind::finite_support:
      j["kind"] = "finite";
      j["values"] = rat_list(s.values());
      break;
    case MonotoneSeq::Kind::geometric:
      j["kind"] = "geometric";
      j["c"] = s.coeff().str();
      j["r"] = s.ratio().str();
      break;
    case MonotoneSeq::Kind::power_law:
      j["kind"] = "powerlaw";
      j["c"] = s.coeff().str();
      j["s"] = s.exponent();
      break;
    case MonotoneSeq::Kind::spliced:
      j["kind"] = "spliced";
      j["head"] = rat_list(s.head());
      j["offset"] = s.offset();
      j["tail"] = seq_to_json(s.tail_seq());
      break;
    case MonotoneSeq::Kind::prefix:
      j["kind"] = "prefix";
      j["values"] = rat_list(s.values());
      break;
    case MonotoneSeq::Kind::ampliated:
      j["kind"] = "ampliated";
      j["m"] = s.ampl_factor();
      j["base"] = seq_to_json(s.base_seq());
      break;
  }
  return j;
}

MonotoneSeq seq_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind"))
    raise(Errc::parse_error, "sequence JSON needs a kind");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "finite") return MonotoneSeq::finite(rat_list_from(j.at("values")));
  if (kind == "geometric")
    return MonotoneSeq::geometric(rat_from(j.at("c")), rat_from(j.at("r")));
  if (kind == "powerlaw")
    return MonotoneSeq::power_law(rat_from(j.at("c")), j.at("s").get<long>());
  if (kind == "spliced") {
    std::size_t offset = j.contains("offset") ? j.at("offset").get<std::size_t>() : 0;
    return MonotoneSeq::spliced(rat_list_from(j.at("head")), offset,
                                seq_from_json(j.at("tail")));
  }
  if (kind == "prefix") return MonotoneSeq::prefix(rat_list_from(j.at("values")));
  if (kind == "ampliated")
    return MonotoneSeq::ampliated(j.at("m").get<std::size_t>(), seq_from_json(j.at("base")));
  raise(Errc::parse_error, "unknown sequence kind: " + kind);
}

json mat_to_json(const RationalMatTrunc& m) {
  json entries = json::array();
  for (const auto& [i, row] : m.rows())
    for (const auto& [j, v] : row) entries.push_back(json::array({i, j, v.str()}));
  return json{{"rows", m.n_rows()},
              {"cols", m.n_cols()},
              {"entries", entries},
              {"rows_finalized", m.rows_finalized()}};
}

RationalMatTrunc mat_from_json(const json& j) {
  if (!j.is_object()) raise(Errc::parse_error, "matrix JSON must be an object");
  RationalMatTrunc m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                     j.value("rows_finalized", std::size_t{0}));
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3) raise(Errc::parse_error, "matrix entries are [i,j,value]");
    m.set(e[0].get<std::size_t>(), e[1].get<std::size_t>(), rat_from(e[2]));
  }
  return m;
}

json sqrt_mat_to_json(const SignedSqrtMat& m) {
  json entries = json::array();
  for (const auto& [i, row] : m.rows())
    for (const auto& [j, e] : row)
      entries.push_back(json::array({i, j, e.sign > 0 ? "+" : "-", e.radicand.str()}));
  return json{{"rows", m.n_rows()}, {"cols", m.n_cols()}, {"entries", entries}};
}

SignedSqrtMat sqrt_mat_from_json(const json& j) {
  if (!j.is_object()) raise(Errc::parse_error, "matrix JSON must be an object");
  SignedSqrtMat m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 4)
      raise(Errc::parse_error, "radical entries are [i,j,sign,value]");
    std::string sign = e[2].get<std::string>();
    if (sign != "+" && sign != "-") raise(Errc::parse_error, "sign must be + or -");
    m.set(e[0].get<std::size_t>(), e[1].get<std::size_t>(), sign == "+" ? +1 : -1, rat_from(e[3]));
  }
  return m;
}

namespace {

json cert_to_json(const MajorCert& c) {
  const char* kind = nullptr;
  switch (c.kind) {
    case MajorCert::Kind::horizon_plus_termwise_tail: kind = "horizon_plus_termwise_tail"; break;
    case MajorCert::Kind::finite_support_exact: kind = "finite_support_exact"; break;
    case MajorCert::Kind::block_equality: kind = "block_equality"; break;
    case MajorCert::Kind::tail_sum_comparison: kind = "tail_sum_comparison"; break;
    case MajorCert::Kind::sum_equality: kind = "sum_equality"; break;
  }
  json out{{"kind", kind}, {"n0", c.n0}};
  if (!c.indices.empty()) out["indices"] = c.indices;
  if (!c.detail.empty()) out["detail"] = c.detail;
  return out;
}

const char* reason_name(FailReason r) {
  switch (r) {
    case FailReason::prefix_violation: return "prefix_violation";
    case FailReason::tail_violation: return "tail_violation";
    case FailReason::liminf_positive: return "liminf_positive";
    case FailReason::liminf_infinite: return "liminf_infinite";
    case FailReason::total_mismatch: return "total_mismatch";
  }
  return "unknown";
}

}  // namespace

json verdict_to_json(const Verdict3& v, std::size_t horizon) {
  json out;
  out["horizon"] = horizon;
  switch (v.state()) {
    case Verdict3::State::holds:
      out["verdict"] = "holds";
      out["certificate"] = cert_to_json(v.certificate());
      break;
    case Verdict3::State::fails:
      out["verdict"] = "fails";
      out["witness"] = json{{"index", v.witness().index},
                            {"deficit", v.witness().deficit.str()},
                            {"reason", reason_name(v.witness().reason)}};
      break;
    case Verdict3::State::inconclusive:
      out["verdict"] = "inconclusive";
      out["scanned"] = v.horizon();
      if (v.has_certificate()) out["evidence"] = cert_to_json(v.certificate());
      break;
  }
  return out;
}

json horn_to_json(const HornWitness& w) {
  json steps = json::array();
  for (const auto& [m, t] : w.steps) steps.push_back(json::array({m, t.str()}));
  return json{{"steps", steps}, {"u", sqrt_mat_to_json(w.u)}, {"q", mat_to_json(w.q)}};
}

json canon_run_to_json(const CanonRun& run) {
  json steps = json::array();
  for (const CanonStep& s : run.steps)
    steps.push_back(json{{"k", s.k}, {"m", s.m}, {"t", s.t.str()}, {"delta", s.delta.str()}});
  json g = json::array();
  for (const Rat& v : run.g_seq) g.push_back(v.str());
  std::vector<std::size_t> boundaries;
  for (const CanonStep& s : run.steps)
    if (s.m == 1 && s.t.is_one()) boundaries.push_back(s.k);
  return json{{"steps", steps},
              {"g_seq", g},
              {"block_boundaries", boundaries},
              {"rows", mat_to_json(run.q_rows)},
              {"w_rows", sqrt_mat_to_json(run.w_rows)}};
}

std::string mat_to_csv(const RationalMatTrunc& m) {
  std::ostringstream os;
  for (std::size_t i = 1; i <= m.n_rows(); ++i) {
    for (std::size_t j = 1; j <= m.n_cols(); ++j) {
      if (j > 1) os << ',';
      os << m.at(i, j).str();
    }
    os << '\n';
  }
  return os.str();
}

std::string sqrt_mat_to_csv(const SignedSqrtMat& m, int digits) {
  std::ostringstream os;
  os.precision(digits);
  for (std::size_t i = 1; i <= m.n_rows(); ++i) {
    for (std::size_t j = 1; j <= m.n_cols(); ++j) {
      if (j > 1) os << ',';
      const SqrtEntry* e = m.find(i, j);
      os << (e ? e->to_double() : 0.0);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace majkit
