#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "majkit/json_io.hpp"

using namespace majkit;
using nlohmann::json;

namespace {

std::string bin_path() {
  const char* p = std::getenv("MAJKIT_BIN");
  REQUIRE_MESSAGE(p != nullptr, "MAJKIT_BIN must point at the CLI");
  return p;
}

struct CliResult {
  int code;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = bin_path() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const json& j) {
  std::string path = "/tmp/majkit_test_" + name + ".json";
  std::ofstream f(path);
  f << j.dump();
  return path;
}

}  // namespace

TEST_CASE("sequence JSON round-trips exactly") {
  std::vector<MonotoneSeq> cases = {
      MonotoneSeq::finite({Rat(3), Rat(2), Rat(1)}),
      MonotoneSeq::geometric(Rat(1), Rat(1, 2)),
      MonotoneSeq::power_law(Rat(2, 3), 2),
      MonotoneSeq::spliced({Rat(2), Rat(1, 2)}, 1, MonotoneSeq::harmonic()),
      MonotoneSeq::prefix({Rat(1), Rat(1, 7)}),
      MonotoneSeq::ampliated(3, MonotoneSeq::geometric(Rat(1), Rat(1, 3))),
  };
  for (const MonotoneSeq& s : cases) {
    MonotoneSeq back = seq_from_json(seq_to_json(s));
    CHECK(structurally_equal(s, back));
  }
}

TEST_CASE("matrix JSON round-trips exactly") {
  RationalMatTrunc m(3, 4, 2);
  m.set(1, 1, Rat(1, 3));
  m.set(2, 4, Rat(7, 2));
  RationalMatTrunc back = mat_from_json(mat_to_json(m));
  CHECK(back.n_rows() == 3);
  CHECK(back.n_cols() == 4);
  CHECK(back.rows_finalized() == 2);
  CHECK(back.at(1, 1) == Rat(1, 3));
  CHECK(back.at(2, 4) == Rat(7, 2));

  SignedSqrtMat u(2, 2);
  u.set(1, 1, +1, Rat(1, 2));
  u.set(1, 2, -1, Rat(1, 2));
  SignedSqrtMat uback = sqrt_mat_from_json(sqrt_mat_to_json(u));
  CHECK(uback.find(1, 2)->sign == -1);
  CHECK(uback.find(1, 2)->radicand == Rat(1, 2));
}

TEST_CASE("cli: check exit codes track the verdict") {
  std::string xi = write_temp("xi_half", json{{"kind", "finite"}, {"values", {"1/2", "1/2"}}});
  std::string eta = write_temp("eta_one", json{{"kind", "finite"}, {"values", {"1"}}});
  CliResult holds = run_cli("check weak " + xi + " " + eta);
  CHECK(holds.code == 0);
  json payload = json::parse(holds.out);
  CHECK(payload.at("verdict") == "holds");

  CliResult fails = run_cli("check weak " + eta + " " + xi);
  CHECK(fails.code == 1);
  CHECK(json::parse(fails.out).at("verdict") == "fails");

  std::string omega = write_temp("omega", json{{"kind", "powerlaw"}, {"c", "1"}, {"s", 1}});
  CliResult inc = run_cli("check block " + write_temp("xi_homega", json{{"kind", "powerlaw"}, {"c", "1/2"}, {"s", 1}}) + " " + omega);
  CHECK(inc.code == 2);
}

TEST_CASE("cli: horn emits the worked step stream") {
  std::string xi = write_temp("xi321", json{{"kind", "finite"}, {"values", {"3", "2", "1"}}});
  std::string eta = write_temp("eta420", json{{"kind", "finite"}, {"values", {"4", "2"}}});
  CliResult r = run_cli("horn " + xi + " " + eta);
  REQUIRE(r.code == 0);
  json payload = json::parse(r.out);
  REQUIRE(payload.at("steps").size() == 3);
  CHECK(payload["steps"][0] == json::array({1, "1/2"}));
  CHECK(payload["steps"][1] == json::array({1, "2/3"}));
  CHECK(payload["steps"][2] == json::array({1, "1"}));
  // emitted matrices re-parse to equal values
  RationalMatTrunc q = mat_from_json(payload.at("q"));
  CHECK(q.at(3, 3) == Rat(2, 3));
}

TEST_CASE("cli: ortho-decide answers no on the classic matrix") {
  json bad{{"rows", 3},
           {"cols", 3},
           {"rows_finalized", 3},
           {"entries",
            {{1, 1, "1/2"}, {1, 2, "1/2"}, {2, 1, "1/2"}, {2, 3, "1/2"}, {3, 2, "1/2"}, {3, 3, "1/2"}}}};
  CliResult r = run_cli("ortho-decide " + write_temp("bad3", bad));
  CHECK(r.code == 1);
  CHECK(json::parse(r.out).at("orthostochastic") == false);

  json good{{"rows", 2},
            {"cols", 2},
            {"rows_finalized", 2},
            {"entries", {{1, 1, "1/3"}, {1, 2, "2/3"}, {2, 1, "2/3"}, {2, 2, "1/3"}}}};
  CliResult y = run_cli("ortho-decide " + write_temp("good2", good));
  CHECK(y.code == 0);
}

TEST_CASE("cli: canon transcript round-trips and basic flags work") {
  std::string xi = write_temp("xi_halfo", json{{"kind", "powerlaw"}, {"c", "1/2"}, {"s", 1}});
  std::string eta = write_temp("eta_o", json{{"kind", "powerlaw"}, {"c", "1"}, {"s", 1}});
  CliResult r = run_cli("--steps 6 canon " + xi + " " + eta);
  REQUIRE(r.code == 0);
  json payload = json::parse(r.out);
  CHECK(payload.at("steps").size() == 6);
  CHECK(payload["steps"][0]["m"] == 2);
  RationalMatTrunc rows = mat_from_json(payload.at("rows"));
  CHECK(rows.rows_finalized() == 6);

  CliResult usage = run_cli("check nonsense-kind " + xi + " " + eta);
  CHECK(usage.code == 64);

  CliResult gen = run_cli("gen ex_2_11 --k 2");
  REQUIRE(gen.code == 0);
  json gj = json::parse(gen.out);
  SignedSqrtMat u = sqrt_mat_from_json(gj.at("u"));
  CHECK(u.find(1, 1)->radicand == Rat(1, 2));
  CHECK(u.find(1, 4)->radicand == Rat(1, 2));
}

TEST_CASE("cli: csv export is dense with decimal radicals") {
  CliResult r = run_cli("--format csv gen ex_2_11 --k 1");
  REQUIRE(r.code == 0);
  // two rows, dense over 4 columns; radical entries as signed decimals
  auto nl = r.out.find('\n');
  REQUIRE(nl != std::string::npos);
  std::string first = r.out.substr(0, nl);
  CHECK(std::count(first.begin(), first.end(), ',') == 3);
  CHECK(first.find("0.7071067811865") != std::string::npos);
  CHECK(r.out.find("-0.7071067811865") != std::string::npos);

  std::string xi = write_temp("csv_xi", json{{"kind", "finite"}, {"values", {"1/2", "1/2"}}});
  std::string eta = write_temp("csv_eta", json{{"kind", "finite"}, {"values", {"1"}}});
  CliResult h = run_cli("--format csv horn " + xi + " " + eta);
  REQUIRE(h.code == 0);
  CHECK(h.out.find("1/2,1/2") != std::string::npos);
}

TEST_CASE("cli: ideal membership verdict and witness") {
  std::string eta = write_temp("gen_o", json{{"kind", "powerlaw"}, {"c", "1"}, {"s", 1}});
  std::string xi = write_temp("memb_p2", json{{"kind", "powerlaw"}, {"c", "1"}, {"s", 2}});
  CliResult r = run_cli("ideal member " + xi + " " + eta);
  CHECK(r.code == 0);
  json payload = json::parse(r.out);
  CHECK(payload.at("verdict") == "holds");
  CHECK(payload.contains("c"));
}
