#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "taintchain/assignment_io.hpp"
#include "taintchain/chain_io.hpp"
#include "taintchain/propagate.hpp"
#include "taintchain/validation.hpp"

using namespace taintchain;
using namespace testing_support;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "taintchain");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Writes the fifo_slice fixture as chain and taint files.
struct Files {
  TempDir dir;
  FifoSliceFixture fixture = fifo_slice_fixture();
  std::string chain = dir.file("chain.jsonl");
  std::string taints = dir.file("taints.jsonl");

  Files() {
    write_file(chain, write_chain(fixture.chain));
    std::ostringstream t;
    write_taint_sources(t, fixture.sources);
    write_file(taints, t.str());
  }
};

}  // namespace

TEST_CASE("cli validate") {
  Files f;
  const Run ok = run({"validate", "--chain", f.chain});
  CHECK(ok.code == 0);
  CHECK(ok.out == "0 violations\n");

  std::string text = write_chain(f.fixture.chain);
  const auto pos = text.find("\"value\":6");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 9, "\"value\":7");
  write_file(f.dir.file("bad.jsonl"), text);
  const Run bad = run({"validate", "--chain", f.dir.file("bad.jsonl"), "--subsidy", "5"});
  CHECK(bad.code == 1);
  CHECK(bad.out.rfind("1 violations\n", 0) == 0);
  CHECK(bad.out.find("coinbase-value") != std::string::npos);
  CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("cli usage and domain errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"validate", "--bogus"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"propagate", "--chain", "x", "--taints", "y"}).code == 2);
  const Run missing = run({"validate", "--chain", "/nonexistent/chain.jsonl"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("cannot open") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli propagate writes a parseable assignment") {
  Files f;
  for (const std::string policy : {"fifo", "poison", "haircut"}) {
    const std::string out = f.dir.file(policy + ".jsonl");
    const Run r = run({"propagate", "--policy", policy, "--chain", f.chain, "--taints", f.taints, "--out", out});
    REQUIRE(r.code == 0);
    std::istringstream in(read_file(out));
    const TaintAssignment parsed = parse_assignment(in, f.fixture.chain);
    CHECK(parsed == propagate(f.fixture.chain, f.fixture.sources, *parse_policy(policy)));
  }
  CHECK(run({"propagate", "--policy", "magic", "--chain", f.chain, "--taints", f.taints}).code == 2);
}

TEST_CASE("cli trace-back on the fifo_slice fixture") {
  Files f;
  const Run r = run({"trace-back", "--chain", f.chain, "--taints", f.taints, "--txid", f.fixture.x.hex(), "--vout", "1",
                     "--from", "0", "--to", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find(R"("terminal":{"type":"taint","label":"RED","source_txid":")" + f.fixture.t1.hex()) != std::string::npos);
  CHECK(run({"trace-back", "--chain", f.chain, "--taints", f.taints, "--txid", f.fixture.x.hex(), "--vout", "1", "--to",
             "99"}).code == 1);
}

TEST_CASE("cli diffusion, patterns and export-svg") {
  Files f;
  const Run csv = run({"diffusion", "--chain", f.chain, "--taints", f.taints, "--format", "csv", "--policy", "poison"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("height,policy,fraction\n0,poison,", 0) == 0);
  const Run json = run({"diffusion", "--chain", f.chain, "--taints", f.taints});
  CHECK(json.out.rfind(R"({"policies":[{"policy":"fifo")", 0) == 0);
  const Run patterns = run({"patterns", "--chain", f.chain, "--taints", f.taints, "--min-fan", "2"});
  CHECK(patterns.code == 0);
  CHECK(patterns.out.rfind(R"({"patterns":[{"kind":"Splitting","txids":[")" + f.fixture.x.hex() + R"("],"label":"RED","score":"1/2"}]})", 0) == 0);
  CHECK(run({"patterns", "--chain", f.chain, "--taints", f.taints}).out == "{\"patterns\":[]}\n");
  const std::string svg = f.dir.file("view.svg");
  CHECK(run({"export-svg", "--chain", f.chain, "--taints", f.taints, "--out", svg}).code == 0);
  CHECK(read_file(svg).find("data-txid=\"" + f.fixture.x.hex() + "\"") != std::string::npos);
  CHECK(run({"export-svg", "--chain", f.chain, "--taints", f.taints, "--from", "3", "--to", "1"}).code == 1);
}

TEST_CASE("cli generate is deterministic and yields a valid chain") {
  TempDir dir;
  write_file(dir.file("spec.json"), R"({"seed":3,"n_blocks":10,"txs_per_block":3,"n_taint_sources":1,
    "patterns":[{"kind":"Splitting","params":{"fan":12}}]})");
  const Run a = run({"generate", "--spec", dir.file("spec.json"), "--out", dir.file("a.jsonl"), "--taints-out",
                     dir.file("t.jsonl"), "--ledger", dir.file("ledger.json")});
  REQUIRE(a.code == 0);
  CHECK(run({"generate", "--spec", dir.file("spec.json"), "--out", dir.file("b.jsonl")}).code == 0);
  CHECK(read_file(dir.file("a.jsonl")) == read_file(dir.file("b.jsonl")));
  CHECK(validate_chain(parse_chain_file(dir.file("a.jsonl"))).ok());
  CHECK(read_file(dir.file("ledger.json")).find("\"Splitting\"") != std::string::npos);
  const Run p = run({"patterns", "--chain", dir.file("a.jsonl"), "--taints", dir.file("t.jsonl")});
  CHECK(p.out.find("\"Splitting\"") != std::string::npos);
  CHECK(run({"generate", "--spec", dir.file("missing.json")}).code == 1);
}

TEST_CASE("cli reads paths from TAINTCHAIN_CONFIG") {
  Files f;
  write_file(f.dir.file("config.json"), R"({"chain":"chain.jsonl","taints":"taints.jsonl"})");
  setenv("TAINTCHAIN_CONFIG", f.dir.file("config.json").c_str(), 1);
  const Run r = run({"validate"});
  const Run t = run({"trace-back", "--txid", f.fixture.x.hex(), "--vout", "0"});
  unsetenv("TAINTCHAIN_CONFIG");
  CHECK(r.code == 0);
  CHECK(r.out == "0 violations\n");
  CHECK(t.code == 0);
  CHECK(run({"--config", f.dir.file("config.json"), "validate"}).code == 0);
}
