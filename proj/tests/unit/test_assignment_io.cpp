#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "random_chain.hpp"
#include "taintchain/assignment_io.hpp"
#include "taintchain/propagate.hpp"

using namespace taintchain;
using namespace testing_support;

namespace {

TaintAssignment reparse(const Chain& chain, const TaintAssignment& a) {
  std::istringstream in(write_assignment(chain, a));
  return parse_assignment(in, chain, std::visit([](const auto& x) { return x.labels(); }, a));
}

std::string line_for(const std::string& text, const Txid& txid, int vout) {
  const std::string key = R"("txid":")" + txid.hex() + R"(","vout":)" + std::to_string(vout) + ",";
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.find(key) != std::string::npos) return line;
  }
  return {};
}

}  // namespace

TEST_CASE("assignment export uses the documented record shapes") {
  const auto f = fifo_slice_fixture();
  const std::string fifo = write_assignment(f.chain, fifo_propagate(f.chain, f.sources));
  CHECK(line_for(fifo, f.x, 1) ==
        R"({"txid":")" + f.x.hex() + R"(","vout":1,"policy":"fifo","segments":[[1,"RED"],[4,"CLEAN"]]})");

  const auto h = haircut_fixture();
  const std::string haircut = write_assignment(h.chain, haircut_propagate(h.chain, h.sources));
  CHECK(line_for(haircut, h.w, 0) ==
        R"({"txid":")" + h.w.hex() + R"(","vout":0,"policy":"haircut","fractions":{"RED":"3/10"}})");

  const std::string poison = write_assignment(h.chain, poison_propagate(h.chain, h.sources));
  CHECK(line_for(poison, h.w, 2) == R"({"txid":")" + h.w.hex() + R"(","vout":2,"policy":"poison","labels":["RED"]})");
}

TEST_CASE("property: every policy's export re-parses to the same assignment") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = random_chain(seed);
    for (Policy p : {Policy::Fifo, Policy::Poison, Policy::Haircut}) {
      const TaintAssignment a = propagate(r.chain, r.sources, p);
      INFO("seed " << seed << " policy " << to_string(p));
      CHECK(reparse(r.chain, a) == a);
    }
  }
}

TEST_CASE("parse_assignment rejects inconsistent files") {
  const auto f = fifo_slice_fixture();
  const std::string good = write_assignment(f.chain, fifo_propagate(f.chain, f.sources));
  SUBCASE("missing output") {
    std::istringstream in(good.substr(0, good.rfind('\n', good.size() - 2) + 1));
    CHECK_THROWS_AS(parse_assignment(in, f.chain), ParseError);
  }
  SUBCASE("duplicate output") {
    const std::string first = good.substr(0, good.find('\n') + 1);
    std::istringstream in(good + first);
    CHECK_THROWS_AS(parse_assignment(in, f.chain), ParseError);
  }
  SUBCASE("segments not matching the output value") {
    const std::string line = line_for(good, f.x, 1);
    std::string bad = good;
    bad.replace(bad.find(line), line.size(),
                R"({"txid":")" + f.x.hex() + R"(","vout":1,"policy":"fifo","segments":[[1,"RED"],[3,"CLEAN"]]})");
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_assignment(in, f.chain), ParseError);
  }
  SUBCASE("mixed policies") {
    std::string bad = good;
    const std::string line = line_for(good, f.y, 0);
    bad.replace(bad.find(line), line.size(), R"({"txid":")" + f.y.hex() + R"(","vout":0,"policy":"poison","labels":["RED"]})");
    std::istringstream in(bad);
    CHECK_THROWS_AS(parse_assignment(in, f.chain), ParseError);
  }
  SUBCASE("haircut fraction above one") {
    const auto h = haircut_fixture();
    std::string text = write_assignment(h.chain, haircut_propagate(h.chain, h.sources));
    text.replace(text.find("\"3/10\""), 6, "\"11/10\"");
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_assignment(in, h.chain), ParseError);
  }
}
