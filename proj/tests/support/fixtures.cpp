#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "builder.hpp"

namespace testing_support {

FifoSliceFixture fifo_slice_fixture() {
  FifoSliceFixture f;
  ChainBuilder b(5);
  f.cb[0] = b.open_block();
  f.cb[1] = b.open_block();
  f.t1 = b.add({{f.cb[0], 0}}, {5});
  f.cb[2] = b.open_block();
  f.x = b.add({{f.t1, 0}, {f.cb[1], 0}}, {4, 5});
  f.cb[3] = b.open_block();
  f.y = b.add({{f.x, 0}}, {4});
  f.chain = b.build();
  f.sources = {TaintSource{f.t1, 0u, "RED", "#d62728"}};
  return f;
}

HaircutFixture haircut_fixture() {
  HaircutFixture f;
  ChainBuilder b(10 * kCoin);
  const Txid cb0 = b.open_block(2, {3 * kCoin, 7 * kCoin});
  b.open_block();
  f.t = b.add({{cb0, 0}}, {3 * kCoin});
  b.open_block();
  f.w = b.add({{f.t, 0}, {cb0, 1}}, {2 * kCoin, 5 * kCoin, 3 * kCoin});
  f.chain = b.build();
  f.sources = {TaintSource{f.t, 0u, "RED", std::nullopt}};
  return f;
}

GeneratorSpec service_spec() {
  GeneratorSpec spec;
  spec.seed = 11;
  spec.n_blocks = 12;
  spec.txs_per_block = 3;
  spec.n_taint_sources = 2;
  spec.subsidy = 100000;
  spec.patterns = {Injection{InjectionKind::Splitting, 12, 0, 90, 0},
                   Injection{InjectionKind::PeelingChain, 0, 5, 90, 0}};
  return spec;
}

GeneratedChain service_fixture() { return generate_synthetic_chain(service_spec()); }

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("taintchain-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace testing_support
