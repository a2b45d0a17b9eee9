#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "taintchain/chain.hpp"
#include "taintchain/generator.hpp"
#include "taintchain/taint_source.hpp"

namespace testing_support {

using namespace taintchain;

// Subsidy 5.
//   block 0: cb0 -> 5
//   block 1: cb1 -> 5;  T1 spends cb0:0 -> 5, source RED on T1:0
//   block 2: cb2 -> 6;  X spends [T1:0, cb1:0] -> 4, 5 (fee 1)
//   block 3: cb3 -> 5;  Y spends X:0 -> 4
struct FifoSliceFixture {
  Chain chain;
  std::vector<TaintSource> sources;
  Txid t1, x, y;
  Txid cb[4];
};
FifoSliceFixture fifo_slice_fixture();

// Subsidy 10 BTC minted as 3 + 7 BTC. T marks the 3 BTC RED, then W spends
// both into outputs of 2, 5 and 3 BTC.
struct HaircutFixture {
  Chain chain;
  std::vector<TaintSource> sources;
  Txid t, w;
};
HaircutFixture haircut_fixture();

// Generated chain with colored RED and BLUE sources, a splitting and a
// peeling chain.
GeneratorSpec service_spec();
GeneratedChain service_fixture();

// Directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace testing_support
