#include "taintchain/generator.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>

#include "json_util.hpp"

namespace taintchain {

namespace {

// SplitMix64. Bounded draws use rejection sampling instead of
// std::uniform_int_distribution so the output does not depend on the
// standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::uint64_t state_;
};

constexpr std::array<std::string_view, 10> kLabelNames = {
    "RED", "BLUE", "GREEN", "ORANGE", "PURPLE", "BROWN", "PINK", "GRAY", "OLIVE", "CYAN"};
constexpr std::array<std::string_view, 10> kLabelColors = {
    "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

constexpr std::size_t kMaxBackgroundFan = 8;

struct Utxo {
  OutPoint op;
  Amount value = 0;
};

enum class Shape { OneToOne, ManyToTwo, ManyToMany, OneToMany };

class Builder {
 public:
  explicit Builder(const GeneratorSpec& spec)
      : spec_(spec), rng_(spec.seed), id_rng_(spec.seed ^ 0x5eed5eed5eed5eedULL) {}

  GeneratedChain run() {
    check_spec();
    schedule();
    for (std::size_t h = 0; h < spec_.n_blocks; ++h) build_block(h);
    GeneratedChain out;
    out.chain = Chain(std::move(blocks_), ChainParams{spec_.subsidy});
    out.sources = std::move(sources_);
    for (auto& p : patterns_) out.ledger.records.push_back(std::move(p.record));
    return out;
  }

 private:
  struct Theft {
    std::size_t block = 0;
    std::optional<std::size_t> pattern;
  };

  struct PatternState {
    Injection injection;
    PatternRecord record;
    std::size_t next_block = 0;
    std::size_t step = 0;
    bool done = false;
    std::vector<Utxo> pieces;  // reserved outputs the next step spends
  };

  void check_spec() const {
    const auto& mix = spec_.mix;
    if (mix.many_to_two + mix.one_to_one + mix.many_to_many + mix.one_to_many == 0) {
      throw GeneratorError("background mix weights are all zero");
    }
    if (spec_.subsidy < 1) throw GeneratorError("subsidy must be at least 1 satoshi");
    if (spec_.patterns.size() > spec_.n_taint_sources) {
      throw GeneratorError("every pattern needs its own taint source: " +
                           std::to_string(spec_.patterns.size()) + " patterns, " +
                           std::to_string(spec_.n_taint_sources) + " sources");
    }
    if (spec_.n_taint_sources > 0 && spec_.n_blocks < 2) {
      throw GeneratorError("taint sources need at least 2 blocks");
    }
    for (const auto& inj : spec_.patterns) {
      switch (inj.kind) {
        case InjectionKind::Splitting:
        case InjectionKind::Collection:
          if (inj.fan < 2) throw GeneratorError("pattern fan must be at least 2");
          break;
        case InjectionKind::PeelingChain:
          if (inj.length < 1) throw GeneratorError("peeling chain length must be at least 1");
          if (inj.change_percent <= 50 || inj.change_percent >= 100) {
            throw GeneratorError("peeling change_percent must be in (50, 100)");
          }
          break;
        case InjectionKind::Mix:
          if (inj.fan < 2) throw GeneratorError("mix fan must be at least 2");
          break;
      }
    }
  }

  void schedule() {
    const std::size_t last = spec_.n_blocks == 0 ? 0 : spec_.n_blocks - 1;
    const std::size_t theft_span = std::max<std::size_t>(1, last / 3);
    for (std::size_t i = 0; i < spec_.n_taint_sources; ++i) {
      Theft t;
      t.block = std::min(last, 1 + rng_.below(theft_span));
      if (i < spec_.patterns.size()) {
        t.pattern = i;
        PatternState p;
        p.injection = spec_.patterns[i];
        p.record.kind = p.injection.kind;
        p.record.label = label_name(i);
        p.record.size = p.injection.kind == InjectionKind::PeelingChain ? p.injection.length
                                                                        : p.injection.fan;
        const std::size_t room = std::min<std::size_t>(10, (last - t.block) / 2);
        p.next_block = t.block + rng_.below(room + 1);
        patterns_.push_back(std::move(p));
      }
      thefts_.push_back(t);
    }
  }

  static std::string label_name(std::size_t i) {
    std::string name(kLabelNames[i % kLabelNames.size()]);
    if (i >= kLabelNames.size()) name += std::to_string(i / kLabelNames.size() + 1);
    return name;
  }

  Txid fresh_txid() {
    std::array<std::uint8_t, Txid::kSize> bytes{};
    for (std::size_t w = 0; w < 4; ++w) {
      const std::uint64_t x = id_rng_.next();
      for (std::size_t b = 0; b < 8; ++b) bytes[w * 8 + b] = static_cast<std::uint8_t>(x >> (56 - 8 * b));
    }
    return Txid(bytes);
  }

  std::string fresh_address() { return "a" + std::to_string(next_address_++); }

  // Appends a transaction to the current block and returns its outputs.
  std::vector<Utxo> emit(const std::vector<Utxo>& inputs, const std::vector<Amount>& values,
                         const std::vector<std::string>& addresses = {}) {
    Transaction tx;
    tx.txid = fresh_txid();
    Amount in = 0;
    for (const auto& u : inputs) {
      tx.inputs.push_back(u.op);
      in += u.value;
    }
    std::vector<Utxo> outs;
    for (std::size_t v = 0; v < values.size(); ++v) {
      tx.outputs.push_back({values[v], v < addresses.size() ? addresses[v] : fresh_address()});
      outs.push_back({OutPoint{tx.txid, static_cast<std::uint32_t>(v)}, values[v]});
    }
    block_fees_ += in - tx.output_total();
    block_txs_.push_back(std::move(tx));
    return outs;
  }

  Utxo take_random() {
    const std::size_t i = rng_.below(pool_.size());
    Utxo u = pool_[i];
    pool_[i] = pool_.back();
    pool_.pop_back();
    return u;
  }

  Utxo take_largest() {
    auto it = std::max_element(pool_.begin(), pool_.end(),
                               [](const Utxo& a, const Utxo& b) { return a.value < b.value; });
    Utxo u = *it;
    *it = pool_.back();
    pool_.pop_back();
    return u;
  }

  void to_pool(const std::vector<Utxo>& outs) { pool_.insert(pool_.end(), outs.begin(), outs.end()); }

  Amount small_fee(Amount value) { return value >= 200 ? static_cast<Amount>(rng_.below(value / 200 + 1)) : 0; }

  // Two outputs, larger side between 50% and 70%, order shuffled.
  std::vector<Amount> split_two(Amount total) {
    const Amount pct = static_cast<Amount>(rng_.between(50, 70));
    const Amount a = total * pct / 100;
    std::vector<Amount> out{a, total - a};
    if (rng_.below(2) == 1) std::swap(out[0], out[1]);
    return out;
  }

  // `k` outputs, each at least 1, remainder spread by random weights.
  std::vector<Amount> split_many(Amount total, std::size_t k) {
    k = static_cast<std::size_t>(std::min<Amount>(static_cast<Amount>(k), total));
    if (k == 2) return split_two(total);
    std::vector<Amount> out(k, 1);
    std::vector<Amount> weights(k);
    Amount weight_sum = 0;
    for (auto& w : weights) weight_sum += (w = static_cast<Amount>(rng_.between(1, 4)));
    const Amount spare = total - static_cast<Amount>(k);
    Amount given = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const Amount share = spare * weights[i] / weight_sum;
      out[i] += share;
      given += share;
    }
    out.back() += spare - given;
    return out;
  }

  std::vector<Amount> split_even(Amount total, std::size_t k) {
    std::vector<Amount> out(k, total / static_cast<Amount>(k));
    for (Amount r = 0; r < total % static_cast<Amount>(k); ++r) ++out[static_cast<std::size_t>(r)];
    return out;
  }

  void build_block(std::size_t h) {
    block_txs_.clear();
    block_fees_ = 0;
    to_pool(pending_coinbase_);
    pending_coinbase_.clear();

    for (std::size_t i = 0; i < thefts_.size(); ++i) {
      if (thefts_[i].block != h) continue;
      if (pool_.empty() && h + 1 < spec_.n_blocks) {
        thefts_[i].block = h + 1;
        if (thefts_[i].pattern) {
          auto& p = patterns_[*thefts_[i].pattern];
          p.next_block = std::max(p.next_block, h + 1);
        }
        continue;
      }
      steal(i);
    }
    for (auto& p : patterns_) {
      while (!p.done && p.next_block <= h) {
        advance(p, h);
        if (h + 1 == spec_.n_blocks) p.next_block = h;
      }
    }
    for (std::size_t i = 0; i < spec_.txs_per_block && h > 0; ++i) background_tx();
    mint(h);
  }

  void steal(std::size_t i) {
    if (pool_.empty()) throw GeneratorError("no spendable output for taint source " + std::to_string(i));
    const bool funds_pattern = thefts_[i].pattern.has_value();
    Utxo victim = funds_pattern ? take_largest() : take_random();
    auto outs = emit({victim}, {victim.value});
    TaintSource src;
    src.txid = outs.front().op.txid;
    src.vout = 0;
    src.label = label_name(i);
    src.color = std::string(kLabelColors[i % kLabelColors.size()]);
    sources_.push_back(std::move(src));
    if (funds_pattern) {
      patterns_[*thefts_[i].pattern].pieces = outs;
    } else {
      to_pool(outs);
    }
  }

  void advance(PatternState& p, std::size_t h) {
    if (p.pieces.empty()) throw GeneratorError("pattern has no funding output");
    switch (p.injection.kind) {
      case InjectionKind::Splitting: advance_splitting(p); break;
      case InjectionKind::Collection: advance_collection(p); break;
      case InjectionKind::PeelingChain: advance_peeling(p); break;
      case InjectionKind::Mix: advance_mix(p); break;
    }
    ++p.step;
    p.next_block = h + 1;
  }

  std::vector<Utxo> fan_out(const Utxo& funding, std::size_t fan) {
    Amount fee = funding.value >= 1000 * static_cast<Amount>(fan) ? small_fee(funding.value) : 0;
    if (funding.value - fee < static_cast<Amount>(fan)) {
      throw GeneratorError("fan-out of " + std::to_string(fan) + " needs at least that many satoshis, source holds " +
                           std::to_string(funding.value));
    }
    return emit({funding}, split_even(funding.value - fee, fan));
  }

  void advance_splitting(PatternState& p) {
    auto outs = fan_out(p.pieces.front(), p.injection.fan);
    p.record.txids.push_back(outs.front().op.txid);
    to_pool(outs);
    p.pieces.clear();
    p.done = true;
  }

  void advance_collection(PatternState& p) {
    if (p.step == 0) {
      p.pieces = fan_out(p.pieces.front(), p.injection.fan);
      p.record.support_txids.push_back(p.pieces.front().op.txid);
      p.record.address = fresh_address();
      return;
    }
    for (const Utxo& piece : p.pieces) {
      auto outs = emit({piece}, {piece.value}, {*p.record.address});
      p.record.txids.push_back(outs.front().op.txid);
      to_pool(outs);
    }
    p.pieces.clear();
    p.done = true;
  }

  void advance_peeling(PatternState& p) {
    const Utxo current = p.pieces.front();
    if (current.value < 20) throw GeneratorError("peeling chain ran out of value");
    const Amount payment = current.value * (100 - p.injection.change_percent) / 100;
    const Amount change = current.value - payment;
    const bool change_first = rng_.below(2) == 0;
    auto outs = emit({current}, change_first ? std::vector<Amount>{change, payment}
                                             : std::vector<Amount>{payment, change});
    p.record.txids.push_back(outs.front().op.txid);
    const Utxo change_out = outs[change_first ? 0 : 1];
    to_pool({outs[change_first ? 1 : 0]});
    p.pieces = {change_out};
    if (p.record.txids.size() == p.injection.length) {
      to_pool(p.pieces);
      p.pieces.clear();
      p.done = true;
    }
  }

  void advance_mix(PatternState& p) {
    if (p.step == 0) {
      p.pieces = fan_out(p.pieces.front(), p.injection.fan);
      p.record.txids.push_back(p.pieces.front().op.txid);
    } else {
      std::vector<Utxo> next;
      for (std::size_t i = 0; i < p.pieces.size();) {
        const std::size_t take = p.pieces.size() - i == 3 ? 3 : std::min<std::size_t>(2, p.pieces.size() - i);
        std::vector<Utxo> inputs(p.pieces.begin() + static_cast<std::ptrdiff_t>(i),
                                 p.pieces.begin() + static_cast<std::ptrdiff_t>(i + take));
        if (!pool_.empty()) inputs.push_back(take_random());
        Amount total = 0;
        for (const auto& u : inputs) total += u.value;
        auto outs = emit(inputs, split_many(total, 3));
        p.record.txids.push_back(outs.front().op.txid);
        next.insert(next.end(), outs.begin(), outs.end());
        i += take;
      }
      p.pieces = std::move(next);
    }
    if (p.step == p.injection.rounds) {
      to_pool(p.pieces);
      p.pieces.clear();
      p.done = true;
    }
  }

  Shape pick_shape() {
    const auto& m = spec_.mix;
    std::uint64_t r = rng_.below(m.many_to_two + m.one_to_one + m.many_to_many + m.one_to_many);
    if (r < m.many_to_two) return Shape::ManyToTwo;
    r -= m.many_to_two;
    if (r < m.one_to_one) return Shape::OneToOne;
    r -= m.one_to_one;
    if (r < m.many_to_many) return Shape::ManyToMany;
    return Shape::OneToMany;
  }

  void background_tx() {
    if (pool_.empty()) return;
    std::size_t n_in = 1;
    std::size_t n_out = 1;
    switch (pick_shape()) {
      case Shape::OneToOne: break;
      case Shape::ManyToTwo:
        n_in = rng_.between(2, 3);
        n_out = 2;
        break;
      case Shape::ManyToMany:
        n_in = rng_.between(2, 4);
        n_out = rng_.between(3, 5);
        break;
      case Shape::OneToMany: {
        const std::size_t lo = std::max<std::size_t>(3, spec_.fan_threshold);
        n_out = rng_.between(lo, std::max(lo, kMaxBackgroundFan));
        break;
      }
    }
    n_in = std::min(n_in, pool_.size());
    std::vector<Utxo> inputs;
    Amount total = 0;
    for (std::size_t i = 0; i < n_in; ++i) {
      inputs.push_back(take_random());
      total += inputs.back().value;
    }
    const Amount spendable = total - small_fee(total);
    to_pool(emit(inputs, n_out == 1 ? std::vector<Amount>{spendable} : split_many(spendable, n_out)));
  }

  void mint(std::size_t h) {
    Transaction cb;
    cb.txid = fresh_txid();
    cb.is_coinbase = true;
    const Amount total = spec_.subsidy + block_fees_;
    const std::vector<Amount> values = total >= 2 && rng_.below(3) == 0 ? split_two(total)
                                                                        : std::vector<Amount>{total};
    for (std::size_t v = 0; v < values.size(); ++v) {
      cb.outputs.push_back({values[v], fresh_address()});
      pending_coinbase_.push_back({OutPoint{cb.txid, static_cast<std::uint32_t>(v)}, values[v]});
    }
    Block block;
    block.height = h;
    block.hash = fresh_txid().hex();
    block.transactions.reserve(block_txs_.size() + 1);
    block.transactions.push_back(std::move(cb));
    for (auto& tx : block_txs_) block.transactions.push_back(std::move(tx));
    blocks_.push_back(std::move(block));
  }

  const GeneratorSpec& spec_;
  Rng rng_;
  Rng id_rng_;
  std::vector<Block> blocks_;
  std::vector<Transaction> block_txs_;
  Amount block_fees_ = 0;
  std::vector<Utxo> pool_;
  std::vector<Utxo> pending_coinbase_;
  std::vector<Theft> thefts_;
  std::vector<PatternState> patterns_;
  std::vector<TaintSource> sources_;
  std::uint64_t next_address_ = 1;
};

}  // namespace

std::string_view to_string(InjectionKind kind) {
  switch (kind) {
    case InjectionKind::Splitting: return "Splitting";
    case InjectionKind::Collection: return "Collection";
    case InjectionKind::PeelingChain: return "PeelingChain";
    case InjectionKind::Mix: return "Mix";
  }
  return "unknown";
}

std::optional<InjectionKind> parse_injection_kind(std::string_view text) {
  for (auto k : {InjectionKind::Splitting, InjectionKind::Collection, InjectionKind::PeelingChain,
                 InjectionKind::Mix}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

GeneratedChain generate_synthetic_chain(const GeneratorSpec& spec) { return Builder(spec).run(); }

GeneratorSpec parse_generator_spec(std::istream& in) {
  using detail::json;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(1, std::string("malformed generator spec: ") + e.what());
  }
  detail::RecordReader rd(1, "generator spec");
  const auto opt_int = [&](const json& obj, std::string_view key, std::int64_t fallback,
                           std::int64_t min) -> std::int64_t {
    return obj.contains(key) ? rd.integer(obj, key, min) : fallback;
  };
  GeneratorSpec spec;
  if (!j.is_object()) rd.fail("expected an object");
  spec.seed = static_cast<std::uint64_t>(rd.integer(j, "seed", 0));
  spec.n_blocks = static_cast<std::size_t>(rd.integer(j, "n_blocks", 0));
  spec.txs_per_block = static_cast<std::size_t>(opt_int(j, "txs_per_block", 4, 0));
  spec.n_taint_sources = static_cast<std::size_t>(opt_int(j, "n_taint_sources", 1, 0));
  spec.subsidy = opt_int(j, "subsidy", kDefaultSubsidy, 1);
  spec.fan_threshold = static_cast<std::size_t>(opt_int(j, "fan_threshold", 3, 3));
  if (j.contains("mix")) {
    const json& m = j["mix"];
    spec.mix.many_to_two = static_cast<unsigned>(opt_int(m, "many_to_two", 70, 0));
    spec.mix.one_to_one = static_cast<unsigned>(opt_int(m, "one_to_one", 15, 0));
    spec.mix.many_to_many = static_cast<unsigned>(opt_int(m, "many_to_many", 10, 0));
    spec.mix.one_to_many = static_cast<unsigned>(opt_int(m, "one_to_many", 5, 0));
  }
  if (j.contains("patterns")) {
    for (const json& pj : rd.array(j, "patterns")) {
      Injection inj;
      const auto kind = parse_injection_kind(rd.string(pj, "kind"));
      if (!kind) rd.fail("unknown pattern kind '" + rd.string(pj, "kind") + "'");
      inj.kind = *kind;
      const json params = pj.contains("params") ? pj["params"] : json::object();
      switch (inj.kind) {
        case InjectionKind::Splitting:
          inj.fan = static_cast<std::size_t>(rd.integer(params, "fan", 2));
          break;
        case InjectionKind::Collection:
          inj.fan = static_cast<std::size_t>(rd.integer(params, "fan_in", 2));
          break;
        case InjectionKind::PeelingChain:
          inj.length = static_cast<std::size_t>(rd.integer(params, "length", 1));
          inj.change_percent = static_cast<unsigned>(opt_int(params, "change_percent", 90, 51));
          break;
        case InjectionKind::Mix:
          inj.fan = static_cast<std::size_t>(rd.integer(params, "fan", 2));
          inj.rounds = static_cast<std::size_t>(opt_int(params, "rounds", 2, 0));
          break;
      }
      spec.patterns.push_back(inj);
    }
  }
  return spec;
}

GeneratorSpec parse_generator_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open generator spec '" + path + "'");
  return parse_generator_spec(in);
}

void write_pattern_ledger(std::ostream& out, const PatternLedger& ledger) {
  using detail::ordered_json;
  ordered_json records = ordered_json::array();
  for (const auto& r : ledger.records) {
    ordered_json j;
    j["kind"] = to_string(r.kind);
    j["label"] = r.label;
    j["size"] = r.size;
    ordered_json txids = ordered_json::array();
    for (const auto& t : r.txids) txids.push_back(t.hex());
    j["txids"] = std::move(txids);
    ordered_json support = ordered_json::array();
    for (const auto& t : r.support_txids) support.push_back(t.hex());
    j["support_txids"] = std::move(support);
    j["address"] = r.address ? ordered_json(*r.address) : ordered_json(nullptr);
    records.push_back(std::move(j));
  }
  ordered_json doc;
  doc["patterns"] = std::move(records);
  out << doc.dump(2) << '\n';
}

}  // namespace taintchain
