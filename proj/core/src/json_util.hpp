#pragma once

// Private helpers for reading JSONL records with line-numbered errors.

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "json.hpp"
#include "taintchain/chain.hpp"
#include "taintchain/error.hpp"

namespace taintchain::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

class RecordReader {
 public:
  RecordReader(std::size_t line, std::string context) : line_(line), context_(std::move(context)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(line_, context_.empty() ? what : context_ + ": " + what);
  }

  const json& field(const json& obj, std::string_view key) const {
    if (!obj.is_object()) fail("expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing required field '" + std::string(key) + "'");
    return *it;
  }

  std::int64_t integer(const json& obj, std::string_view key, std::int64_t min,
                       std::int64_t max = std::numeric_limits<std::int64_t>::max()) const {
    const json& v = field(obj, key);
    if (!v.is_number_integer()) fail("field '" + std::string(key) + "' must be an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() >
                                      static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      fail("field '" + std::string(key) + "' is out of range");
    }
    const auto n = v.get<std::int64_t>();
    if (n < min || n > max) {
      fail("field '" + std::string(key) + "' out of range: " + std::to_string(n));
    }
    return n;
  }

  std::string string(const json& obj, std::string_view key) const {
    const json& v = field(obj, key);
    if (!v.is_string()) fail("field '" + std::string(key) + "' must be a string");
    return v.get<std::string>();
  }

  bool boolean(const json& obj, std::string_view key) const {
    const json& v = field(obj, key);
    if (!v.is_boolean()) fail("field '" + std::string(key) + "' must be a boolean");
    return v.get<bool>();
  }

  const json& array(const json& obj, std::string_view key) const {
    const json& v = field(obj, key);
    if (!v.is_array()) fail("field '" + std::string(key) + "' must be an array");
    return v;
  }

  Txid txid(const json& obj, std::string_view key) const {
    auto s = string(obj, key);
    auto id = Txid::parse(s);
    if (!id) fail("field '" + std::string(key) + "' is not a 64-character lowercase hex txid");
    return *id;
  }

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
  std::string context_;
};

inline json parse_line(const std::string& text, std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace taintchain::detail
