#include "taintchain/rational.hpp"

#include "taintchain/error.hpp"

namespace taintchain {

std::string to_string(const Fraction& f) {
  return f.get_num().get_str() + "/" + f.get_den().get_str();
}

Fraction parse_fraction(std::string_view text) {
  const auto valid_int = [](std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  const auto slash = text.find('/');
  const auto num = text.substr(0, slash);
  const auto den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den.front() == '-') {
    throw Error("malformed fraction '" + std::string(text) + "'");
  }
  Fraction f{mpz_class(std::string(num)), mpz_class(std::string(den))};
  if (f.get_den() == 0) throw Error("zero denominator in '" + std::string(text) + "'");
  f.canonicalize();
  return f;
}

}  // namespace taintchain
