#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace taintchain {

// Exact rational; haircut fractions and masses never touch floating point.
using Fraction = mpq_class;

// Always "num/den", including integers ("1/1").
std::string to_string(const Fraction& f);
// Accepts "num/den" or a bare integer. Throws Error on anything else.
Fraction parse_fraction(std::string_view text);

}  // namespace taintchain
