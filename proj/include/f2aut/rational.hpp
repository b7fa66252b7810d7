#pragma once

#include <boost/rational.hpp>

#include <charconv>
#include <string>
#include <string_view>

#include "f2aut/errors.hpp"

namespace f2aut {

/// Reduced fraction with positive denominator.
using ExactRational = boost::rational<long long>;

/// Always "p/q", including integers ("5/1").
inline std::string to_string(const ExactRational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline ExactRational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  long long p = 0;
  long long q = 1;
  auto parse = [&](std::string_view part, long long& out, std::size_t offset) {
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty()) {
      throw ParseError("malformed rational", offset);
    }
  };
  if (slash == std::string_view::npos) {
    parse(text, p, 0);
  } else {
    parse(text.substr(0, slash), p, 0);
    parse(text.substr(slash + 1), q, slash + 1);
  }
  if (q == 0) throw ParseError("zero denominator", slash + 1);
  return {p, q};
}

}  // namespace f2aut
