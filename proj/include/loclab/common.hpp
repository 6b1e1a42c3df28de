#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace loclab {

/// Exact rational arithmetic. Expression templates are disabled so `auto`
/// always binds to a value.
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

using NodeId = std::size_t;
using EdgeId = std::size_t;

/// Malformed or inconsistent caller input.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A callee-supplied object (rule, oracle, completion) broke its contract.
class contract_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw input_error("empty rational literal");
  auto check_int = [&](std::string_view s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) throw input_error("bad rational literal: " + std::string(text));
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') throw input_error("bad rational literal: " + std::string(text));
  };
  auto slash = text.find('/');
  using boost::multiprecision::cpp_int;
  if (slash == std::string_view::npos) {
    check_int(text);
    return Rational(cpp_int(std::string(text)));
  }
  auto num = trim(text.substr(0, slash));
  auto den = trim(text.substr(slash + 1));
  check_int(num);
  check_int(den);
  cpp_int d(std::string{den});
  if (d == 0) throw input_error("zero denominator: " + std::string(text));
  return Rational(cpp_int(std::string{num}), d);
}

/// "n" for integers, "n/d" otherwise.
inline std::string to_string(const Rational& q) { return q.str(); }

/// Always "n/d", the interchange form for probabilities and LP values.
inline std::string fraction_string(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace loclab
