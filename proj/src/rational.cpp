#include "regulens/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace regulens {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational result;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) {
      throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
    BigInt d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    result = Rational(BigInt(std::string(num)), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) {
      throw std::invalid_argument("malformed decimal literal '" + std::string(text) + "'");
    }
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt w = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
    result = Rational(w * scale + BigInt(std::string(frac)), scale);
  } else {
    if (!all_digits(body)) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    result = Rational(BigInt(std::string(body)));
  }
  return negative ? Rational(-result) : result;
}

std::string to_fraction_string(const Rational& value) {
  return numerator_of(value).str() + "/" + denominator_of(value).str();
}

BigInt numerator_of(const Rational& value) { return boost::multiprecision::numerator(value); }

BigInt denominator_of(const Rational& value) { return boost::multiprecision::denominator(value); }

BigInt floor_of(const Rational& value) {
  BigInt n = numerator_of(value);
  BigInt d = denominator_of(value);
  BigInt q = n / d;
  if (n < 0 && q * d != n) q -= 1;
  return q;
}

BigInt ceil_of(const Rational& value) {
  BigInt f = floor_of(value);
  return Rational(f) == value ? f : BigInt(f + 1);
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace regulens
