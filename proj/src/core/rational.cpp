#include "rational.hpp"

#include "errors.hpp"

namespace spencer {

std::string to_token(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw UsageError("empty rational literal");
  auto valid_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den.front() == '-' || den.front() == '+')
    throw UsageError("malformed rational literal '" + std::string(text) + "'");
  std::string n(num);
  if (!n.empty() && n.front() == '+') n.erase(0, 1);
  Integer zn(n, 10), zd(std::string(den), 10);
  if (zd == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
  Rational q(zn, zd);
  q.canonicalize();
  return q;
}

std::uint64_t mod_p(const Rational& q, std::uint64_t p) {
  const unsigned long pl = static_cast<unsigned long>(p);
  unsigned long n = mpz_fdiv_ui(q.get_num_mpz_t(), pl);
  unsigned long d = mpz_fdiv_ui(q.get_den_mpz_t(), pl);
  // d^(p-2) mod p
  unsigned __int128 base = d, acc = 1;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(n) * acc % p);
}

bool denominator_divisible(const Rational& q, std::uint64_t p) {
  return mpz_fdiv_ui(q.get_den_mpz_t(), static_cast<unsigned long>(p)) == 0;
}

}  // namespace spencer
