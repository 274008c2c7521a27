#include "fairdiv/rational.hpp"

#include <cctype>

namespace fairdiv {

Rational rat_parse(const std::string& text) {
  if (text.empty()) throw ContractError("empty rational literal");
  auto digits = [](const std::string& s, size_t from, size_t to) {
    if (from >= to) return false;
    for (size_t i = from; i < to; ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  size_t start = text[0] == '-' ? 1 : 0;
  size_t slash = text.find('/');
  bool ok;
  if (slash == std::string::npos) {
    ok = digits(text, start, text.size());
  } else {
    ok = digits(text, start, slash) && digits(text, slash + 1, text.size());
  }
  if (!ok) throw ContractError("malformed rational literal: " + text);

  Rational r(text);
  if (r.get_den() == 0) throw ContractError("zero denominator: " + text);
  r.canonicalize();
  return r;
}

std::string rat_str(const Rational& q) { return q.get_str(); }

}  // namespace fairdiv
