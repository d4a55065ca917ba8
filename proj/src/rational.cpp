#include "bcov/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace bcov {

Q parse_rational(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw std::invalid_argument("empty rational");
  size_t i = 0;
  if (t[0] == '-' || t[0] == '+') i = 1;
  bool slash = false, digits = false;
  for (size_t j = i; j < t.size(); ++j) {
    if (t[j] == '/') {
      if (slash || !digits) throw std::invalid_argument("malformed rational: " + s);
      slash = true;
      digits = false;
    } else if (std::isdigit(static_cast<unsigned char>(t[j]))) {
      digits = true;
    } else {
      throw std::invalid_argument("malformed rational: " + s);
    }
  }
  if (!digits) throw std::invalid_argument("malformed rational: " + s);
  if (t[0] == '+') t = t.substr(1);
  Q r;
  if (r.set_str(t, 10) != 0) throw std::invalid_argument("malformed rational: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Q& x) {
  Q c = x;
  c.canonicalize();
  return c.get_str();
}

Q pow_int(const Q& q, long e) {
  if (e < 0) throw std::invalid_argument("negative exponent");
  Q r = 1;
  Q b = q;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

}  // namespace bcov
