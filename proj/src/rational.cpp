#include "orthext/rational.hpp"

#include <charconv>
#include <ostream>

namespace orthext {

namespace {

std::int64_t parse_int(const std::string& s, const std::string& whole) {
  std::int64_t v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || b == e)
    throw Error(ErrorCode::ParseError, "malformed number '" + whole + "'");
  return v;
}

}  // namespace

Rat Rat::parse(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty number");
  if (auto slash = text.find('/'); slash != std::string::npos) {
    return Rat(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string ip = text.substr(0, dot);
    std::string fp = text.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    if (fp.empty() || fp.size() > 17) throw Error(ErrorCode::ParseError, "malformed number '" + text + "'");
    for (char c : fp)
      if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "malformed number '" + text + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    Rat r = Rat(parse_int(ip, text)) + Rat(parse_int(fp, text), scale);
    return neg ? -r : r;
  }
  return Rat(parse_int(text, text));
}

std::string Rat::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace orthext
