#include "nilgen/field.hpp"

namespace nilgen {

FieldSpec FieldSpec::parse(const std::string& s) {
  if (s == "Q" || s == "q") return rational();
  if (!s.empty() && (s[0] == 'F' || s[0] == 'f')) {
    try {
      unsigned long p = std::stoul(s.substr(1));
      return prime(static_cast<uint32_t>(p));
    } catch (const std::exception&) {
      throw input_error("bad field spec: " + s);
    }
  }
  throw input_error("bad field spec (use F<p> or Q): " + s);
}

}  // namespace nilgen
