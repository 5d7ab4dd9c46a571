#include "nilgen/serialize.hpp"

#include <fstream>

namespace nilgen {

FieldSpec field_from_json(const json& j) {
  std::string kind = j.at("field").get<std::string>();
  if (kind == "Q") return FieldSpec::rational();
  if (kind == "Fp") return FieldSpec::prime(j.at("p").get<uint32_t>());
  throw input_error("bad field kind: " + kind);
}

Rat elem_from_json(const RationalField& fld, const json& j) {
  if (j.is_number_integer()) return fld.from_int(j.get<long long>());
  if (j.is_string()) {
    try {
      return Rat(bigrat(j.get<std::string>()));
    } catch (const std::exception&) {
      throw input_error("bad rational: " + j.get<std::string>());
    }
  }
  throw input_error("expected rational field element (int or \"a/b\")");
}

json class_to_json(const PrimitiveClass& cls) {
  json ids = json::array();
  for (const auto& id : cls.identities()) ids.push_back(id.str());
  return json{{"schema", 1},
              {"c", cls.c()},
              {"identities", std::move(ids)},
              {"mode", cls.mode() == VarietyMode::multihomogeneous ? "multihomogeneous"
                                                                   : "exact-finite"},
              {"name", cls.name()}};
}

PrimitiveClass class_from_json(const json& j) {
  int c = j.at("c").get<int>();
  std::vector<Identity> ids;
  for (const auto& s : j.at("identities")) ids.push_back(Identity::parse(s.get<std::string>()));
  VarietyMode mode = VarietyMode::multihomogeneous;
  if (j.contains("mode")) {
    std::string m = j.at("mode").get<std::string>();
    if (m == "multihomogeneous")
      mode = VarietyMode::multihomogeneous;
    else if (m == "exact-finite")
      mode = VarietyMode::exact_finite;
    else
      throw input_error("bad mode: " + m);
  }
  std::string name = j.contains("name") ? j.at("name").get<std::string>() : "custom";
  return PrimitiveClass(c, std::move(ids), mode, name);
}

PrimitiveClass load_class(const std::string& name_or_path, int c) {
  for (const char* builtin : {"nilpotent", "commutative", "anticommutative", "lie", "associative"})
    if (name_or_path == builtin) return PrimitiveClass::builtin(name_or_path, c);
  std::ifstream in(name_or_path);
  if (!in) throw input_error("not a built-in class and not a readable file: " + name_or_path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw input_error("bad class file " + name_or_path + ": " + e.what());
  }
  return class_from_json(j);
}

}  // namespace nilgen
