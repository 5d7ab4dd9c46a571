#ifndef NILGEN_SERIALIZE_HPP
#define NILGEN_SERIALIZE_HPP

#include <json.hpp>

#include "nilgen/structure_algebra.hpp"
#include "nilgen/variety.hpp"

namespace nilgen {

using json = nlohmann::ordered_json;

inline json field_to_json(const FieldSpec& spec) {
  if (spec.kind == FieldSpec::Kind::prime) return json{{"field", "Fp"}, {"p", spec.p}};
  return json{{"field", "Q"}};
}
FieldSpec field_from_json(const json& j);

inline json elem_to_json(const Fp& e) { return json(e.v); }
inline json elem_to_json(const Rat& e) { return json(e.str()); }

inline Fp elem_from_json(const PrimeField& fld, const json& j) {
  if (j.is_number_integer()) return fld.from_int(j.get<long long>());
  throw input_error("expected integer field element");
}
Rat elem_from_json(const RationalField& fld, const json& j);

template <CoefficientField F>
json matrix_to_json(const Matrix<F>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(elem_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <CoefficientField F>
Matrix<F> matrix_from_json(const F& fld, const json& j, std::size_t cols_hint = 0) {
  std::size_t rows = j.size();
  std::size_t cols = rows ? j.at(0).size() : cols_hint;
  Matrix<F> m(fld, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = elem_from_json(fld, j.at(i).at(c));
  return m;
}

template <CoefficientField F>
json subspace_to_json(const FieldSpec& spec, const Subspace<F>& s) {
  return json{{"schema", 1},
              {"field", field_to_json(spec)},
              {"ambient", s.ambient_dim()},
              {"basis", matrix_to_json(s.basis())}};
}

template <CoefficientField F>
Subspace<F> subspace_from_json(const F& fld, const json& j) {
  std::size_t ambient = j.at("ambient").get<std::size_t>();
  auto m = matrix_from_json(fld, j.at("basis"), ambient);
  if (m.rows() == 0) return Subspace<F>::zero(fld, ambient);
  return Subspace<F>::span(m);
}

template <CoefficientField F>
json algebra_to_json(const FieldSpec& spec, const StructureAlgebra<F>& P) {
  json table = json::array();
  for (std::size_t i = 0; i < P.dim(); ++i) {
    json row = json::array();
    for (std::size_t j2 = 0; j2 < P.dim(); ++j2) {
      json cell = json::array();
      auto [b, e] = P.product_entries(i, j2);
      for (auto* p = b; p != e; ++p) cell.push_back(json::array({p->first, elem_to_json(p->second)}));
      row.push_back(std::move(cell));
    }
    table.push_back(std::move(row));
  }
  json out{{"schema", 1},
           {"field", field_to_json(spec)},
           {"dim", P.dim()},
           {"table", std::move(table)}};
  if (!P.labels().empty()) out["labels"] = P.labels();
  return out;
}

template <CoefficientField F>
StructureAlgebra<F> algebra_from_json(const F& fld, const json& j) {
  std::size_t dim = j.at("dim").get<std::size_t>();
  StructureAlgebraBuilder<F> b(fld, dim);
  const auto& table = j.at("table");
  if (table.size() != dim) throw input_error("algebra table has wrong row count");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t c = 0; c < dim; ++c)
      for (const auto& entry : table.at(i).at(c)) {
        int k = entry.at(0).get<int>();
        if (k < 0 || static_cast<std::size_t>(k) >= dim)
          throw input_error("algebra table index out of range");
        b.add_entry(static_cast<int>(i), static_cast<int>(c), k, elem_from_json(fld, entry.at(1)));
      }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return std::move(b).build(std::move(labels), {});
}

json class_to_json(const PrimitiveClass& cls);
PrimitiveClass class_from_json(const json& j);

/// Loads a class from a builtin name ("commutative", ...) or a JSON file path.
PrimitiveClass load_class(const std::string& name_or_path, int c);

}  // namespace nilgen

#endif
