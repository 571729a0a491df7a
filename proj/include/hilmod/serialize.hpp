#pragma once

// JSON formats. Complex numbers are [re, im]; matrices are arrays of rows;
// state blocks are 1-based on the wire. Readers throw ParseError with the
// JSON path of the offending field.

#include "hilmod/forms.hpp"
#include "hilmod/module.hpp"
#include "hilmod/solver.hpp"
#include "hilmod/state.hpp"

#include "json.hpp"

#include <string>

namespace hilmod::io {

using Json = nlohmann::ordered_json;

Json to_json(Complex z);
Json to_json(const Matrix& m);
Json to_json(const Vector& v);
Json to_json(const AlgebraShape& s);
Json to_json(const AlgebraElement& a);
Json to_json(const PureState& f);
Json to_json(const ModuleElement& x);
Json to_json(const Submodule& y);
Json to_json(const Witness& w);
Json to_json(const Violation& v);
Json to_json(const CoercivityCertificate& c);
Json to_json(const SolveResult& r);
Json to_json(const FamilySolveResult& r);

Complex complex_from_json(const Json& j, const std::string& path);
Matrix matrix_from_json(const Json& j, const std::string& path);
Vector vector_from_json(const Json& j, const std::string& path);
AlgebraShape shape_from_json(const Json& j, const std::string& path);
AlgebraElement element_from_json(const Json& j, const std::string& path);
PureState state_from_json(const Json& j, const std::string& path);
ModuleElement module_element_from_json(const Json& j, const std::string& path);
Submodule submodule_from_json(const ModuleSpace& ambient, const Json& j, const std::string& path);

// Throws ParseError naming the first key of `j` outside `allowed`.
void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& path);

}  // namespace hilmod::io
