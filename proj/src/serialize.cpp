#include "hilmod/serialize.hpp"

#include "hilmod/error.hpp"

#include <algorithm>
#include <cstring>

namespace hilmod::io {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ParseError, path + ": " + what, std::nullopt, path);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) bad(path + "/" + key, "missing field");
  return *it;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  return j;
}

}  // namespace

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!known) throw Error(ErrorKind::ValidationError, path + "/" + key + ": unknown field", std::nullopt, path + "/" + key);
  }
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
  return out;
}

Json to_json(const AlgebraShape& s) {
  Json out = Json::array();
  for (Index d : s.block_dims()) out.push_back(d);
  return out;
}

Json to_json(const AlgebraElement& a) {
  Json blocks = Json::array();
  for (const auto& b : a.blocks()) blocks.push_back(to_json(b));
  return Json{{"shape", to_json(a.shape())}, {"blocks", std::move(blocks)}};
}

Json to_json(const PureState& f) {
  return Json{{"block", f.block() + 1}, {"vector", to_json(f.vector())}};
}

Json to_json(const ModuleElement& x) {
  Json comps = Json::array();
  for (const auto& c : x.components()) comps.push_back(to_json(c));
  return Json{{"rank", x.rank()}, {"components", std::move(comps)}};
}

Json to_json(const Submodule& y) {
  Json gens = Json::array();
  for (const auto& g : y.generators()) gens.push_back(to_json(g));
  return Json{{"generators", std::move(gens)}};
}

Json to_json(const Witness& w) {
  return Json{{"state", to_json(w.f)},        {"lhs", w.lhs},
              {"rhs", w.rhs},                 {"f_abs_y", w.f_abs_y},
              {"route", to_string(w.route)}, {"status", to_string(w.status)}};
}

Json to_json(const Violation& v) {
  return Json{{"state", to_json(v.f)}, {"x", to_json(v.x)}, {"y", to_json(v.y)}, {"lhs", v.lhs}, {"rhs", v.rhs}};
}

Json to_json(const CoercivityCertificate& c) {
  Json violations = Json::array();
  for (const auto& v : c.violations) violations.push_back(to_json(v));
  Json witnesses = Json::array();
  for (const auto& w : c.witnesses) witnesses.push_back(to_json(w));
  return Json{{"c", c.c},
              {"k", c.k},
              {"route", to_string(c.route)},
              {"violations", std::move(violations)},
              {"sampled", c.sampled},
              {"seed", c.seed},
              {"form_norm", c.form_norm},
              {"witnesses", std::move(witnesses)}};
}

Json to_json(const SolveResult& r) {
  return Json{{"solution", to_json(r.solution)},
              {"residual", r.residual},
              {"solution_norm", r.solution_norm},
              {"tau_norm", r.tau_norm},
              {"tau_norm_is_lower_bound", r.tau_norm_is_lower_bound},
              {"c", r.c},
              {"bound_slack", r.bound_slack},
              {"norm_bound_ok", r.norm_bound_ok},
              {"uniqueness_gap", r.uniqueness_gap},
              {"certificate_route", to_string(r.route)}};
}

Json to_json(const FamilySolveResult& r) {
  Json levels = Json::array();
  for (const auto& l : r.levels)
    levels.push_back(Json{{"c_level", l.c_level}, {"residual", l.residual}, {"distance_to_final", l.distance_to_final}});
  return Json{{"final", to_json(r.final)}, {"levels", std::move(levels)}, {"union_residual", r.union_residual}};
}

Complex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    bad(path, "expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const Json& j, const std::string& path) {
  array(j, path);
  if (j.empty()) bad(path, "empty matrix");
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(array(j[0], path + "/0").size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    const Json& row = array(j[static_cast<std::size_t>(r)], rp);
    if (static_cast<Index>(row.size()) != cols) bad(rp, "ragged matrix row");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
  }
  return m;
}

Vector vector_from_json(const Json& j, const std::string& path) {
  array(j, path);
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Index>(k)) = complex_from_json(j[k], path + "/" + std::to_string(k));
  return v;
}

AlgebraShape shape_from_json(const Json& j, const std::string& path) {
  array(j, path);
  std::vector<Index> dims;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number_integer() || j[k].get<long long>() < 1) bad(path + "/" + std::to_string(k), "block dimension must be a positive integer");
    dims.push_back(j[k].get<Index>());
  }
  if (dims.empty()) bad(path, "shape needs at least one block");
  return AlgebraShape(std::move(dims));
}

AlgebraElement element_from_json(const Json& j, const std::string& path) {
  require_keys(j, {"shape", "blocks"}, path);
  const AlgebraShape shape = shape_from_json(field(j, "shape", path), path + "/shape");
  const Json& blocks = array(field(j, "blocks", path), path + "/blocks");
  if (blocks.size() != shape.num_blocks()) bad(path + "/blocks", "block count does not match the shape");
  std::vector<Matrix> mats;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string bp = path + "/blocks/" + std::to_string(i);
    Matrix m = matrix_from_json(blocks[i], bp);
    if (m.rows() != shape.dim(i) || m.cols() != shape.dim(i)) bad(bp, "block size does not match the shape");
    mats.push_back(std::move(m));
  }
  return {shape, std::move(mats)};
}

PureState state_from_json(const Json& j, const std::string& path) {
  require_keys(j, {"block", "vector"}, path);
  const Json& b = field(j, "block", path);
  if (!b.is_number_integer() || b.get<long long>() < 1) bad(path + "/block", "block index must be a positive integer");
  try {
    return PureState(b.get<std::size_t>() - 1, vector_from_json(field(j, "vector", path), path + "/vector"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    bad(path + "/vector", e.what());
  }
}

ModuleElement module_element_from_json(const Json& j, const std::string& path) {
  require_keys(j, {"rank", "components"}, path);
  const Json& rank = field(j, "rank", path);
  if (!rank.is_number_integer() || rank.get<long long>() < 1) bad(path + "/rank", "rank must be a positive integer");
  const Json& comps = array(field(j, "components", path), path + "/components");
  if (comps.size() != rank.get<std::size_t>()) bad(path + "/components", "component count does not match the rank");
  std::vector<AlgebraElement> elems;
  for (std::size_t k = 0; k < comps.size(); ++k)
    elems.push_back(element_from_json(comps[k], path + "/components/" + std::to_string(k)));
  for (std::size_t k = 1; k < elems.size(); ++k)
    if (!(elems[k].shape() == elems[0].shape())) bad(path + "/components/" + std::to_string(k), "component shapes differ");
  return {ModuleSpace(elems[0].shape(), elems.size()), std::move(elems)};
}

Submodule submodule_from_json(const ModuleSpace& ambient, const Json& j, const std::string& path) {
  require_keys(j, {"generators"}, path);
  const Json& gens = array(field(j, "generators", path), path + "/generators");
  std::vector<ModuleElement> elems;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const std::string gp = path + "/generators/" + std::to_string(k);
    ModuleElement g = module_element_from_json(gens[k], gp);
    if (!(g.space() == ambient)) bad(gp, "generator does not live in the ambient module");
    elems.push_back(std::move(g));
  }
  return Submodule(ambient, std::move(elems));
}

}  // namespace hilmod::io
