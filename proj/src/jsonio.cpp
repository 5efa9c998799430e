#include "modlie/jsonio.hpp"

#include <stdexcept>
#include <string>

namespace modlie {

using nlohmann::json;

namespace {

json elems_to_json(const std::vector<FieldElem>& v) {
  json a = json::array();
  for (const FieldElem& x : v) a.push_back(x.to_index());
  return a;
}

std::vector<FieldElem> elems_from_json(const FieldCtx* K, const json& j) {
  std::vector<FieldElem> out;
  for (const auto& x : j) out.push_back(K->from_index(x.get<uint64_t>()));
  return out;
}

void require_verified(const VerifyReport& rep, const std::string& what) {
  if (rep.empty()) return;
  throw std::invalid_argument(what + " violates axiom '" + rep.front().axiom +
                              "': " + rep.front().detail);
}

}  // namespace

json field_to_json(const FieldCtx* K) {
  return json{{"p", K->p()}, {"m", K->degree()}, {"modulus", K->modulus()}};
}

const FieldCtx* field_from_json(const json& j) {
  uint32_t p = j.at("p").get<uint32_t>();
  if (j.contains("modulus"))
    return FieldCtx::get(p, j.at("modulus").get<std::vector<uint32_t>>());
  return FieldCtx::get(p, j.at("m").get<uint32_t>());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).to_index());
    rows.push_back(row);
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

Matrix matrix_from_json(const FieldCtx* K, const json& j) {
  std::size_t r = j.at("rows").get<std::size_t>();
  std::size_t c = j.at("cols").get<std::size_t>();
  const json& e = j.at("entries");
  if (e.size() != r) throw std::invalid_argument("matrix entries do not match the row count");
  Matrix m(K, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (e[i].size() != c)
      throw std::invalid_argument("matrix entries do not match the column count");
    for (std::size_t k = 0; k < c; ++k) m.at(i, k) = K->from_index(e[i][k].get<uint64_t>());
  }
  return m;
}

json subspace_to_json(const Subspace& s) {
  json rows = json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) rows.push_back(elems_to_json(s.basis_vector(i)));
  return rows;
}

Subspace subspace_from_json(const FieldCtx* K, std::size_t ambient, const json& j) {
  std::vector<std::vector<FieldElem>> rows;
  for (const auto& row : j) {
    std::vector<FieldElem> v = elems_from_json(K, row);
    if (v.size() != ambient)
      throw std::invalid_argument("subspace vector has the wrong ambient dimension");
    rows.push_back(std::move(v));
  }
  return Subspace::span(K, ambient, rows);
}

json algebra_to_json(const RestrictedLieAlgebra& L) {
  const LieAlgebra& A = L.alg();
  std::size_t n = A.dim();
  json bracket = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      json coords = json::array();
      for (std::size_t k = 0; k < n; ++k) coords.push_back(A.c(i, j, k).to_index());
      row.push_back(coords);
    }
    bracket.push_back(row);
  }
  json out{{"field", field_to_json(L.ctx())}, {"dim", n}, {"bracket", bracket}};
  if (L.has_pmap()) {
    json pm = json::array();
    for (std::size_t i = 0; i < n; ++i) pm.push_back(elems_to_json(L.pmap_image(i)));
    out["pmap"] = pm;
  } else {
    out["pmap"] = nullptr;
  }
  return out;
}

RestrictedLieAlgebra algebra_from_json(const json& j) {
  const FieldCtx* K = field_from_json(j.at("field"));
  std::size_t n = j.at("dim").get<std::size_t>();
  const json& br = j.at("bracket");
  if (br.size() != n) throw std::invalid_argument("bracket table has the wrong dimension");
  LieAlgebra A(K, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t jj = i + 1; jj < n; ++jj)
      A.set_bracket(i, jj, elems_from_json(K, br[i][jj]));
  // The upper triangle defined the algebra; the rest of the table must be
  // consistent with antisymmetry and a zero diagonal.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t jj = 0; jj < n; ++jj) {
      std::vector<FieldElem> given = elems_from_json(K, br[i][jj]);
      if (given.size() != n)
        throw std::invalid_argument("bracket coordinates have the wrong length");
      for (std::size_t k = 0; k < n; ++k)
        if (given[k] != A.c(i, jj, k))
          throw std::invalid_argument("bracket table is not antisymmetric with zero diagonal");
    }
  require_verified(verify_lie(A), "algebra");
  if (j.contains("pmap") && !j.at("pmap").is_null()) {
    const json& pm = j.at("pmap");
    if (pm.size() != n) throw std::invalid_argument("p-map has the wrong dimension");
    std::vector<std::vector<FieldElem>> imgs;
    for (std::size_t i = 0; i < n; ++i) {
      imgs.push_back(elems_from_json(K, pm[i]));
      if (imgs.back().size() != n)
        throw std::invalid_argument("p-map image has the wrong length");
    }
    RestrictedLieAlgebra L(A, imgs);
    require_verified(verify_pmap(L), "p-map");
    return L;
  }
  return RestrictedLieAlgebra::without_pmap(A);
}

json module_to_json(const LModule& M) {
  json acts = json::array();
  for (std::size_t i = 0; i < M.algebra().dim(); ++i) acts.push_back(matrix_to_json(M.action(i)));
  return json{{"dim", M.dim()}, {"actions", acts}};
}

LModule module_from_json(AlgebraPtr L, const json& j) {
  std::size_t dim = j.at("dim").get<std::size_t>();
  std::vector<Matrix> acts;
  for (const auto& a : j.at("actions")) acts.push_back(matrix_from_json(L->ctx(), a));
  LModule M(std::move(L), dim, std::move(acts));
  require_verified(verify_module(M), "module");
  return M;
}

json instance_to_json(const Instance& inst) {
  return json{{"algebra", algebra_to_json(*inst.L)},
              {"s", subspace_to_json(inst.S.space)},
              {"v", module_to_json(inst.V)},
              {"w", module_to_json(inst.W)},
              {"formation", inst.formation},
              {"seed", inst.seed}};
}

Instance instance_from_json(const json& j) {
  AlgebraPtr L = std::make_shared<const RestrictedLieAlgebra>(algebra_from_json(j.at("algebra")));
  Subalgebra S =
      make_subalgebra(L, subspace_from_json(L->ctx(), L->dim(), j.at("s")));
  LModule V = module_from_json(L, j.at("v"));
  LModule W = module_from_json(L, j.at("w"));
  std::string formation = j.value("formation", std::string("nilpotent"));
  uint64_t seed = j.value("seed", uint64_t{0});
  return Instance{L, S, std::move(V), std::move(W), formation, seed};
}

json verdict_to_json(const Verdict& v) {
  json hs = json::array();
  for (const HypothesisCheck& h : v.hypotheses)
    hs.push_back(json{{"name", h.name}, {"pass", h.pass}, {"witness", h.witness}});
  return json{{"hypotheses", hs},
              {"conclusion_pass", v.conclusion_pass},
              {"conclusion_witness", v.conclusion_witness},
              {"status", to_string(v.status)}};
}

json pipeline_to_json(const PipelineReport& r) {
  json steps = json::array();
  for (const PipelineStep& s : r.steps)
    steps.push_back(json{
        {"index", s.index}, {"name", s.name}, {"pass", s.pass}, {"detail", s.detail}});
  return json{{"ran", r.ran},
              {"refusal", r.refusal},
              {"zero_char_discrepancy", r.zero_char_discrepancy},
              {"steps", steps},
              {"all_passed", r.all_passed()}};
}

json character_to_json(const Character& c) {
  return json{{"field", field_to_json(c.field)}, {"values", elems_to_json(c.values)}};
}

json cluster_to_json(const CharacterCluster& c) {
  json chars = json::array();
  for (const Character& ch : c.characters) chars.push_back(elems_to_json(ch.values));
  return json{{"field", field_to_json(c.splitting_field)},
              {"module_dim", c.module_dim},
              {"characters", chars}};
}

json hypercentral_to_json(const HypercentralReport& r) {
  json series = json::array();
  for (const Subspace& s : r.series) series.push_back(subspace_to_json(s));
  json out{{"module_dim", r.module_dim},
           {"is_hypercentral", r.is_hypercentral},
           {"series", series}};
  if (r.obstruction)
    out["obstruction_dim"] = r.obstruction->dim();
  else
    out["obstruction_dim"] = nullptr;
  return out;
}

json campaign_to_json(const CampaignSummary& c) {
  json st = json::array();
  for (Status s : c.statuses) st.push_back(to_string(s));
  return json{{"p", c.p},
              {"count", c.count},
              {"confirmed", c.confirmed},
              {"vacuous", c.vacuous},
              {"violation", c.violation},
              {"statuses", st}};
}

json envelope_to_json(const PEnvelope& e) {
  json mats = json::array();
  for (const Matrix& m : e.basis_matrices) mats.push_back(matrix_to_json(m));
  return json{{"algebra", algebra_to_json(e.algebra)},
              {"basis_matrices", mats},
              {"s_embedding", matrix_to_json(e.s_embedding)},
              {"s_image", subspace_to_json(e.s_image)}};
}

}  // namespace modlie
