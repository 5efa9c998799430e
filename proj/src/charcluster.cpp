#include "modlie/charcluster.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace modlie {

namespace {

// Strict ordering of same-field characters, used for canonical cluster
// storage and deduplication.
bool char_less(const Character& a, const Character& b) {
  return std::lexicographical_compare(a.values.begin(), a.values.end(), b.values.begin(),
                                      b.values.end());
}

bool same_field_equal(const Character& a, const Character& b) {
  return a.values == b.values;
}

Character embed_into(const Character& c, const Embedding& e) {
  Character out{e.target(), {}};
  for (const FieldElem& v : c.values) out.values.push_back(e(v));
  return out;
}

void sort_dedup(std::vector<Character>& cs) {
  std::sort(cs.begin(), cs.end(), char_less);
  cs.erase(std::unique(cs.begin(), cs.end(), same_field_equal), cs.end());
}

// Smallest field containing every listed field, by folding common_field.
const FieldCtx* join_fields(const std::vector<const FieldCtx*>& fields) {
  const FieldCtx* acc = fields.at(0);
  for (const FieldCtx* f : fields) acc = common_field(acc, f).field;
  return acc;
}

Character lift(const Character& c, const FieldCtx* into) {
  if (c.field == into) return c;
  return embed_into(c, canonical_embedding(c.field, into));
}

}  // namespace

bool char_equal(const Character& a, const Character& b) {
  if (a.values.size() != b.values.size()) return false;
  const FieldCtx* J = join_fields({a.field, b.field});
  return same_field_equal(lift(a, J), lift(b, J));
}

bool is_zero_character(const Character& c) {
  for (const FieldElem& v : c.values)
    if (!v.is_zero()) return false;
  return true;
}

Character zero_character(const FieldCtx* field, std::size_t n) {
  return Character{field, std::vector<FieldElem>(n, field->zero())};
}

Character add_characters(const Character& a, const Character& b) {
  if (a.values.size() != b.values.size())
    throw std::invalid_argument("characters live on algebras of different dimension");
  const FieldCtx* J = join_fields({a.field, b.field});
  Character x = lift(a, J), y = lift(b, J);
  for (std::size_t i = 0; i < x.values.size(); ++i) x.values[i] += y.values[i];
  return x;
}

Character scale_character(const Character& c, uint32_t a) {
  Character out = c;
  FieldElem s = c.field->from_index(a % c.field->p());
  for (FieldElem& v : out.values) v *= s;
  return out;
}

bool char_in(const Character& c, const std::vector<Character>& set) {
  for (const Character& s : set)
    if (char_equal(c, s)) return true;
  return false;
}

Matrix semilinear_defect(const LModule& M, std::size_t i) {
  const RestrictedLieAlgebra& L = M.algebra();
  if (!L.has_pmap()) throw std::logic_error("semilinear_defect: algebra carries no p-map");
  return M.action(i).pow(L.ctx()->p()) - M.act(L.pmap_image(i));
}

Character character_of(const LModule& M) {
  const FieldCtx* K = M.ctx();
  Character c{K, {}};
  for (std::size_t i = 0; i < M.algebra().dim(); ++i) {
    Matrix D = semilinear_defect(M, i);
    FieldElem sigma = M.dim() > 0 ? D.at(0, 0) : K->zero();
    if (D != sigma * Matrix::identity(K, M.dim()))
      throw std::invalid_argument(
          "character_of: defect is not scalar; the module is not absolutely irreducible");
    c.values.push_back(pth_root(sigma));
  }
  return c;
}

CharacterCluster cluster(const LModule& M, uint64_t seed) {
  if (M.dim() == 0) throw std::invalid_argument("cluster: zero module");
  LModule cur = M;
  uint64_t level = 0;
  for (;;) {
    std::vector<LModule> factors = composition_factors(cur, seed + 0x9E3779B97F4A7C15ull * level);
    ++level;
    uint64_t need = 1;
    for (const LModule& f : factors)
      need = std::lcm(need, uint64_t(endomorphism_algebra_dim(f)));
    if (need == 1) {
      CharacterCluster out{cur.ctx(), {}, M.dim()};
      for (const LModule& f : factors) out.characters.push_back(character_of(f));
      sort_dedup(out.characters);
      return out;
    }
    auto [bigger, emb] = extend_field(cur.ctx(), uint32_t(need));
    cur = extend_scalars(cur, emb);
  }
}

std::vector<Character> fp_span(const CharacterCluster& C) {
  const FieldCtx* K = C.splitting_field;
  const uint32_t p = K->p();
  const std::size_t n = C.characters.empty() ? 0 : C.characters[0].values.size();
  std::vector<Character> out = {zero_character(K, n)};
  for (const Character& c : C.characters) {
    std::vector<Character> next;
    for (const Character& acc : out)
      for (uint32_t a = 0; a < p; ++a) next.push_back(add_characters(acc, scale_character(c, a)));
    out = std::move(next);
  }
  sort_dedup(out);
  return out;
}

bool cluster_subset(const CharacterCluster& A, const std::vector<Character>& B) {
  for (const Character& c : A.characters)
    if (!char_in(c, B)) return false;
  return true;
}

namespace {

// Both sides lifted to one field, sorted, and compared as sets.
ClusterLawReport settle(std::vector<Character> computed, std::vector<Character> predicted) {
  std::vector<const FieldCtx*> fields;
  for (const Character& c : computed) fields.push_back(c.field);
  for (const Character& c : predicted) fields.push_back(c.field);
  ClusterLawReport rep;
  if (fields.empty()) {
    rep.holds = true;
    return rep;
  }
  const FieldCtx* J = join_fields(fields);
  for (Character& c : computed) c = lift(c, J);
  for (Character& c : predicted) c = lift(c, J);
  sort_dedup(computed);
  sort_dedup(predicted);
  rep.holds = computed.size() == predicted.size();
  for (std::size_t i = 0; rep.holds && i < computed.size(); ++i)
    rep.holds = same_field_equal(computed[i], predicted[i]);
  rep.computed = std::move(computed);
  rep.predicted = std::move(predicted);
  return rep;
}

}  // namespace

ClusterLawReport check_tensor_power_law(const LModule& V, std::size_t r, uint64_t seed) {
  if (r == 0) throw std::invalid_argument("tensor power law: r must be positive");
  CharacterCluster base = cluster(V, seed);
  LModule T = V;
  for (std::size_t i = 1; i < r; ++i) T = tensor(T, V);
  CharacterCluster power = cluster(T, seed + 1);

  // All sums c_1 + ... + c_r over cl(V), with repetition.
  std::vector<Character> sums;
  std::vector<Character> acc = {zero_character(base.splitting_field,
                                               base.characters[0].values.size())};
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Character> next;
    for (const Character& s : acc)
      for (const Character& c : base.characters) next.push_back(add_characters(s, c));
    acc = std::move(next);
    sort_dedup(acc);
  }
  return settle(power.characters, acc);
}

ClusterLawReport check_hom_law(const LModule& V, const LModule& W, uint64_t seed) {
  CharacterCluster cv = cluster(V, seed);
  CharacterCluster cw = cluster(W, seed + 1);
  CharacterCluster ch = cluster(hom_module(V, W), seed + 2);

  std::vector<Character> differences;
  const uint32_t p = V.ctx()->p();
  for (const Character& c : cv.characters)
    for (const Character& d : cw.characters)
      differences.push_back(add_characters(d, scale_character(c, p - 1)));

  ClusterLawReport rep;
  rep.computed = ch.characters;
  rep.predicted = differences;
  bool contained = cluster_subset(ch, differences);
  bool zero_for_shared = true;
  Character zero = zero_character(ch.splitting_field, ch.characters[0].values.size());
  for (const Character& c : cv.characters)
    if (char_in(c, cw.characters) && !char_in(zero, ch.characters)) zero_for_shared = false;
  rep.holds = contained && zero_for_shared;
  return rep;
}

}  // namespace modlie
