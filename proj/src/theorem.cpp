#include "modlie/theorem.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace modlie {

namespace {

constexpr uint64_t kMix = 0x9E3779B97F4A7C15ull;

std::string describe_character(const Character& c) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (i) os << ",";
    os << c.values[i].to_index();
  }
  os << ")";
  return os.str();
}

bool chars_subset(const std::vector<Character>& A, const std::vector<Character>& B) {
  for (const Character& a : A)
    if (!char_in(a, B)) return false;
  return true;
}

bool chars_equal(const std::vector<Character>& A, const std::vector<Character>& B) {
  return chars_subset(A, B) && chars_subset(B, A);
}

// All hypercentrality decisions below restrict the L-module to S first. The
// nilpotent formation takes the fast joint-kernel chain; it agrees with the
// generic chain (cross-checked in the test suite), and the pipeline touches
// modules large enough for the difference to matter.
bool restricted_hypercentral(const Subalgebra& S, const LModule& M, const Formation& F,
                             uint64_t seed) {
  LModule MS = restrict_to_subalgebra(M, S);
  if (F.name == "nilpotent") return hypercentre_nilpotent_fast(S, MS).dim() == MS.dim();
  return is_hypercentral(S, MS, F, seed).is_hypercentral;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::VACUOUS:
      return "VACUOUS";
    case Status::CONFIRMED:
      return "CONFIRMED";
    case Status::VIOLATION:
      return "VIOLATION";
  }
  return "VIOLATION";
}

bool Verdict::all_hypotheses_pass() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const HypothesisCheck& h) { return h.pass; });
}

bool PipelineReport::all_passed() const {
  return ran && !steps.empty() &&
         std::all_of(steps.begin(), steps.end(), [](const PipelineStep& s) { return s.pass; });
}

std::vector<HypothesisCheck> check_hypotheses(const Instance& inst) {
  const RestrictedLieAlgebra& L = *inst.L;
  Formation F = formation_by_name(inst.formation);
  std::vector<HypothesisCheck> out;

  {
    HypothesisCheck h{"centre-kill", true, ""};
    if (!L.has_pmap()) {
      h.pass = false;
      h.witness = "the algebra carries no p-map";
    } else {
      Subspace Z = centre(L.alg());
      for (std::size_t b = 0; b < Z.dim() && h.pass; ++b) {
        std::vector<FieldElem> img = L.pmap(Z.basis_vector(b));
        bool zero = std::all_of(img.begin(), img.end(),
                                [](const FieldElem& x) { return x.is_zero(); });
        if (!zero) {
          h.pass = false;
          h.witness = "centre basis vector " + std::to_string(b) + " has a nonzero p-image";
        }
      }
    }
    out.push_back(h);
  }

  bool s_nonzero = inst.S.space.dim() > 0;
  out.push_back({"s-nonzero", s_nonzero, s_nonzero ? "" : "S is the zero subalgebra"});

  {
    HypothesisCheck h{"s-in-formation", true, ""};
    if (s_nonzero) {
      AlgebraPtr ind = induced_subalgebra_structure(inst.S);
      h.pass = F.is_member(ind->alg());
      if (!h.pass) h.witness = "S is not a member of the formation";
    }
    // the zero algebra belongs to every formation
    out.push_back(h);
  }

  {
    SubnormalChain sc = is_subnormal(L.alg(), inst.S.space);
    HypothesisCheck h{"s-subnormal", sc.subnormal, ""};
    if (!sc.subnormal)
      h.witness = "the ideal-closure chain stabilizes at dimension " +
                  std::to_string(sc.chain.back().dim()) + " above S";
    out.push_back(h);
  }

  {
    HypothesisCheck h{"v-hypercentral", false, ""};
    if (!s_nonzero) {
      h.witness = "not evaluated: S is zero";
    } else if (inst.V.dim() == 0) {
      h.pass = true;
    } else {
      HypercentralReport r =
          is_hypercentral(inst.S, restrict_to_subalgebra(inst.V, inst.S), F, inst.seed);
      h.pass = r.is_hypercentral;
      if (!h.pass)
        h.witness = "V has a non-central irreducible section of dimension " +
                    std::to_string(r.obstruction ? r.obstruction->dim() : 0);
    }
    out.push_back(h);
  }

  {
    HypothesisCheck h{"cluster-inclusion", false, ""};
    if (!L.has_pmap()) {
      h.witness = "not evaluated: the algebra carries no p-map";
    } else if (inst.W.dim() == 0) {
      h.pass = true;  // the empty cluster is contained in everything
    } else if (inst.V.dim() == 0) {
      CharacterCluster cw = cluster(inst.W, inst.seed + 2);
      h.pass = std::all_of(cw.characters.begin(), cw.characters.end(), is_zero_character);
      if (!h.pass) h.witness = "V is zero but W has a nonzero character";
    } else {
      CharacterCluster cv = cluster(inst.V, inst.seed + 1);
      CharacterCluster cw = cluster(inst.W, inst.seed + 2);
      std::vector<Character> span = fp_span(cv);
      h.pass = cluster_subset(cw, span);
      if (!h.pass) {
        for (const Character& c : cw.characters)
          if (!char_in(c, span)) {
            h.witness = "character of W outside the span: " + describe_character(c);
            break;
          }
      }
    }
    out.push_back(h);
  }

  return out;
}

Verdict check_theorem_instance(const Instance& inst) {
  Verdict v;
  v.hypotheses = check_hypotheses(inst);
  Formation F = formation_by_name(inst.formation);
  if (inst.S.space.dim() == 0) {
    v.conclusion_pass = false;
    v.conclusion_witness = "not evaluated: S is zero";
  } else if (inst.W.dim() == 0) {
    v.conclusion_pass = true;
  } else {
    HypercentralReport r =
        is_hypercentral(inst.S, restrict_to_subalgebra(inst.W, inst.S), F, inst.seed + 3);
    v.conclusion_pass = r.is_hypercentral;
    if (!v.conclusion_pass)
      v.conclusion_witness = "W has a non-central irreducible section of dimension " +
                             std::to_string(r.obstruction ? r.obstruction->dim() : 0) +
                             " above its hypercentre of dimension " +
                             std::to_string(r.series.back().dim());
  }
  v.status = !v.all_hypotheses_pass() ? Status::VACUOUS
             : v.conclusion_pass      ? Status::CONFIRMED
                                      : Status::VIOLATION;
  return v;
}

LModule tensor_power_sum(const LModule& V, uint64_t seed) {
  if (V.dim() == 0) throw std::invalid_argument("tensor_power_sum: V must be nonzero");
  std::size_t k = cluster(V, seed).characters.size();
  std::size_t rmax = k * (V.ctx()->p() - 1);
  std::vector<LModule> parts;
  LModule T = V;
  parts.push_back(T);
  for (std::size_t r = 2; r <= rmax; ++r) {
    T = tensor(T, V);
    parts.push_back(T);
  }
  return direct_sum(parts);
}

Subspace char_zero_hom_submodule(const LModule& V, const LModule& W) {
  LModule H = hom_module(V, W);
  const FieldCtx* K = H.ctx();
  Subspace Hs = Subspace::full(K, H.dim());
  for (std::size_t i = 0; i < H.algebra().dim(); ++i)
    Hs = intersect(Hs, kernel(semilinear_defect(H, i)));
  // The defects commute with the hom action, so their joint kernel is
  // invariant and carries a restricted module structure by construction.
  if (!is_invariant(H, Hs)) throw std::logic_error("char-zero hom subspace is not invariant");
  if (Hs.dim() > 0) {
    LModule sub = sub_quotient(H, Subspace::zero(K, H.dim()), Hs);
    if (!is_restricted_module(sub))
      throw std::logic_error("char-zero hom subspace is not restricted");
  }
  return Hs;
}

ModuleMap evaluation_map(const LModule& V, const Subspace& H, const LModule& W) {
  LModule hom = hom_module(V, W);
  if (H.ambient_dim() != hom.dim())
    throw std::invalid_argument("evaluation_map: H does not live in Hom(V,W)");
  if (!is_invariant(hom, H)) throw std::invalid_argument("evaluation_map: H is not invariant");
  const FieldCtx* K = V.ctx();
  LModule Hmod = sub_quotient(hom, Subspace::zero(K, hom.dim()), H);
  LModule T = tensor(V, Hmod);
  std::size_t h = H.dim();
  Matrix E(K, W.dim(), V.dim() * h);
  for (std::size_t a = 0; a < V.dim(); ++a)
    for (std::size_t t = 0; t < h; ++t) {
      std::vector<FieldElem> flat = H.basis_vector(t);
      for (std::size_t r = 0; r < W.dim(); ++r) E.at(r, a * h + t) = flat[r * V.dim() + a];
    }
  return make_module_map(T, W, E);
}

PipelineReport proof_pipeline(const Instance& inst) {
  PipelineReport rep;
  Formation F = formation_by_name(inst.formation);
  for (const HypothesisCheck& h : check_hypotheses(inst)) {
    if (!h.pass) {
      rep.refusal = "hypothesis failed: " + h.name;
      return rep;
    }
  }
  const FieldCtx* K = inst.L->ctx();
  uint64_t seed = inst.seed;

  CharacterCluster cv = cluster(inst.V, seed + 1);
  std::vector<Character> span = fp_span(cv);
  LModule X = inst.V;
  try {
    X = tensor_power_sum(inst.V, seed + 1);
  } catch (const CapExceeded&) {
    rep.refusal = "the tensor power sum exceeds the dimension cap";
    return rep;
  }
  rep.ran = true;

  CharacterCluster cx = cluster(X, seed + 2);
  bool equal = chars_equal(cx.characters, span);
  if (!equal && chars_subset(cx.characters, span)) {
    std::vector<Character> missing;
    for (const Character& c : span)
      if (!char_in(c, cx.characters)) missing.push_back(c);
    // The only admissible gap is the zero character: with a single nonzero
    // character c, every sum of r <= p-1 copies of c stays nonzero. A
    // trivial summand restores it.
    if (missing.size() == 1 && is_zero_character(missing[0])) {
      rep.zero_char_discrepancy = true;
      X = direct_sum(X, trivial_module(inst.L, 1));
      cx = cluster(X, seed + 2);
      equal = chars_equal(cx.characters, span);
    }
  }
  bool x_hyper = restricted_hypercentral(inst.S, X, F, seed + 3);
  {
    std::ostringstream os;
    os << "dim X = " << X.dim() << ", |cl(X)| = " << cx.characters.size()
       << ", |span| = " << span.size();
    if (rep.zero_char_discrepancy) os << ", zero character restored by a trivial summand";
    if (!x_hyper) os << ", X is not hypercentral over S";
    rep.steps.push_back({1, "tensor-power-sum", equal && x_hyper, os.str()});
  }

  std::vector<LModule> factors = composition_factors(inst.W, seed + 4);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const LModule& Wf = factors[f];
    std::string tag = "factor " + std::to_string(f) + " (dim " + std::to_string(Wf.dim()) + ")";
    uint64_t fs = seed + 16 * (f + 1);

    CharacterCluster cw = cluster(Wf, fs);
    rep.steps.push_back({2, "factor-cluster-inclusion", cluster_subset(cw, cx.characters), tag});

    Subspace H = char_zero_hom_submodule(X, Wf);
    LModule homXW = hom_module(X, Wf);
    if (H.dim() == 0) {
      rep.steps.push_back({3, "restricted-hom-submodule", false, tag + ": H is zero"});
      rep.steps.push_back({4, "evaluation-surjective", false, tag + ": H is zero"});
      rep.steps.push_back({5, "factor-hypercentral", false, tag + ": H is zero"});
      continue;
    }
    LModule Hmod = sub_quotient(homXW, Subspace::zero(K, homXW.dim()), H);
    bool h_restricted = is_restricted_module(Hmod);
    bool h_hyper = restricted_hypercentral(inst.S, Hmod, F, fs + 1);
    rep.steps.push_back({3, "restricted-hom-submodule", h_restricted && h_hyper,
                         tag + ", dim H = " + std::to_string(H.dim())});

    ModuleMap ev = evaluation_map(X, H, Wf);
    bool surjective = column_space(ev.matrix) == Subspace::full(K, Wf.dim());
    rep.steps.push_back({4, "evaluation-surjective", surjective, tag});

    LModule TH = tensor(X, Hmod);
    bool t_hyper = restricted_hypercentral(inst.S, TH, F, fs + 2);
    bool w_hyper = restricted_hypercentral(inst.S, Wf, F, fs + 3);
    rep.steps.push_back({5, "factor-hypercentral", t_hyper && w_hyper,
                         tag + ", dim X(x)H = " + std::to_string(TH.dim())});
  }

  bool whole = restricted_hypercentral(inst.S, inst.W, F, seed + 5);
  rep.steps.push_back({6, "reassemble-whole-module", whole,
                       "dim W = " + std::to_string(inst.W.dim()) + ", " +
                           std::to_string(factors.size()) + " factors"});
  return rep;
}

namespace {

Matrix random_upper_nilpotent(const FieldCtx* K, std::size_t d, std::mt19937_64& rng) {
  Matrix A(K, d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) A.at(i, j) = K->from_index(rng() % K->order());
  return A;
}

Matrix random_diagonal(const FieldCtx* K, std::size_t d, std::mt19937_64& rng) {
  Matrix A(K, d, d);
  for (std::size_t i = 0; i < d; ++i) A.at(i, i) = K->from_index(rng() % K->order());
  return A;
}

// A nonzero bracket-closed nilpotent subnormal subspace, found by random
// spans closed under brackets. Every subalgebra works when L itself is
// nilpotent, which the forced-nilpotent generator branch guarantees.
std::optional<Subspace> random_good_subalgebra(const RestrictedLieAlgebra& L,
                                               std::mt19937_64& rng) {
  const FieldCtx* K = L.ctx();
  std::size_t n = L.dim();
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::size_t cnt = 1 + rng() % n;
    std::vector<std::vector<FieldElem>> gens;
    for (std::size_t g = 0; g < cnt; ++g) {
      std::vector<FieldElem> v(n);
      for (auto& x : v) x = K->from_index(rng() % K->order());
      gens.push_back(v);
    }
    Subspace U = Subspace::span(K, n, gens);
    while (true) {
      Subspace nxt = sum(U, bracket_span(L.alg(), U, U));
      if (nxt == U) break;
      U = nxt;
    }
    if (U.dim() == 0) continue;
    if (!is_nilpotent(L.alg(), U)) continue;
    if (!is_subnormal(L.alg(), U).subnormal) continue;
    return U;
  }
  return std::nullopt;
}

// dim of the tensor power sum for V, capped so oversized draws get shrunk.
std::size_t tensor_power_sum_dim(const LModule& V, uint32_t p, uint64_t seed) {
  std::size_t k = cluster(V, seed).characters.size();
  std::size_t rmax = k * (p - 1);
  std::size_t total = 0, pw = 1;
  for (std::size_t r = 1; r <= rmax; ++r) {
    pw *= V.dim();
    total += pw;
    if (total > 4096) return total;
  }
  return total;
}

}  // namespace

Instance random_instance(uint32_t p, std::size_t max_dim_L, std::size_t max_dim_V,
                         uint64_t seed) {
  if (p != 2 && p != 3 && p != 5)
    throw std::invalid_argument("random_instance: p must be 2, 3, or 5");
  const FieldCtx* K = FieldCtx::get(p, 1);
  std::mt19937_64 rng(seed * kMix + p);
  for (int attempt = 0; attempt < 64; ++attempt) {
    try {
      // Algebra: centre-killed p-closure of random matrices. Late attempts
      // force strictly upper-triangular generators, which make L nilpotent
      // and every draw below valid.
      bool force_nilpotent = attempt >= 32;
      std::size_t d = 2 + rng() % 2;
      std::size_t gcount = 1 + rng() % 2;
      std::vector<Matrix> gens;
      for (std::size_t g = 0; g < gcount; ++g) {
        bool diag = !force_nilpotent && (rng() % 3 == 0);
        gens.push_back(diag ? random_diagonal(K, d, rng) : random_upper_nilpotent(K, d, rng));
      }
      bool all_zero = true;
      for (const Matrix& g : gens)
        if (!g.is_zero()) all_zero = false;
      if (all_zero) continue;
      PClosure pc = matrix_p_closure(gens);
      if (pc.algebra.dim() == 0 || pc.algebra.dim() > max_dim_L) continue;
      AlgebraPtr L =
          std::make_shared<const RestrictedLieAlgebra>(adjust_pmap_centre_kill(pc.algebra));
      std::size_t n = L->dim();

      std::optional<Subspace> Sspace = random_good_subalgebra(*L, rng);
      if (!Sspace) continue;
      Subalgebra S = make_subalgebra(L, *Sspace);

      // Module pool: the adjoint and trivial modules are restricted; the
      // natural realization is generally not, because the centre-kill
      // changed the p-map underneath it. That mix keeps both zero and
      // nonzero character clusters in circulation.
      std::vector<LModule> pool;
      {
        std::vector<Matrix> ad_acts;
        for (std::size_t i = 0; i < n; ++i) ad_acts.push_back(L->alg().ad_basis(i));
        pool.push_back(LModule(L, n, ad_acts));
      }
      pool.push_back(trivial_module(L, 1 + rng() % 2));
      pool.push_back(LModule(L, d, pc.basis_matrices));
      pool.push_back(dual(pool[2]));

      uint32_t pick = rng() % 10;
      LModule V = pool[pick < 4 ? 0 : pick < 6 ? 1 : pick < 8 ? 2 : 3];
      std::size_t ops = rng() % 3;
      for (std::size_t o = 0; o < ops; ++o) {
        switch (rng() % 4) {
          case 0: {
            const LModule& other = pool[rng() % pool.size()];
            if (V.dim() * other.dim() <= max_dim_V) V = tensor(V, other);
            break;
          }
          case 1: {
            const LModule& other = pool[rng() % pool.size()];
            if (V.dim() + other.dim() <= max_dim_V) V = direct_sum(V, other);
            break;
          }
          case 2:
            V = dual(V);
            break;
          default: {
            std::vector<Subspace> chain = composition_series(V, rng());
            if (chain.size() >= 3) {
              std::size_t lo = rng() % (chain.size() - 1);
              std::size_t hi = lo + 1 + rng() % (chain.size() - 1 - lo);
              V = sub_quotient(V, chain[lo], chain[hi]);
            }
            break;
          }
        }
      }
      if (V.dim() == 0 || V.dim() > max_dim_V) continue;

      // Keep the pipeline's X small: cut composition factors off V until
      // the tensor power sum fits. One-dimensional V always fits.
      while (V.dim() > 1 && tensor_power_sum_dim(V, p, seed + 11) > 8) {
        std::vector<Subspace> chain = composition_series(V, rng());
        if (chain.size() < 3) break;
        V = sub_quotient(V, chain[0], chain[chain.size() - 2]);
      }
      if (tensor_power_sum_dim(V, p, seed + 11) > 8) continue;

      // W: a sub-quotient of a tensor power of V (its characters are sums
      // of V's, hence inside the span), occasionally V itself or trivial.
      LModule W = trivial_module(L, 1);
      uint32_t roll = rng() % 8;
      if (roll == 0) {
        // keep the trivial module
      } else if (roll == 1 && V.dim() <= 3) {
        W = V;
      } else {
        std::size_t r = (V.dim() * V.dim() <= 16 && (rng() % 2)) ? 2 : 1;
        LModule T = (r == 2) ? tensor(V, V) : V;
        std::vector<Subspace> chain = composition_series(T, rng());
        std::size_t lo = rng() % (chain.size() - 1);
        std::size_t hi = lo + 1 + rng() % (chain.size() - 1 - lo);
        W = sub_quotient(T, chain[lo], chain[hi]);
        if (W.dim() > 3) {
          std::size_t i = rng() % (chain.size() - 1);
          W = sub_quotient(T, chain[i], chain[i + 1]);
        }
      }
      if (W.dim() == 0 || W.dim() > 3) continue;

      if (!verify_lie(L->alg()).empty() || !verify_pmap(*L).empty()) continue;
      if (!verify_module(V).empty() || !verify_module(W).empty()) continue;
      return Instance{L, S, V, W, "nilpotent", seed};
    } catch (const CapExceeded&) {
      continue;
    }
  }
  throw std::logic_error("random_instance: no valid draw after 64 attempts");
}

CampaignSummary run_campaign(uint32_t p, std::size_t max_dim_L, std::size_t max_dim_V,
                             std::size_t count, uint64_t base_seed) {
  CampaignSummary cs;
  cs.p = p;
  cs.count = count;
  for (std::size_t i = 0; i < count; ++i) {
    Instance inst = random_instance(p, max_dim_L, max_dim_V, base_seed + i);
    Verdict v = check_theorem_instance(inst);
    cs.statuses.push_back(v.status);
    switch (v.status) {
      case Status::CONFIRMED:
        ++cs.confirmed;
        break;
      case Status::VACUOUS:
        ++cs.vacuous;
        break;
      case Status::VIOLATION:
        ++cs.violation;
        break;
    }
  }
  return cs;
}

}  // namespace modlie
