#include "algroups/irred.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "algroups/error.hpp"
#include "algroups/gf.hpp"
#include "algroups/linalg.hpp"
#include "json.hpp"

namespace algroups {

namespace {

using nlohmann::ordered_json;

struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 16;
  }
};

int exact_power_log(std::uint64_t q, long long deg) {
  if (deg <= 0) throw AlgError(Errc::ValidationError, "character degree must be positive");
  std::uint64_t v = (std::uint64_t)deg;
  int e = 0;
  while (v > 1) {
    if (v % q)
      throw AlgError(Errc::ValidationError, "character degree is not a power of the field size");
    v /= q;
    ++e;
  }
  return e;
}

bool power_within(std::uint64_t q, int e, std::uint64_t bound) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > bound / q) return false;
    v *= q;
  }
  return v <= bound;
}

// Abelianizing one extended level costs roughly |1+U'| times the number of
// cyclic generators, and the level lattice can hold hundreds of subspaces.
// Cap the per-level group size well below the general enumeration bound so a
// whole-catalog sweep stays in minutes; oversized levels are reported as
// skipped rather than silently dropped.
constexpr std::uint64_t kOrdersLevelBound = std::uint64_t(1) << 16;

std::vector<Vec> basis_rows(const Field& k, const Subspace& U) {
  std::vector<Vec> rows;
  for (int r = 0; r < U.rank(); ++r) {
    Vec c(U.rank(), 0);
    c[r] = 1;
    rows.push_back(U.lift(k, c));
  }
  return rows;
}

Subspace subspace_up(const AlgebraRef& parent, const SubAlgebra& sub, const Subspace& V) {
  const Field& k = *parent->field;
  std::vector<Vec> rows;
  for (const Vec& r : basis_rows(k, V)) rows.push_back(sub.to_parent(r));
  return Subspace::span(k, parent->dim, rows);
}

// class function through a subalgebra inclusion, into parent coordinates
ClassFunction cf_up(const AlgebraRef& parent, const SubAlgebra& sub, const Subspace& U_amb,
                    const ClassFunction& f) {
  ClassFunction out = ClassFunction::zero(parent, U_amb, f.level);
  for (size_t i = 0; i < out.classes.size(); ++i)
    out.values[i] = f.value_at(GroupElement{sub.from_parent(out.classes[i].first.a)});
  return out;
}

LinearCharacter char_up(const AlgebraRef& parent, const SubAlgebra& sub, const Subspace& U_amb,
                        const LinearCharacter& chi) {
  auto D = abelianize(parent, U_amb);
  std::uint64_t E1 = chi.domain->exponent();
  std::vector<std::uint64_t> exps;
  for (size_t j = 0; j < D->generators.size(); ++j) {
    std::uint64_t o = D->orders[j];
    std::uint64_t v = chi.eval_exponent(GroupElement{sub.from_parent(D->generators[j].a)});
    if (v * o % E1)
      throw AlgError(Errc::ValidationError, "transported character value has the wrong order");
    exps.push_back(v * o / E1 % o);
  }
  return {D, std::move(exps)};
}

LinearCharacter char_down(const SubAlgebra& sub, const Subspace& V_sub,
                          const LinearCharacter& chi) {
  auto D = abelianize(sub.alg, V_sub);
  std::uint64_t E1 = chi.domain->exponent();
  std::vector<std::uint64_t> exps;
  for (size_t j = 0; j < D->generators.size(); ++j) {
    std::uint64_t o = D->orders[j];
    std::uint64_t v = chi.eval_exponent(GroupElement{sub.to_parent(D->generators[j].a)});
    if (v * o % E1)
      throw AlgError(Errc::ValidationError, "restricted character value has the wrong order");
    exps.push_back(v * o / E1 % o);
  }
  return {D, std::move(exps)};
}

ClassFunction cf_conjugate_by(const AlgebraRef& A, const ClassFunction& f, const GroupElement& g) {
  GroupElement gi = g_inv(*A, g);
  ClassFunction out = ClassFunction::zero(A, f.space, f.level);
  for (size_t i = 0; i < out.classes.size(); ++i)
    out.values[i] = f.value_at(g_conjugate(*A, out.classes[i].first, gi));
  return out;
}

// degree-one class functions back to exponent form
std::optional<LinearCharacter> linear_of(const AlgebraRef& A, const Subspace& U,
                                         const ClassFunction& f) {
  CyclotomicInteger d = f.degree();
  if (!d.is_integer() || d.integer_value() != 1) return std::nullopt;
  auto D = abelianize(A, U);
  std::vector<std::uint64_t> exps(D->orders.size(), 0);
  for (size_t j = 0; j < D->generators.size(); ++j) {
    std::uint64_t o = D->orders[j];
    std::uint64_t L = cyclo_common_level(f.level, o);
    CyclotomicInteger vr = f.value_at(D->generators[j]).raised(L);
    bool found = false;
    for (std::uint64_t e = 0; e < o && !found; ++e)
      if (vr == CyclotomicInteger::zeta_pow(L, e * (L / o))) {
        exps[j] = e;
        found = true;
      }
    if (!found) return std::nullopt;
  }
  return LinearCharacter{D, std::move(exps)};
}

// position of the exponent tuple in character_group order
std::uint64_t char_index(const LinearCharacter& chi) {
  std::uint64_t idx = 0, radix = 1;
  for (size_t i = 0; i < chi.exponents.size(); ++i) {
    idx += chi.exponents[i] * radix;
    radix *= chi.domain->orders[i];
  }
  return idx;
}

std::vector<IrrepChain> enumerate_impl(const AlgebraRef& A, std::uint64_t seed, bool full_certify);

// irreducible characters of the square subgroup, in ambient coordinates
std::vector<ClassFunction> center_constituents(const AlgebraRef& A, const Subspace& A2,
                                               std::uint64_t seed) {
  std::vector<ClassFunction> cons;
  if (A2.rank() == 0) {
    cons.push_back(trivial_character(A, A2, 1));
    return cons;
  }
  SubAlgebra sub = subalgebra(A, A2);
  for (const IrrepChain& kid : enumerate_impl(sub.alg, seed, false))
    cons.push_back(cf_up(A, sub, A2, kid.character));
  return cons;
}

IrrepChain make_sh_chain(const SHDatum& d) {
  IrrepChain c;
  c.alg = d.alg;
  c.terminal = d;
  for (int i = 0; i < d.alg->dim; ++i) {
    Vec row(d.alg->dim, 0);
    row[i] = 1;
    c.terminal_frame.push_back(std::move(row));
  }
  c.character = sh_character(d);
  c.fdim = exact_power_log(d.alg->field->q(), c.character.degree().integer_value());
  c.sh = 0;
  return c;
}

size_t find_cf(const std::vector<ClassFunction>& list, const ClassFunction& f) {
  for (size_t i = 0; i < list.size(); ++i)
    if (iso_test(list[i], f)) return i;
  throw AlgError(Errc::ValidationError, "conjugate of an irreducible constituent is missing");
}

std::vector<std::vector<size_t>> conj_orbits(const AlgebraRef& A,
                                             const std::vector<ClassFunction>& cons) {
  auto gens = generating_set(*A, Subspace::full(A->dim));
  std::vector<int> owner(cons.size(), -1);
  std::vector<std::vector<size_t>> orbits;
  for (size_t s = 0; s < cons.size(); ++s) {
    if (owner[s] >= 0) continue;
    int id = (int)orbits.size();
    std::vector<size_t> orb{s};
    owner[s] = id;
    for (size_t head = 0; head < orb.size(); ++head)
      for (const GroupElement& g : gens) {
        size_t j = find_cf(cons, cf_conjugate_by(A, cons[orb[head]], g));
        if (owner[j] < 0) {
          owner[j] = id;
          orb.push_back(j);
        }
      }
    orbits.push_back(std::move(orb));
  }
  return orbits;
}

std::vector<IrrepChain> enumerate_impl(const AlgebraRef& A, std::uint64_t seed,
                                       bool full_certify) {
  if (A->group_size() > kClassFunctionBound)
    throw AlgError(Errc::TooLarge, "group too large for representation enumeration");
  const Field& k = *A->field;
  Subspace A2 = power_ideal(*A, 2);
  std::vector<IrrepChain> out;

  if (A2.rank() == 0) {
    for (const SHDatum& d : sh_classify(A)) out.push_back(make_sh_chain(d));
  } else {
    std::vector<ClassFunction> cons = center_constituents(A, A2, seed ? Lcg(seed).next() : 0);
    Lcg rng(seed + 0x5851f42d4c957f2dULL);
    std::optional<std::vector<SHDatum>> sh_data;  // computed once, on demand
    for (const std::vector<size_t>& orb : conj_orbits(A, cons)) {
      std::vector<std::optional<LinearCharacter>> lins(orb.size());
      bool all_linear = true;
      for (size_t t = 0; t < orb.size(); ++t) {
        lins[t] = linear_of(A, A2, cons[orb[t]]);
        if (!lins[t]) all_linear = false;
      }
      if (!all_linear) {
        if (orb.size() == 1) {
          std::ostringstream os;
          os << "{\"degree\":" << cons[orb[0]].degree().integer_value() << "}";
          throw AlgError(Errc::InvariantNotLinear,
                         "invariant constituent on the square subgroup is not linear", os.str());
        }
        throw AlgError(Errc::ValidationError,
                       "nonlinear constituent outside the invariant case is not supported");
      }
      std::vector<std::pair<std::uint64_t, size_t>> keyed;
      for (size_t t = 0; t < orb.size(); ++t) keyed.push_back({char_index(*lins[t]), t});
      std::sort(keyed.begin(), keyed.end());
      size_t pick = keyed.front().second;
      if (seed) pick = keyed[rng.next() % keyed.size()].second;
      const LinearCharacter& psi = *lins[pick];

      Subspace S = stabilizer_of_character(*A, A2, psi);
      if (!A2.subset_of(k, S))
        throw AlgError(Errc::ValidationError, "stabilizer does not contain the square subgroup");
      if (Subspace::full(A->dim).size(k) / S.size(k) != orb.size())
        throw AlgError(Errc::ValidationError, "stabilizer index does not match the orbit size");

      if (S.rank() == A->dim) {
        if (!sh_data) sh_data = sh_classify(A);
        bool matched = false;
        for (const SHDatum& d : *sh_data)
          if (d.phi.exponents == psi.exponents) {
            out.push_back(make_sh_chain(d));
            matched = true;
          }
        if (!matched)
          throw AlgError(Errc::ValidationError,
                         "no Heisenberg datum over an invariant central character");
      } else {
        SubAlgebra subs = subalgebra(A, S);
        std::vector<Vec> a2rows;
        for (const Vec& r : basis_rows(k, A2)) a2rows.push_back(subs.from_parent(r));
        Subspace A2_sub = Subspace::span(k, subs.alg->dim, a2rows);
        LinearCharacter psi_sub = char_down(subs, A2_sub, psi);
        ClassFunction psi_sub_cf = class_function_of_character(subs.alg, A2_sub, psi_sub,
                                                               psi_sub.domain->exponent());
        for (const IrrepChain& kid : enumerate_impl(subs.alg, seed ? rng.next() : 0, false)) {
          if (inner_product(restrict_to(kid.character, A2_sub), psi_sub_cf) == 0) continue;
          IrrepChain c;
          c.alg = A;
          c.steps.push_back({S, psi});
          for (const ChainStep& st : kid.steps)
            c.steps.push_back({subspace_up(A, subs, st.subgroup),
                               char_up(A, subs, subspace_up(A, subs, st.central_char.domain->space),
                                       st.central_char)});
          c.terminal = kid.terminal;
          for (const Vec& r : kid.terminal_frame) c.terminal_frame.push_back(subs.to_parent(r));
          c.character = induce(cf_up(A, subs, S, kid.character), Subspace::full(A->dim));
          if (inner_product(c.character, c.character) != 1)
            throw AlgError(Errc::SumOfSquaresMismatch, "induced chain character is not irreducible");
          c.fdim = kid.fdim + (A->dim - S.rank());
          c.sh = kid.sh + 1;
          c.child = std::make_shared<IrrepChain>(kid);
          out.push_back(std::move(c));
        }
      }
    }
  }

  std::uint64_t total = 0;
  for (const IrrepChain& c : out) {
    long long dg = c.character.degree().integer_value();
    total += (std::uint64_t)(dg * dg);
  }
  if (total != A->group_size()) {
    std::ostringstream os;
    os << "{\"sum\":" << total << ",\"order\":" << A->group_size() << "}";
    throw AlgError(Errc::SumOfSquaresMismatch, "degree squares do not add up to the group order",
                   os.str());
  }
  if (full_certify) {
    for (size_t i = 0; i < out.size(); ++i)
      for (size_t j = i + 1; j < out.size(); ++j)
        if (inner_product(out[i].character, out[j].character) != 0) {
          std::ostringstream os;
          os << "{\"first\":" << i << ",\"second\":" << j << "}";
          throw AlgError(Errc::SumOfSquaresMismatch,
                         "distinct irreducible characters are not orthogonal", os.str());
        }
  }
  return out;
}

// change of basis between ambient vectors and coordinates in a stored frame
struct FrameMap {
  const Field* k = nullptr;
  Subspace space;
  int t = 0;
  std::vector<Fel> inv;  // t x t, echelon coordinates -> frame coordinates

  Vec to_inner(const Vec& ambient) const {
    Vec e = space.coords(*k, ambient);
    Vec c(t, 0);
    for (int j = 0; j < t; ++j) {
      Fel acc = 0;
      for (int i = 0; i < t; ++i) acc = k->add(acc, k->mul(e[i], inv[(size_t)i * t + j]));
      c[j] = acc;
    }
    return c;
  }
};

FrameMap make_frame(const Field& k, int ambient, const std::vector<Vec>& rows) {
  FrameMap fm;
  fm.k = &k;
  fm.space = Subspace::span(k, ambient, rows);
  fm.t = fm.space.rank();
  if ((int)rows.size() != fm.t)
    throw AlgError(Errc::ValidationError, "frame rows are linearly dependent");
  std::vector<Fel> M((size_t)fm.t * fm.t, 0);
  for (int i = 0; i < fm.t; ++i) {
    Vec co = fm.space.coords(k, rows[i]);
    for (int j = 0; j < fm.t; ++j) M[(size_t)i * fm.t + j] = co[j];
  }
  if (!linalg::invert(k, M, fm.t, fm.inv))
    throw AlgError(Errc::ValidationError, "frame matrix is singular");
  return fm;
}

ClassFunction cf_frobenius(const ClassFunction& f, std::uint32_t q0) {
  const AlgebraRef& A = f.alg;
  std::uint64_t t = A->field->q();
  int d = 0;
  while (t > 1) {
    if (t % q0)
      throw AlgError(Errc::NotDefinedOverSubfield,
                     "field size is not a power of the requested subfield size");
    t /= q0;
    ++d;
  }
  const Field& k = *A->field;
  for (const Vec& r : basis_rows(k, f.space))
    if (!f.space.contains(k, frobenius_on_vec(*A, r, q0)))
      throw AlgError(Errc::NotDefinedOverSubfield, "subgroup is not stable under the power map");
  ClassFunction out = ClassFunction::zero(A, f.space, f.level);
  for (size_t i = 0; i < out.classes.size(); ++i) {
    Vec v = out.classes[i].first.a;
    for (int s = 0; s + 1 < d; ++s) v = frobenius_on_vec(*A, v, q0);  // the inverse power map
    out.values[i] = f.value_at(GroupElement{v});
  }
  return out;
}

}  // namespace

std::vector<IrrepChain> enumerate_irreps(const AlgebraRef& A, std::uint64_t choice_seed) {
  return enumerate_impl(A, choice_seed, true);
}

ReductionData reduction_step(const AlgebraRef& A, const ClassFunction& rho) {
  if (!(rho.space == Subspace::full(A->dim)))
    throw AlgError(Errc::GroupMismatch, "reduction expects a character of the full group");
  if (inner_product(rho, rho) != 1)
    throw AlgError(Errc::NotIrreducible, "reduction requires an irreducible character");
  Subspace A2 = power_ideal(*A, 2);
  std::vector<ClassFunction> cons = center_constituents(A, A2, 0);
  ClassFunction res = restrict_to(rho, A2);

  std::vector<size_t> support;
  long long mult = 0;
  for (size_t i = 0; i < cons.size(); ++i) {
    long long m = inner_product(res, cons[i]);
    if (m == 0) continue;
    if (!support.empty() && m != mult)
      throw AlgError(Errc::ValidationError, "isotypic multiplicities differ across the orbit");
    mult = m;
    support.push_back(i);
  }
  if (support.empty())
    throw AlgError(Errc::ValidationError, "restriction to the square subgroup has no constituents");

  auto orbits = conj_orbits(A, cons);
  for (const auto& orb : orbits) {
    if (std::find(orb.begin(), orb.end(), support.front()) == orb.end()) continue;
    std::vector<size_t> sorted_orb(orb.begin(), orb.end());
    std::sort(sorted_orb.begin(), sorted_orb.end());
    if (sorted_orb != support)
      throw AlgError(Errc::ValidationError, "constituents do not form a single orbit");
    break;
  }

  ReductionData rd;
  for (size_t i : support) {
    auto l = linear_of(A, A2, cons[i]);
    if (!l) {
      if (support.size() == 1) {
        std::ostringstream os;
        os << "{\"degree\":" << cons[i].degree().integer_value() << "}";
        throw AlgError(Errc::InvariantNotLinear,
                       "invariant constituent on the square subgroup is not linear", os.str());
      }
      throw AlgError(Errc::ValidationError,
                     "nonlinear constituent outside the invariant case is not supported");
    }
    rd.orbit.push_back(std::move(*l));
  }
  size_t best = 0;
  for (size_t t = 1; t < rd.orbit.size(); ++t)
    if (char_index(rd.orbit[t]) < char_index(rd.orbit[best])) best = t;
  rd.central_char = rd.orbit[best];
  rd.subgroup = stabilizer_of_character(*A, A2, rd.central_char);
  rd.multiplicity = mult;
  if (mult * (long long)support.size() != rho.degree().integer_value())
    throw AlgError(Errc::ValidationError, "isotypic block sizes do not add up to the degree");
  return rd;
}

MonomialData monomialize(const IrrepChain& rho) {
  const AlgebraRef& A = rho.alg;
  const Field& k = *A->field;
  const AlgebraRef& T = rho.terminal.alg;
  Subspace lt = maximal_isotropic(T, rho.terminal.phi);
  LinearCharacter lam = sh_extensions(rho.terminal, lt).front();

  FrameMap fm = make_frame(k, A->dim, rho.terminal_frame);
  std::vector<Vec> brows;
  for (const Vec& r : basis_rows(k, lt)) {
    Vec amb(A->dim, 0);
    for (int i = 0; i < T->dim; ++i)
      for (int d = 0; d < A->dim; ++d)
        amb[d] = k.add(amb[d], k.mul(r[i], rho.terminal_frame[i][d]));
    brows.push_back(std::move(amb));
  }
  Subspace B = Subspace::span(k, A->dim, brows);
  if (!is_subalgebra(*A, B))
    throw AlgError(Errc::ValidationError, "monomial subgroup is not multiplicatively closed");

  auto D = abelianize(A, B);
  std::uint64_t E1 = lam.domain->exponent();
  std::vector<std::uint64_t> exps;
  for (size_t j = 0; j < D->generators.size(); ++j) {
    std::uint64_t o = D->orders[j];
    std::uint64_t v = lam.eval_exponent(GroupElement{fm.to_inner(D->generators[j].a)});
    if (v * o % E1)
      throw AlgError(Errc::ValidationError, "monomial character value has the wrong order");
    exps.push_back(v * o / E1 % o);
  }
  LinearCharacter lam_amb{D, std::move(exps)};
  ClassFunction ind = induce(class_function_of_character(A, B, lam_amb, D->exponent()),
                             Subspace::full(A->dim));
  if (!iso_test(ind, rho.character))
    throw AlgError(Errc::ValidationError, "monomial induction does not reproduce the character");
  return {B, lam_amb};
}

IrrepChain base_change(const IrrepChain& rho, int n) {
  if (n < 1) throw AlgError(Errc::BadParameter, "extension degree must be at least 1");
  if (n == 1) return rho;
  const AlgebraRef& A = rho.alg;
  const Field& k = *A->field;
  std::uint32_t q = k.q();
  if (!power_within(q, n * A->dim, kClassFunctionBound))
    throw AlgError(Errc::TooLarge, "extended group too large for representation work");

  IrrepChain out;
  if (rho.sh == 0) {
    out = make_sh_chain(sh_base_change(rho.terminal, n));
  } else {
    const ChainStep& st = rho.steps.front();
    IrrepChain kid2 = base_change(*rho.child, n);
    AlgebraRef Ax = extend_scalars(A, n);
    Embedding emb(A->field, Ax->field);
    std::vector<Vec> srows;
    for (Vec r : basis_rows(k, st.subgroup)) {
      for (Fel& x : r) x = emb(x);
      srows.push_back(std::move(r));
    }
    Subspace Sx = Subspace::span(*Ax->field, Ax->dim, srows);
    SubAlgebra subsx = subalgebra(Ax, Sx);
    if (subsx.alg->fingerprint() != kid2.alg->fingerprint())
      throw AlgError(Errc::ValidationError,
                     "scalar extension does not commute with the stabilizer frame");

    LinearCharacter psix_raw = norm_pullback(A, st.central_char.domain->space, st.central_char, n);
    auto D = abelianize(Ax, power_ideal(*Ax, 2));
    if (!(D->space == psix_raw.domain->space) || D->orders != psix_raw.domain->orders)
      throw AlgError(Errc::ValidationError, "scalar extension of the square subgroup disagrees");
    LinearCharacter psix{D, psix_raw.exponents};

    out.alg = Ax;
    out.steps.push_back({Sx, psix});
    for (const ChainStep& st2 : kid2.steps)
      out.steps.push_back({subspace_up(Ax, subsx, st2.subgroup),
                           char_up(Ax, subsx, subspace_up(Ax, subsx, st2.central_char.domain->space),
                                   st2.central_char)});
    out.terminal = kid2.terminal;
    for (const Vec& r : kid2.terminal_frame) out.terminal_frame.push_back(subsx.to_parent(r));
    out.character = induce(cf_up(Ax, subsx, Sx, kid2.character), Subspace::full(Ax->dim));
    out.fdim = kid2.fdim + (Ax->dim - Sx.rank());
    out.sh = kid2.sh + 1;
    out.child = std::make_shared<IrrepChain>(std::move(kid2));
  }

  if (out.fdim != rho.fdim || out.sh != rho.sh)
    throw AlgError(Errc::ValidationError, "chain invariants drifted under base change");
  long long nrm = inner_product(out.character, out.character);
  if (nrm != 1) {
    std::ostringstream os;
    os << "{\"self_product\":" << nrm << ",\"ext\":" << n << "}";
    throw AlgError(Errc::NotIrreducibleAfterBaseChange,
                   "base-changed character is not irreducible", os.str());
  }
  {
    size_t osz = galois_orbit(out.character, q).size();
    if (osz != 1) {
      std::ostringstream os;
      os << "{\"orbit\":" << osz << ",\"ext\":" << n << "}";
      throw AlgError(Errc::NotGaloisInvariant,
                     "base-changed character moves under the field symmetry", os.str());
    }
  }
  {
    ReductionData red = reduction_step(out.alg, out.character);
    const LinearCharacter& expect =
        out.sh == 0 ? out.terminal.phi : out.steps.front().central_char;
    bool found = false;
    for (const LinearCharacter& c : red.orbit)
      if (c.exponents == expect.exponents && c.domain->space == expect.domain->space) {
        found = true;
        break;
      }
    Subspace stab_expect =
        out.sh == 0 ? Subspace::full(out.alg->dim) : out.steps.front().subgroup;
    Subspace stab_img = stabilizer_of_character(*out.alg, power_ideal(*out.alg, 2), expect);
    if (!found || !(stab_img == stab_expect)) {
      std::ostringstream os;
      os << "{\"constituent_present\":" << (found ? "true" : "false") << ",\"ext\":" << n << "}";
      throw AlgError(Errc::ReductionMismatch,
                     "first reduction level does not match its scalar extension", os.str());
    }
  }
  return out;
}

std::vector<ClassFunction> galois_orbit(const ClassFunction& chi, std::uint32_t q0) {
  std::vector<ClassFunction> orbit{chi};
  while (true) {
    ClassFunction nxt = cf_frobenius(orbit.back(), q0);
    if (iso_test(nxt, orbit.front())) break;
    orbit.push_back(std::move(nxt));
    if (orbit.size() > 64)
      throw AlgError(Errc::ValidationError, "orbit under the power map failed to close");
  }
  return orbit;
}

bool iso_test(const ClassFunction& a, const ClassFunction& b) {
  if (a.alg != b.alg && a.alg->fingerprint() != b.alg->fingerprint()) return false;
  if (!(a.space == b.space)) return false;
  if (a.classes.size() != b.classes.size()) return false;
  for (size_t i = 0; i < a.classes.size(); ++i)
    if (a.classes[i].second != b.classes[i].second ||
        !(a.classes[i].first.a == b.classes[i].first.a))
      return false;
  std::uint64_t L = cyclo_common_level(a.level, b.level);
  for (size_t i = 0; i < a.values.size(); ++i)
    if (!(a.values[i].raised(L) == b.values[i].raised(L))) return false;
  return true;
}

namespace {

CheckResult skipped_rec(const std::string& check, ordered_json extra, const std::string& why) {
  extra["skipped"] = why;
  return {check, true, extra.dump()};
}

CheckResult error_rec(const std::string& check, ordered_json extra, const AlgError& e) {
  extra["error"] = errc_name(e.code);
  extra["message"] = e.what();
  if (!e.witness.empty()) {
    ordered_json data = ordered_json::parse(e.witness, nullptr, false);
    extra["data"] = data.is_discarded() ? ordered_json(e.witness) : data;
  }
  return {check, false, extra.dump()};
}

}  // namespace

std::vector<CheckResult> experiments(const AlgebraRef& A, const std::vector<int>& exts_in,
                                     const std::vector<std::string>& checks) {
  static const std::set<std::string> kKnown = {
      "isaacs",       "gutkin",       "halasi",      "commutator-balance",
      "norms",        "orders",       "injectivity", "transitivity",
      "equivariance", "surjectivity", "conditional", "restriction"};
  std::set<std::string> want(checks.begin(), checks.end());
  for (const std::string& c : want)
    if (!kKnown.count(c)) throw AlgError(Errc::BadParameter, "unknown check id: " + c);
  auto have = [&](const char* id) { return want.empty() || want.count(id) > 0; };

  std::vector<int> exts;
  for (int n : exts_in) {
    if (n < 1) throw AlgError(Errc::BadParameter, "extension degree must be at least 1");
    if (n > 1) exts.push_back(n);
  }
  std::sort(exts.begin(), exts.end());
  exts.erase(std::unique(exts.begin(), exts.end()), exts.end());

  const Field& k = *A->field;
  std::uint64_t q = k.q();
  std::vector<CheckResult> out;

  std::vector<IrrepChain> irr;
  int irr_state = 0;  // 1 ok, 2 too large, 3 reportable failure
  std::optional<AlgError> irr_err;
  auto ensure_irr = [&] {
    if (irr_state) return;
    try {
      irr = enumerate_irreps(A);
      irr_state = 1;
    } catch (const AlgError& e) {
      if (e.code == Errc::TooLarge)
        irr_state = 2;
      else if (errc_is_violation(e.code) || e.code == Errc::ValidationError) {
        irr_state = 3;
        irr_err = e;
      } else {
        throw;
      }
    }
  };
  auto irr_gate = [&](const char* id, ordered_json extra = {}) -> bool {
    ensure_irr();
    if (irr_state == 1) return true;
    if (irr_state == 2)
      out.push_back(skipped_rec(id, extra, "size"));
    else
      out.push_back(error_rec(id, extra, *irr_err));
    return false;
  };

  if (have("halasi")) {
    if (irr_gate("halasi")) {
      ordered_json w;
      w["irreps"] = irr.size();
      out.push_back({"halasi", true, w.dump()});
    }
  }

  if (have("isaacs") && irr_gate("isaacs")) {
    bool ok = true;
    ordered_json w;
    ordered_json degs = ordered_json::array();
    for (const IrrepChain& c : irr) {
      long long dg = c.character.degree().integer_value();
      degs.push_back(dg);
      std::uint64_t v = 1;
      for (int i = 0; i < c.fdim; ++i) v *= q;
      bool power = true;
      std::uint64_t t = (std::uint64_t)dg;
      while (t > 1) {
        if (t % q) {
          power = false;
          break;
        }
        t /= q;
      }
      if (!power || v != (std::uint64_t)dg) {
        ok = false;
        w["degree"] = dg;
        break;
      }
    }
    w["degrees"] = degs;
    out.push_back({"isaacs", ok, w.dump()});
  }

  if (have("gutkin") && irr_gate("gutkin")) {
    try {
      for (const IrrepChain& c : irr) monomialize(c);
      ordered_json w;
      w["irreps"] = irr.size();
      out.push_back({"gutkin", true, w.dump()});
    } catch (const AlgError& e) {
      out.push_back(error_rec("gutkin", {}, e));
    }
  }

  if (have("commutator-balance")) {
    try {
      auto invs = invariant_central_characters(A);
      bool all = true;
      ordered_json w;
      w["characters"] = invs.size();
      for (const LinearCharacter& phi : invs) {
        CheckResult r = verify_balance(A, phi);
        if (!r.pass) {
          all = false;
          ordered_json data = ordered_json::parse(r.witness, nullptr, false);
          w["witness"] = data.is_discarded() ? ordered_json(r.witness) : data;
          break;
        }
      }
      out.push_back({"commutator-balance", all, w.dump()});
    } catch (const AlgError& e) {
      if (e.code == Errc::TooLarge)
        out.push_back(skipped_rec("commutator-balance", {}, "size"));
      else
        throw;
    }
  }

  if (have("norms")) {
    if (exts.empty())
      out.push_back(skipped_rec("norms", {}, "no extensions requested"));
    else {
      // the battery wants divisible towers, so split the request into chains
      std::vector<std::vector<int>> chains;
      for (int n : exts) {
        bool placed = false;
        for (auto& ch : chains)
          if (n % ch.back() == 0) {
            ch.push_back(n);
            placed = true;
            break;
          }
        if (!placed) chains.push_back({n});
      }
      for (const auto& ch : chains) {
        ordered_json ex;
        ex["tower"] = ch;
        try {
          for (CheckResult& r : verify_norm_properties(A, ch)) out.push_back(std::move(r));
        } catch (const AlgError& e) {
          if (e.code == Errc::TooLarge)
            out.push_back(skipped_rec("norms", ex, "size"));
          else
            throw;
        }
      }
    }
  }

  for (int n : exts) {
    ordered_json ext_extra;
    ext_extra["ext"] = n;
    bool cf_ok = power_within(q, n * A->dim, kClassFunctionBound);

    // (d) the abelianization orders comparison, level by level
    bool orders_done = false;
    std::optional<bool> orders_eq;
    bool orders_complete = true;  // no level was size-skipped
    std::vector<std::pair<Subspace, bool>> level_eq;
    ordered_json orders_levels = ordered_json::array();
    auto compute_orders = [&]() {
      if (orders_done) return;
      orders_done = true;
      AlgebraRef Ax = extend_scalars(A, n);
      Embedding emb(A->field, Ax->field);
      bool all = true;
      for (const Subspace& U : subspaces_between(*A, power_ideal(*A, 2),
                                                 Subspace::full(A->dim))) {
        if (!power_within(q, n * U.rank(), kOrdersLevelBound)) {
          orders_complete = false;
          orders_levels.push_back({{"rank", U.rank()}, {"skipped", "size"}});
          continue;
        }
        std::uint64_t lhs = abelianize(A, U)->size();
        std::vector<Vec> rows;
        for (Vec r : basis_rows(k, U)) {
          for (Fel& x : r) x = emb(x);
          rows.push_back(std::move(r));
        }
        Subspace Ux = Subspace::span(*Ax->field, Ax->dim, rows);
        auto Qx = abelianize(Ax, Ux);
        auto M = frobenius_on_quotient(*Qx, (std::uint32_t)q);
        std::uint64_t fixed = 0;
        std::vector<std::uint64_t> x(Qx->orders.size(), 0);
        while (true) {
          if (apply_generator_map(M, *Qx, x) == x) ++fixed;
          size_t i = 0;
          while (i < x.size() && ++x[i] == Qx->orders[i]) {
            x[i] = 0;
            ++i;
          }
          if (i == x.size()) break;
        }
        bool eq = lhs == fixed;
        all = all && eq;
        level_eq.push_back({U, eq});
        orders_levels.push_back(
            {{"rank", U.rank()}, {"base_ab", lhs}, {"fixed_ab", fixed}, {"equal", eq}});
      }
      orders_eq = all;
    };

    if (have("orders")) {
      compute_orders();
      ordered_json w = ext_extra;
      w["levels"] = orders_levels;
      out.push_back({"orders", *orders_eq, w.dump()});
    }

    // images of the base irreducibles
    std::vector<IrrepChain> img;
    int img_state = 0;
    std::optional<AlgError> img_err;
    auto compute_img = [&]() {
      if (img_state) return;
      ensure_irr();
      if (irr_state != 1) {
        img_state = irr_state;
        img_err = irr_err;
        return;
      }
      if (!cf_ok) {
        img_state = 2;
        return;
      }
      try {
        for (const IrrepChain& c : irr) img.push_back(base_change(c, n));
        img_state = 1;
      } catch (const AlgError& e) {
        if (e.code == Errc::TooLarge)
          img_state = 2;
        else if (errc_is_violation(e.code) || e.code == Errc::ValidationError) {
          img_state = 3;
          img_err = e;
        } else {
          throw;
        }
      }
    };
    auto img_gate = [&](const char* id) -> bool {
      compute_img();
      if (img_state == 1) return true;
      if (img_state == 2)
        out.push_back(skipped_rec(id, ext_extra, "size"));
      else
        out.push_back(error_rec(id, ext_extra, *img_err));
      return false;
    };

    if (have("injectivity") && img_gate("injectivity")) {
      bool ok = true;
      ordered_json w = ext_extra;
      for (size_t i = 0; i < img.size() && ok; ++i)
        for (size_t j = i + 1; j < img.size(); ++j)
          if (iso_test(img[i].character, img[j].character)) {
            ok = false;
            w["first"] = i;
            w["second"] = j;
            break;
          }
      w["irreps"] = img.size();
      out.push_back({"injectivity", ok, w.dump()});
    }

    if (have("equivariance")) {
      if (k.m() == 1)
        out.push_back(skipped_rec("equivariance", ext_extra, "defined over the prime field"));
      else if (img_gate("equivariance")) {
        try {
          std::uint32_t q0 = (std::uint32_t)k.p();
          bool ok = true;
          ordered_json w = ext_extra;
          for (size_t i = 0; i < irr.size() && ok; ++i) {
            ClassFunction fr_src = cf_frobenius(irr[i].character, q0);
            size_t j = 0;
            bool located = false;
            for (; j < irr.size(); ++j)
              if (iso_test(irr[j].character, fr_src)) {
                located = true;
                break;
              }
            if (!located)
              throw AlgError(Errc::ValidationError, "power map image is not among the irreducibles");
            if (!iso_test(img[j].character, cf_frobenius(img[i].character, q0))) {
              ok = false;
              w["irrep"] = i;
            }
          }
          w["irreps"] = irr.size();
          out.push_back({"equivariance", ok, w.dump()});
        } catch (const AlgError& e) {
          if (e.code == Errc::NotDefinedOverSubfield)
            out.push_back(
                skipped_rec("equivariance", ext_extra, "not defined over the prime field"));
          else
            throw;
        }
      }
    }

    // the extension group's own irreducibles, for the image tests
    std::vector<IrrepChain> irrx;
    std::vector<char> irrx_invariant;
    AlgebraRef Ax_shared;
    int surj_state = 0;
    std::optional<AlgError> surj_err;
    std::optional<bool> surj_pass;
    ordered_json surj_w;
    auto compute_surj = [&]() {
      if (surj_state) return;
      compute_img();
      if (img_state != 1) {
        surj_state = img_state;
        surj_err = img_err;
        return;
      }
      try {
        Ax_shared = extend_scalars(A, n);
        irrx = enumerate_irreps(Ax_shared);
      } catch (const AlgError& e) {
        if (e.code == Errc::TooLarge) {
          surj_state = 2;
          return;
        }
        if (errc_is_violation(e.code) || e.code == Errc::ValidationError) {
          surj_state = 3;
          surj_err = e;
          return;
        }
        throw;
      }
      surj_state = 1;
      std::uint64_t inv_count = 0, hits = 0;
      ordered_json missing = ordered_json::array();
      for (const IrrepChain& cx : irrx) {
        bool invariant = galois_orbit(cx.character, (std::uint32_t)q).size() == 1;
        irrx_invariant.push_back(invariant ? 1 : 0);
        if (!invariant) continue;
        ++inv_count;
        bool hit = false;
        for (const IrrepChain& im : img)
          if (iso_test(im.character, cx.character)) {
            hit = true;
            break;
          }
        if (hit)
          ++hits;
        else
          missing.push_back(cx.character.degree().integer_value());
      }
      surj_pass = hits == inv_count;
      surj_w = ext_extra;
      surj_w["invariant"] = inv_count;
      surj_w["in_image"] = hits;
      if (!*surj_pass) surj_w["missing_degrees"] = missing;
    };

    if (have("surjectivity")) {
      compute_surj();
      if (surj_state == 1)
        out.push_back({"surjectivity", *surj_pass, surj_w.dump()});
      else if (surj_state == 2)
        out.push_back(skipped_rec("surjectivity", ext_extra, "size"));
      else
        out.push_back(error_rec("surjectivity", ext_extra, *surj_err));
    }

    if (have("conditional")) {
      compute_orders();
      compute_surj();
      if (surj_state == 2 || !orders_complete)
        out.push_back(skipped_rec("conditional", ext_extra, "size"));
      else if (surj_state == 3)
        out.push_back(error_rec("conditional", ext_extra, *surj_err));
      else {
        bool pass = !*orders_eq || *surj_pass;
        ordered_json w = ext_extra;
        w["orders_equal"] = *orders_eq;
        w["surjective"] = *surj_pass;
        out.push_back({"conditional", pass, w.dump()});
      }
    }

    if (have("restriction")) {
      compute_orders();
      compute_surj();
      if (surj_state == 2)
        out.push_back(skipped_rec("restriction", ext_extra, "size"));
      else if (surj_state == 3)
        out.push_back(error_rec("restriction", ext_extra, *surj_err));
      else {
        try {
          Embedding emb(A->field, Ax_shared->field);
          bool ok = true;
          std::uint64_t pairs = 0;
          ordered_json w = ext_extra;
          for (const auto& [U, eq] : level_eq) {
            if (!eq) continue;  // outside the corollary's hypothesis
            if (U.rank() == A->dim) continue;
            if (!power_within(q, n * U.rank(), kClassFunctionBound)) continue;
            std::vector<Vec> rows;
            for (Vec r : basis_rows(k, U)) {
              for (Fel& x : r) x = emb(x);
              rows.push_back(std::move(r));
            }
            Subspace Ux = Subspace::span(*Ax_shared->field, Ax_shared->dim, rows);
            SubAlgebra subx = subalgebra(Ax_shared, Ux);
            std::vector<ClassFunction> subamb;
            for (const IrrepChain& s : enumerate_irreps(subx.alg))
              subamb.push_back(cf_up(Ax_shared, subx, Ux, s.character));
            for (size_t ci = 0; ci < irrx.size() && ok; ++ci) {
              if (!irrx_invariant[ci]) continue;
              ClassFunction res = restrict_to(irrx[ci].character, Ux);
              bool found_inv = false;
              for (const ClassFunction& s : subamb) {
                if (inner_product(res, s) == 0) continue;
                if (galois_orbit(s, (std::uint32_t)q).size() == 1) {
                  found_inv = true;
                  break;
                }
              }
              ++pairs;
              if (!found_inv) {
                ok = false;
                w["subgroup_rank"] = U.rank();
                w["degree"] = irrx[ci].character.degree().integer_value();
              }
            }
            if (!ok) break;
          }
          w["pairs"] = pairs;
          out.push_back({"restriction", ok, w.dump()});
        } catch (const AlgError& e) {
          if (e.code == Errc::TooLarge)
            out.push_back(skipped_rec("restriction", ext_extra, "size"));
          else
            throw;
        }
      }
    }
  }

  if (have("transitivity")) {
    std::vector<std::pair<int, int>> towers;
    for (size_t i = 0; i < exts.size(); ++i)
      for (size_t j = i + 1; j < exts.size(); ++j)
        if (exts[j] % exts[i] == 0) towers.push_back({exts[i], exts[j]});
    if (towers.empty())
      out.push_back(skipped_rec("transitivity", {}, "no divisible pair of extensions"));
    else {
      ensure_irr();
      for (const auto& [n1, n2] : towers) {
        ordered_json ex;
        ex["tower"] = {n1, n2};
        if (irr_state == 2) {
          out.push_back(skipped_rec("transitivity", ex, "size"));
          continue;
        }
        if (irr_state == 3) {
          out.push_back(error_rec("transitivity", ex, *irr_err));
          continue;
        }
        if (!power_within(q, n2 * A->dim, kClassFunctionBound)) {
          out.push_back(skipped_rec("transitivity", ex, "size"));
          continue;
        }
        try {
          bool ok = true;
          for (const IrrepChain& c : irr) {
            IrrepChain big = base_change(c, n2);
            IrrepChain two = base_change(base_change(c, n1), n2 / n1);
            if (!iso_test(big.character, two.character)) {
              ok = false;
              ex["degree"] = c.character.degree().integer_value();
              break;
            }
          }
          ex["irreps"] = irr.size();
          out.push_back({"transitivity", ok, ex.dump()});
        } catch (const AlgError& e) {
          if (e.code == Errc::TooLarge)
            out.push_back(skipped_rec("transitivity", ex, "size"));
          else if (errc_is_violation(e.code) || e.code == Errc::ValidationError)
            out.push_back(error_rec("transitivity", ex, e));
          else
            throw;
        }
      }
    }
  }

  return out;
}

}  // namespace algroups
