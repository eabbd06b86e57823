#include "algroups/heis.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <numeric>
#include <set>
#include <unordered_map>

#include "algroups/error.hpp"
#include "algroups/linalg.hpp"
#include "json.hpp"

namespace algroups {

using nlohmann::ordered_json;

namespace {

struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 16;
  }
};

std::uint64_t character_order(const LinearCharacter& chi) {
  std::uint64_t ord = 1;
  for (size_t i = 0; i < chi.exponents.size(); ++i) {
    std::uint64_t o = chi.domain->orders[i];
    std::uint64_t e = chi.exponents[i] % o;
    ord = std::lcm(ord, o / std::gcd(o, e == 0 ? o : e));
  }
  return ord;
}

// The prime-field basis multiples beta_b = x^b of the field, as scalars.
std::vector<Fel> field_basis(const Field& k) {
  std::vector<Fel> out;
  Fel x = k.m() > 1 ? (Fel)k.p() : 1;
  for (int b = 0; b < k.m(); ++b) out.push_back(k.pow(x, b));
  return out;
}

std::uint64_t pairing_exponent(const Algebra& A, const LinearCharacter& phi, const Vec& a,
                               const Vec& b) {
  GroupElement c = g_commutator(A, GroupElement{a}, GroupElement{b});
  return phi.eval_exponent(c);
}

std::uint64_t scaled_exponent(const LinearCharacter& phi, std::uint64_t level, std::uint64_t e) {
  if (level == 1) return 0;
  std::uint64_t E = phi.domain->exponent();
  std::uint64_t num = e % E * level;
  if (num % E != 0)
    throw AlgError(Errc::ValidationError, "pairing value outside the character's value group");
  return num / E % level;
}

bool character_invariant(const AlgebraRef& A, const LinearCharacter& phi) {
  for (int i = 0; i < A->dim; ++i) {
    Vec gi = A->zero();
    gi[i] = 1;
    GroupElement g{gi};
    for (const GroupElement& h : phi.domain->generators) {
      GroupElement hc = g_conjugate(*A, h, g);
      if (phi.eval_exponent(hc) != phi.eval_exponent(h)) return false;
    }
  }
  return true;
}

void require_central_domain(const AlgebraRef& A, const LinearCharacter& phi) {
  if (!phi.domain || !(phi.domain->space == power_ideal(*A, 2)))
    throw AlgError(Errc::GroupMismatch, "character does not live on the square subgroup");
}

// The balance sweep touches |G|^2 * q commutators per character, but the
// commutators themselves do not depend on the character and take values in
// the small set 1 + A^2.  Tabulate them once per algebra: each pair maps to
// the index of its commutator among the distinct values, and each scalar to
// the permutation it induces on element codes.  A character sweep then costs
// one exponent evaluation per distinct value plus index lookups.
struct BalanceTable {
  std::vector<GroupElement> elems;                    // enumeration order
  std::vector<GroupElement> reps;                     // distinct commutators
  std::vector<std::uint16_t> pair_slot;               // (i, j) -> rep index
  std::vector<std::vector<std::uint32_t>> scale_perm; // per scalar, index map
};

std::shared_ptr<const BalanceTable> balance_table(const AlgebraRef& A) {
  static std::mutex cache_mutex;
  static std::deque<std::pair<std::string, std::shared_ptr<const BalanceTable>>> cache;
  std::string key = A->fingerprint();
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    for (const auto& e : cache)
      if (e.first == key) return e.second;
  }

  auto T = std::make_shared<BalanceTable>();
  T->elems = enumerate_group(*A);
  const size_t n = T->elems.size();
  std::unordered_map<std::uint64_t, std::uint32_t> index_of;
  index_of.reserve(2 * n);
  for (size_t i = 0; i < n; ++i) index_of[element_code(*A, T->elems[i])] = (std::uint32_t)i;

  std::vector<GroupElement> inv(n, GroupElement{Vec()});
  for (size_t i = 0; i < n; ++i) inv[i] = g_inv(*A, T->elems[i]);

  std::unordered_map<std::uint64_t, std::uint16_t> slot_of;
  T->pair_slot.resize(n * n);
  for (size_t i = 0; i < n; ++i) {
    GroupElement left = inv[i];
    for (size_t j = 0; j < n; ++j) {
      GroupElement c = g_mul(*A, g_mul(*A, g_mul(*A, left, inv[j]), T->elems[i]), T->elems[j]);
      std::uint64_t code = element_code(*A, c);
      auto [it, fresh] = slot_of.try_emplace(code, (std::uint16_t)T->reps.size());
      if (fresh) T->reps.push_back(c);
      T->pair_slot[i * n + j] = it->second;
    }
  }

  const Field& k = *A->field;
  T->scale_perm.assign(k.q(), std::vector<std::uint32_t>(n));
  for (std::uint64_t lam = 0; lam < k.q(); ++lam)
    for (size_t i = 0; i < n; ++i)
      T->scale_perm[lam][i] =
          index_of.at(element_code(*A, GroupElement{A->scale((Fel)lam, T->elems[i].a)}));

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache.emplace_back(std::move(key), T);
  while (cache.size() > 2) cache.pop_front();
  return T;
}

// chi_small lives on a subgroup of chi_big's domain; do they agree there?
bool restriction_agrees(const LinearCharacter& chi_big, const LinearCharacter& chi_small) {
  std::uint64_t eb = chi_big.domain->exponent();
  std::uint64_t es = chi_small.domain->exponent();
  std::uint64_t L = std::lcm(eb, es);
  for (const GroupElement& h : chi_small.domain->generators) {
    std::uint64_t vb = chi_big.eval_exponent(h) % eb;
    std::uint64_t vs = chi_small.eval_exponent(h) % es;
    if (vb * (L / eb) % L != vs * (L / es) % L) return false;
  }
  return true;
}

}  // namespace

std::vector<Vec> complement_basis(const Algebra& A, const Subspace& inner) {
  std::vector<Vec> out;
  Subspace cur = inner;
  for (int i = 0; i < A.dim && cur.rank() < A.dim; ++i) {
    Vec e = A.zero();
    e[i] = 1;
    if (cur.contains(*A.field, e)) continue;
    out.push_back(e);
    std::vector<Vec> rows = {e};
    for (int r = 0; r < cur.rank(); ++r) {
      Vec c(cur.rank(), 0);
      c[r] = 1;
      rows.push_back(cur.lift(*A.field, c));
    }
    cur = Subspace::span(*A.field, A.dim, rows);
  }
  return out;
}

std::vector<LinearCharacter> invariant_central_characters(const AlgebraRef& A) {
  if (A->group_size() > kEnumerationBound)
    throw AlgError(Errc::TooLarge, "group too large for character work");
  AbelianQuotientRef Q2 = abelianize(A, power_ideal(*A, 2));
  std::vector<LinearCharacter> out;
  for (LinearCharacter& chi : character_group(Q2))
    if (character_invariant(A, chi)) out.push_back(std::move(chi));
  return out;
}

PairingMatrix commutator_pairing(const AlgebraRef& A, const LinearCharacter& phi) {
  require_central_domain(A, phi);
  if (!character_invariant(A, phi))
    throw AlgError(Errc::NotInvariant, "central character moves under conjugation");

  PairingMatrix P;
  P.level = character_order(phi);
  Subspace A2 = power_ideal(*A, 2);
  P.lift_basis = complement_basis(*A, A2);
  P.dim = (int)P.lift_basis.size();
  P.entries.assign((size_t)P.dim * P.dim, 0);

  auto scaled = [&](std::uint64_t e) { return scaled_exponent(phi, P.level, e); };

  for (int i = 0; i < P.dim; ++i)
    for (int j = 0; j < P.dim; ++j)
      P.entries[(size_t)i * P.dim + j] =
          scaled(pairing_exponent(*A, phi, P.lift_basis[i], P.lift_basis[j]));

  for (int i = 0; i < P.dim; ++i) {
    if (P.at(i, i) != 0)
      throw AlgError(Errc::ValidationError, "pairing is not alternating");
    for (int j = 0; j < P.dim; ++j)
      if ((P.at(i, j) + P.at(j, i)) % P.level != 0)
        throw AlgError(Errc::ValidationError, "pairing is not antisymmetric");
  }

  // Independence of the lifts: full sweep in small codimension, sampled
  // otherwise.
  std::vector<GroupElement> shifts = enumerate_group(*A, A2);
  Lcg rng(1);
  for (int i = 0; i < P.dim; ++i)
    for (int j = 0; j < P.dim; ++j) {
      std::uint64_t want = scaled(pairing_exponent(*A, phi, P.lift_basis[i], P.lift_basis[j]));
      auto probe = [&](const Vec& u, const Vec& w) {
        Vec a = A->add(P.lift_basis[i], u);
        Vec b = A->add(P.lift_basis[j], w);
        if (scaled(pairing_exponent(*A, phi, a, b)) != want)
          throw AlgError(Errc::ValidationError, "pairing depends on the choice of lifts");
      };
      if (P.dim <= 3) {
        for (const GroupElement& u : shifts)
          for (const GroupElement& w : shifts) probe(u.a, w.a);
      } else {
        for (int trial = 0; trial < 8; ++trial)
          probe(shifts[rng.next() % shifts.size()].a, shifts[rng.next() % shifts.size()].a);
      }
    }
  return P;
}

CheckResult verify_balance(const AlgebraRef& A, const LinearCharacter& phi) {
  require_central_domain(A, phi);
  if (!character_invariant(A, phi))
    throw AlgError(Errc::NotInvariant, "central character moves under conjugation");
  if (A->group_size() > (std::uint64_t(1) << 10))
    throw AlgError(Errc::TooLarge, "balance sweep needs |G| within 2^10");

  std::shared_ptr<const BalanceTable> T = balance_table(A);
  const size_t n = T->elems.size();
  std::vector<std::uint64_t> val(T->reps.size());
  for (size_t r = 0; r < T->reps.size(); ++r) val[r] = phi.eval_exponent(T->reps[r]);

  const Field& k = *A->field;
  ordered_json w;
  w["pairs"] = n * n;
  w["scalars"] = k.q();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (std::uint64_t lam = 0; lam < k.q(); ++lam) {
        std::uint64_t lhs = val[T->pair_slot[(size_t)T->scale_perm[lam][i] * n + j]];
        std::uint64_t rhs = val[T->pair_slot[i * n + T->scale_perm[lam][j]]];
        if (lhs != rhs) {
          w["a"] = element_code(*A, T->elems[i]);
          w["b"] = element_code(*A, T->elems[j]);
          w["lambda"] = lam;
          return {"commutator_balance", false, w.dump()};
        }
      }
  return {"commutator_balance", true, w.dump()};
}

Subspace radical_g_phi(const AlgebraRef& A, const LinearCharacter& phi) {
  PairingMatrix P = commutator_pairing(A, phi);
  Subspace A2 = power_ideal(*A, 2);
  if (P.level == 1) return Subspace::full(A->dim);

  const Field& k = *A->field;
  std::vector<Fel> beta = field_basis(k);
  int m = k.m();
  int r = P.dim;
  int N = r * m;
  std::uint64_t scale = P.level / k.p();  // pairing values on p-torsion args

  // Prime-field matrix of the pairing on the basis beta_b v_i.
  FieldRef fp = Field::make(k.p(), 1);
  std::vector<Fel> Kp((size_t)N * N);
  for (int i = 0; i < r; ++i)
    for (int b = 0; b < m; ++b)
      for (int j = 0; j < r; ++j)
        for (int b2 = 0; b2 < m; ++b2) {
          Vec a = A->scale(beta[b], P.lift_basis[i]);
          Vec c = A->scale(beta[b2], P.lift_basis[j]);
          std::uint64_t e = scaled_exponent(phi, P.level, pairing_exponent(*A, phi, a, c));
          if (e % scale != 0)
            throw AlgError(Errc::ValidationError, "pairing value of unexpected order");
          Kp[(size_t)(i * m + b) * N + (j * m + b2)] = (Fel)(e / scale % k.p());
        }

  std::vector<Vec> kvecs = linalg::kernel(*fp, Kp, N, N);
  std::vector<Vec> rows;
  for (int rr = 0; rr < A2.rank(); ++rr) {
    Vec c(A2.rank(), 0);
    c[rr] = 1;
    rows.push_back(A2.lift(k, c));
  }
  for (const Vec& d : kvecs) {
    Vec x = A->zero();
    for (int i = 0; i < r; ++i)
      for (int b = 0; b < m; ++b)
        if (d[(size_t)i * m + b] != 0)
          x = A->add(x, A->scale(k.mul((Fel)d[(size_t)i * m + b], beta[b]), P.lift_basis[i]));
    rows.push_back(x);
  }
  Subspace U = Subspace::span(k, A->dim, rows);

  // The kernel must already be scalar-closed: its k-span adds nothing.
  if ((size_t)(U.rank() - A2.rank()) * m != kvecs.size()) {
    ordered_json w;
    w["kernel_fp_dim"] = kvecs.size();
    w["span_rank"] = U.rank();
    w["square_rank"] = A2.rank();
    throw AlgError(Errc::RadicalNotSubspace, "pairing kernel is not a scalar-closed subspace",
                   w.dump());
  }
  // Direct verification against the definition, on group generators.
  for (int rr = 0; rr < U.rank(); ++rr) {
    Vec c(U.rank(), 0);
    c[rr] = 1;
    Vec u = U.lift(k, c);
    for (int j = 0; j < A->dim; ++j)
      for (int b = 0; b < m; ++b) {
        Vec h = A->zero();
        h[j] = beta[b];
        if (pairing_exponent(*A, phi, u, h) != 0) {
          ordered_json w;
          w["row"] = rr;
          w["direction"] = j;
          throw AlgError(Errc::RadicalNotSubspace, "kernel element pairs nontrivially", w.dump());
        }
      }
  }
  if (!is_subalgebra(*A, U)) {
    ordered_json w;
    w["rank"] = U.rank();
    throw AlgError(Errc::RadicalNotSubspace, "radical is not multiplicatively closed", w.dump());
  }
  return U;
}

namespace {

bool pairs_trivially_with(const AlgebraRef& A, const LinearCharacter& phi, const Vec& a,
                          const Subspace& L) {
  const Field& k = *A->field;
  std::vector<Fel> beta = field_basis(k);
  for (int rr = 0; rr < L.rank(); ++rr) {
    Vec c(L.rank(), 0);
    c[rr] = 1;
    Vec u = L.lift(k, c);
    for (Fel b : beta)
      if (pairing_exponent(*A, phi, a, A->scale(b, u)) != 0) return false;
  }
  return true;
}

}  // namespace

Subspace maximal_isotropic(const AlgebraRef& A, const LinearCharacter& phi, std::uint64_t seed) {
  Subspace L = radical_g_phi(A, phi);
  const Field& k = *A->field;

  std::vector<GroupElement> pool = enumerate_group(*A);
  if (seed != 0) {
    Lcg rng(seed);
    for (size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[rng.next() % i]);
  }

  bool grew = true;
  while (grew && L.rank() < A->dim) {
    grew = false;
    for (const GroupElement& cand : pool) {
      if (A->is_zero(cand.a)) continue;
      if (L.contains(k, cand.a)) continue;
      if (!pairs_trivially_with(A, phi, cand.a, L)) continue;
      std::vector<Vec> rows = {cand.a};
      for (int rr = 0; rr < L.rank(); ++rr) {
        Vec c(L.rank(), 0);
        c[rr] = 1;
        rows.push_back(L.lift(k, c));
      }
      Subspace L2 = Subspace::span(k, A->dim, rows);
      // the k-span must stay isotropic; this is the balance identity at work
      std::vector<Fel> beta = field_basis(k);
      for (int r1 = 0; r1 < L2.rank(); ++r1) {
        Vec c1(L2.rank(), 0);
        c1[r1] = 1;
        Vec u1 = L2.lift(k, c1);
        for (Fel b : beta)
          if (!pairs_trivially_with(A, phi, A->scale(b, u1), L2)) {
            ordered_json w;
            w["adjoined"] = element_code(*A, cand);
            w["rank"] = L2.rank();
            throw AlgError(Errc::IsotropicExtensionFailed,
                           "scalar span of an isotropic extension is not isotropic", w.dump());
          }
      }
      L = L2;
      grew = true;
      break;
    }
  }

  if (!is_subalgebra(*A, L)) {
    ordered_json w;
    w["rank"] = L.rank();
    throw AlgError(Errc::IsotropicExtensionFailed,
                   "isotropic lift is not multiplicatively closed", w.dump());
  }
  return L;
}

bool sh_datum_eq(const SHDatum& a, const SHDatum& b) {
  return a.phi.exponents == b.phi.exponents && a.g_phi == b.g_phi &&
         a.chi.exponents == b.chi.exponents;
}

std::vector<SHDatum> sh_classify(const AlgebraRef& A) {
  if (A->group_size() > kClassFunctionBound)
    throw AlgError(Errc::TooLarge, "group too large for classification");
  std::vector<SHDatum> out;
  for (const LinearCharacter& phi : invariant_central_characters(A)) {
    Subspace U = radical_g_phi(A, phi);
    AbelianQuotientRef Q = abelianize(A, U);
    bool found = false;
    for (LinearCharacter& chi : character_group(Q)) {
      if (!restriction_agrees(chi, phi)) continue;
      found = true;
      out.push_back(SHDatum{A, phi, U, std::move(chi)});
    }
    if (!found) {
      ordered_json w;
      w["phi"] = phi.exponents;
      throw AlgError(Errc::NoExtension, "central character admits no extension to its radical",
                     w.dump());
    }
  }
  return out;
}

std::vector<LinearCharacter> sh_extensions(const SHDatum& d, const Subspace& ltilde) {
  AbelianQuotientRef QL = abelianize(d.alg, ltilde);
  std::vector<LinearCharacter> out;
  for (LinearCharacter& psi : character_group(QL))
    if (restriction_agrees(psi, d.chi)) out.push_back(std::move(psi));
  return out;
}

ClassFunction sh_character(const SHDatum& d, std::uint64_t seed) {
  const AlgebraRef& A = d.alg;
  Subspace ltilde = maximal_isotropic(A, d.phi, seed);
  std::vector<LinearCharacter> exts = sh_extensions(d, ltilde);
  if (exts.empty()) {
    ordered_json w;
    w["chi"] = d.chi.exponents;
    w["isotropic_rank"] = ltilde.rank();
    throw AlgError(Errc::NoExtension, "no linear extension to the isotropic subgroup", w.dump());
  }
  const LinearCharacter& psi = exts.front();
  ClassFunction f =
      class_function_of_character(A, ltilde, psi, psi.domain->exponent());
  ClassFunction ind = induce(f, Subspace::full(A->dim));

  if (!is_irreducible(ind))
    throw AlgError(Errc::ValidationError, "induced isotropic character is not irreducible");
  long long deg = ind.degree().integer_value();
  std::uint64_t expect = 1;
  for (int i = 0; i < A->dim - ltilde.rank(); ++i) expect *= A->field->q();
  std::uint64_t index_sq =
      Subspace::full(A->dim).size(*A->field) / d.g_phi.size(*A->field);
  if ((std::uint64_t)deg != expect || (std::uint64_t)deg * deg != index_sq)
    throw AlgError(Errc::ValidationError, "strongly Heisenberg degree count failed");
  return ind;
}

LinearCharacter norm_pullback(const AlgebraRef& A, const Subspace& U,
                              const LinearCharacter& chi, int n) {
  if (!chi.domain || !(chi.domain->space == U))
    throw AlgError(Errc::GroupMismatch, "character does not live on the given subgroup");
  AlgebraRef Aext = extend_scalars(A, n);
  const Field& k2 = *Aext->field;
  Embedding emb(A->field, Aext->field);

  if (U.rank() == 0) {  // trivial subgroup, trivial composite
    auto Qext = abelianize(Aext, Subspace::span(k2, Aext->dim, {}));
    return {Qext, std::vector<std::uint64_t>(Qext->orders.size(), 0)};
  }

  std::vector<Vec> urows;
  for (int r = 0; r < U.rank(); ++r) {
    Vec c(U.rank(), 0);
    c[r] = 1;
    Vec row = U.lift(*A->field, c);
    for (Fel& x : row) x = emb(x);
    urows.push_back(std::move(row));
  }
  Subspace Uext = Subspace::span(k2, A->dim, urows);
  AbelianQuotientRef Qext = abelianize(Aext, Uext);
  if (n == 1) return {Qext, chi.exponents};

  SubAlgebra sub = subalgebra(A, U);
  ExtensionContext sctx = make_extension(sub.alg, n);
  AbelianQuotientRef sdst = abelianize(sub.alg, Subspace::full(sub.alg->dim));

  std::uint64_t E = chi.domain->exponent();
  std::vector<std::uint64_t> exps;
  for (size_t i = 0; i < Qext->generators.size(); ++i) {
    const GroupElement& h = Qext->generators[i];
    GroupElement hs{Uext.coords(k2, h.a)};
    std::vector<std::uint64_t> t = norm_of_element(sctx, sdst, hs);
    GroupElement rep = g_identity(*sub.alg);
    for (size_t j = 0; j < t.size(); ++j)
      rep = g_mul(*sub.alg, rep, g_pow(*sub.alg, sdst->generators[j], (long long)t[j]));
    GroupElement up{U.lift(*A->field, rep.a)};
    std::uint64_t b = chi.eval_exponent(up) % E;
    std::uint64_t o = Qext->orders[i];
    std::uint64_t num = b * o;
    if (num % E != 0)
      throw AlgError(Errc::ValidationError, "norm composite has too large an order");
    exps.push_back(num / E % o);
  }
  return {Qext, exps};
}

SHDatum sh_base_change(const SHDatum& d, int n) {
  if (n < 1) throw AlgError(Errc::BadParameter, "extension degree must be positive");
  if (n == 1) return d;
  const AlgebraRef& A = d.alg;
  AlgebraRef Aext = extend_scalars(A, n);
  if (Aext->group_size() > kClassFunctionBound)
    throw AlgError(Errc::TooLarge, "extended group too large for classification");

  Subspace A2 = power_ideal(*A, 2);
  LinearCharacter phi2 = norm_pullback(A, A2, d.phi, n);
  if (!(phi2.domain->space == power_ideal(*Aext, 2)))
    throw AlgError(Errc::ValidationError, "scalar extension of the square disagrees");

  Subspace fresh = radical_g_phi(Aext, phi2);
  LinearCharacter chi2 = norm_pullback(A, d.g_phi, d.chi, n);
  if (!(chi2.domain->space == fresh)) {
    ordered_json w;
    w["fresh_rank"] = fresh.rank();
    w["extended_rank"] = chi2.domain->space.rank();
    throw AlgError(Errc::RadicalMismatch,
                   "radical of the extended character differs from the extended radical",
                   w.dump());
  }

  std::uint32_t q0 = A->field->q();
  for (const GroupElement& h : phi2.domain->generators) {
    GroupElement fh{frobenius_on_vec(*Aext, h.a, q0)};
    if (phi2.eval_exponent(fh) != phi2.eval_exponent(h))
      throw AlgError(Errc::NotGaloisInvariant, "extended central character moves under Frobenius");
  }
  for (const GroupElement& h : chi2.domain->generators) {
    GroupElement fh{frobenius_on_vec(*Aext, h.a, q0)};
    if (chi2.eval_exponent(fh) != chi2.eval_exponent(h))
      throw AlgError(Errc::NotGaloisInvariant, "extended radical character moves under Frobenius");
  }
  return SHDatum{Aext, phi2, fresh, chi2};
}

}  // namespace algroups
