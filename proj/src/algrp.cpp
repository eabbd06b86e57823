#include "algroups/algrp.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "algroups/error.hpp"

namespace algroups {

namespace {

std::uint64_t checked_size(const Algebra& A, const Subspace& U, std::uint64_t bound) {
  std::uint64_t n = 1;
  for (int i = 0; i < U.rank(); ++i) {
    n *= (std::uint64_t)A.field->q();
    if (n > bound) {
      std::ostringstream os;
      os << "{\"rank\":" << U.rank() << ",\"q\":" << A.field->q() << "}";
      throw AlgError(Errc::TooLarge, "group exceeds the enumeration bound", os.str());
    }
  }
  return n;
}

}  // namespace

GroupElement g_identity(const Algebra& A) { return {Vec(A.dim, 0)}; }

GroupElement g_mul(const Algebra& A, const GroupElement& g, const GroupElement& h) {
  return {A.add(A.add(g.a, h.a), A.mul(g.a, h.a))};
}

GroupElement g_inv(const Algebra& A, const GroupElement& g) {
  // 1 + b with b the alternating geometric series in a
  Vec na = A.neg(g.a);
  Vec b = na, term = na;
  for (;;) {
    term = A.mul(term, na);
    if (A.is_zero(term)) break;
    b = A.add(b, term);
  }
  return {std::move(b)};
}

GroupElement g_pow(const Algebra& A, const GroupElement& g, long long e) {
  GroupElement base = g;
  if (e < 0) {
    base = g_inv(A, g);
    e = -e;
  }
  GroupElement acc = g_identity(A);
  while (e > 0) {
    if (e & 1) acc = g_mul(A, acc, base);
    base = g_mul(A, base, base);
    e >>= 1;
  }
  return acc;
}

GroupElement g_commutator(const Algebra& A, const GroupElement& g, const GroupElement& h) {
  return g_mul(A, g_mul(A, g, h), g_mul(A, g_inv(A, g), g_inv(A, h)));
}

GroupElement g_conjugate(const Algebra& A, const GroupElement& g, const GroupElement& h) {
  return g_mul(A, g_mul(A, h, g), g_inv(A, h));
}

std::uint64_t element_order(const Algebra& A, const GroupElement& g) {
  const GroupElement id = g_identity(A);
  GroupElement h = g;
  std::uint64_t n = 1;
  while (!(h == id)) {
    h = g_pow(A, h, A.field->p());
    n *= (std::uint64_t)A.field->p();
  }
  return n;
}

std::uint64_t element_code(const Algebra& A, const GroupElement& g) {
  std::uint64_t code = 0;
  for (int i = A.dim - 1; i >= 0; --i) code = code * A.field->q() + g.a[i];
  return code;
}

GroupElement element_from_code(const Algebra& A, std::uint64_t code) {
  Vec a(A.dim);
  for (int i = 0; i < A.dim; ++i) {
    a[i] = (Fel)(code % A.field->q());
    code /= A.field->q();
  }
  return {std::move(a)};
}

std::vector<GroupElement> enumerate_group(const Algebra& A, const Subspace& U) {
  const Field& k = *A.field;
  std::uint64_t total = checked_size(A, U, kEnumerationBound);
  std::vector<std::pair<std::uint64_t, GroupElement>> tagged;
  tagged.reserve(total);
  for (std::uint64_t t = 0; t < total; ++t) {
    Vec c(U.rank());
    std::uint64_t x = t;
    for (int i = 0; i < U.rank(); ++i) {
      c[i] = (Fel)(x % k.q());
      x /= k.q();
    }
    GroupElement g{U.lift(k, c)};
    tagged.push_back({element_code(A, g), std::move(g)});
  }
  std::sort(tagged.begin(), tagged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<GroupElement> out;
  out.reserve(total);
  for (auto& [c, g] : tagged) out.push_back(std::move(g));
  return out;
}

std::vector<GroupElement> enumerate_group(const Algebra& A) {
  return enumerate_group(A, Subspace::full(A.dim));
}

std::vector<GroupElement> subgroup_closure(const Algebra& A, const std::vector<GroupElement>& gens,
                                           std::uint64_t bound) {
  std::unordered_set<std::uint64_t> seen;
  std::vector<GroupElement> elems;
  elems.push_back(g_identity(A));
  seen.insert(element_code(A, elems[0]));
  for (size_t head = 0; head < elems.size(); ++head) {
    GroupElement cur = elems[head];  // copy: elems may reallocate
    for (const auto& g : gens) {
      GroupElement next = g_mul(A, cur, g);
      if (seen.insert(element_code(A, next)).second) {
        elems.push_back(std::move(next));
        if (elems.size() > bound)
          throw AlgError(Errc::TooLarge, "subgroup closure exceeds the enumeration bound");
      }
    }
  }
  std::sort(elems.begin(), elems.end(), [&](const GroupElement& a, const GroupElement& b) {
    return element_code(A, a) < element_code(A, b);
  });
  return elems;
}

std::vector<GroupElement> generating_set(const Algebra& A, const Subspace& U) {
  const Field& k = *A.field;
  if (!is_subalgebra(A, U))
    throw AlgError(Errc::BadParameter, "subspace is not multiplicatively closed");
  std::uint64_t target = checked_size(A, U, kEnumerationBound);
  std::vector<GroupElement> gens;
  std::unordered_set<std::uint64_t> gen_codes;
  Fel t = k.m() > 1 ? (Fel)k.p() : (Fel)1;  // spans k over the prime field via powers
  for (int i = 0; i < U.rank(); ++i)
    for (int j = 0; j < k.m(); ++j) {
      GroupElement g{A.scale(k.pow(t, j), U.row(i))};
      if (gen_codes.insert(element_code(A, g)).second) gens.push_back(std::move(g));
    }
  auto closure = subgroup_closure(A, gens);
  while (closure.size() < target) {
    // deterministic fallback: adjoin the first missing element
    std::unordered_set<std::uint64_t> have;
    for (const auto& g : closure) have.insert(element_code(A, g));
    for (const auto& g : enumerate_group(A, U))
      if (!have.count(element_code(A, g))) {
        gens.push_back(g);
        break;
      }
    closure = subgroup_closure(A, gens);
  }
  return gens;
}

std::vector<GroupElement> commutator_subgroup(const Algebra& A, const Subspace& U,
                                              const Subspace& W) {
  std::vector<GroupElement> gt = generating_set(A, U), gw = generating_set(A, W);
  std::vector<GroupElement> conj_gens = gt;
  {
    std::unordered_set<std::uint64_t> codes;
    for (const auto& g : conj_gens) codes.insert(element_code(A, g));
    for (const auto& g : gw)
      if (codes.insert(element_code(A, g)).second) conj_gens.push_back(g);
  }
  std::vector<GroupElement> seeds;
  for (const auto& t : gt)
    for (const auto& s : gw) seeds.push_back(g_commutator(A, t, s));
  auto H = subgroup_closure(A, seeds);
  for (;;) {
    std::unordered_set<std::uint64_t> codes;
    for (const auto& h : H) codes.insert(element_code(A, h));
    std::vector<GroupElement> fresh;
    for (const auto& h : H)
      for (const auto& g : conj_gens) {
        GroupElement c = g_conjugate(A, h, g);
        if (!codes.count(element_code(A, c))) fresh.push_back(c);
      }
    if (fresh.empty()) break;
    std::vector<GroupElement> next_gens = H;
    next_gens.insert(next_gens.end(), fresh.begin(), fresh.end());
    H = subgroup_closure(A, next_gens);
  }
  return H;
}

std::uint64_t AbelianQuotient::size() const {
  std::uint64_t n = 1;
  for (auto o : orders) n *= o;
  return n;
}

std::uint64_t AbelianQuotient::exponent() const {
  std::uint64_t e = 1;
  for (auto o : orders) e = std::lcm(e, o);
  return e;
}

std::vector<std::uint64_t> AbelianQuotient::log(const GroupElement& g) const {
  const Algebra& A = *alg;
  if (!space.contains(*A.field, g.a))
    throw AlgError(Errc::GroupMismatch, "element is outside the abelianized group");
  std::vector<std::uint64_t> e(orders.size(), 0);
  GroupElement cur = g;
  for (int j = (int)orders.size() - 1; j >= 0; --j) {
    GroupElement ginv = g_inv(A, generators[j]);
    GroupElement probe = cur;
    std::uint64_t found = orders[j];
    for (std::uint64_t c = 0; c < orders[j]; ++c) {
      if (levels[j].count(element_code(A, probe))) {
        found = c;
        break;
      }
      probe = g_mul(A, probe, ginv);
    }
    if (found == orders[j])
      throw AlgError(Errc::ValidationError, "log peeling failed to land in the level subgroup");
    e[j] = found;
    cur = g_mul(A, cur, g_pow(A, generators[j], -(long long)found));
  }
  if (!levels.empty() && !levels[0].count(element_code(A, cur)))
    throw AlgError(Errc::ValidationError, "log residue escaped the derived subgroup");
  return e;
}

static AbelianQuotientRef abelianize_fresh(const AlgebraRef& Aref, const Subspace& U) {
  const Algebra& A = *Aref;
  const Field& k = *A.field;
  checked_size(A, U, kEnumerationBound);
  auto gens = generating_set(A, U);
  auto D = commutator_subgroup(A, U, U);

  auto out = std::make_shared<AbelianQuotient>();
  out->alg = Aref;
  out->space = U;
  out->derived = D;

  // current subgroup S = <g_1..g_j> D, kept as both list and code set
  std::vector<GroupElement> S_elems = D;
  std::unordered_set<std::uint64_t> S_codes;
  for (const auto& d : D) S_codes.insert(element_code(A, d));

  auto canon = [&](const GroupElement& x) {
    std::uint64_t best = ~std::uint64_t(0);
    for (const auto& s : S_elems) best = std::min(best, element_code(A, g_mul(A, x, s)));
    return element_from_code(A, best);
  };

  // canonical coset representatives of T modulo S, found by walking the
  // quotient with the group generators rather than scanning all of T
  auto build_reps = [&]() {
    std::unordered_set<std::uint64_t> seen;
    std::vector<GroupElement> reps;
    GroupElement r0 = canon(g_identity(A));
    seen.insert(element_code(A, r0));
    reps.push_back(std::move(r0));
    for (size_t head = 0; head < reps.size(); ++head) {
      GroupElement cur = reps[head];
      for (const auto& g : gens) {
        GroupElement next = canon(g_mul(A, cur, g));
        if (seen.insert(element_code(A, next)).second) reps.push_back(std::move(next));
      }
    }
    std::sort(reps.begin(), reps.end(), [&](const GroupElement& a, const GroupElement& b) {
      return element_code(A, a) < element_code(A, b);
    });
    return reps;
  };

  auto reps = build_reps();
  while (reps.size() > 1) {
    // order of a coset: first p-power pushing the element into S
    auto coset_order = [&](const GroupElement& h) {
      GroupElement cur = h;
      std::uint64_t n = 1;
      while (!S_codes.count(element_code(A, cur))) {
        cur = g_pow(A, cur, k.p());
        n *= (std::uint64_t)k.p();
      }
      return n;
    };
    std::uint64_t best_ord = 0;
    GroupElement pick = reps[0];
    for (const auto& h : reps) {
      std::uint64_t o = coset_order(h);
      if (o > best_ord) {
        best_ord = o;
        pick = h;
      }
    }
    out->levels.push_back(S_codes);
    out->generators.push_back(pick);
    out->orders.push_back(best_ord);
    // grow S by the powers of the new generator
    std::vector<GroupElement> grown;
    GroupElement pw = g_identity(A);
    for (std::uint64_t e = 0; e < best_ord; ++e) {
      for (const auto& s : S_elems) {
        GroupElement x = g_mul(A, pw, s);
        if (S_codes.insert(element_code(A, x)).second) grown.push_back(std::move(x));
      }
      pw = g_mul(A, pw, pick);
    }
    S_elems.insert(S_elems.end(), grown.begin(), grown.end());
    std::vector<GroupElement> next_reps;
    next_reps.reserve(reps.size() / best_ord + 1);
    {
      std::unordered_set<std::uint64_t> seen;
      for (const auto& h : reps) {
        GroupElement c = canon(h);
        if (seen.insert(element_code(A, c)).second) next_reps.push_back(std::move(c));
      }
    }
    std::sort(next_reps.begin(), next_reps.end(),
              [&](const GroupElement& a, const GroupElement& b) {
                return element_code(A, a) < element_code(A, b);
              });
    reps = std::move(next_reps);
  }

  // straighten the generators so the powers g_j^{n_j} fall into deeper
  // levels, making the exponent map a direct-sum isomorphism
  const int r = (int)out->orders.size();
  for (int j = 1; j < r; ++j) {
    for (int i = j - 1; i >= 0; --i) {
      GroupElement pw = g_pow(A, out->generators[j], (long long)out->orders[j]);
      GroupElement gi_inv = g_inv(A, out->generators[i]);
      std::uint64_t c = out->orders[i];
      GroupElement probe = pw;
      for (std::uint64_t e = 0; e < out->orders[i]; ++e) {
        if (out->levels[i].count(element_code(A, probe))) {
          c = e;
          break;
        }
        probe = g_mul(A, probe, gi_inv);
      }
      if (c == out->orders[i])
        throw AlgError(Errc::ValidationError, "generator power escaped its level");
      if (c % out->orders[j] != 0)
        throw AlgError(Errc::ValidationError, "generator adjustment is not divisible");
      if (c != 0)
        out->generators[j] = g_mul(
            A, out->generators[j],
            g_pow(A, out->generators[i], -(long long)(c / out->orders[j])));
    }
  }

  std::uint64_t check = 1;
  for (auto o : out->orders) check *= o;
  if (check * (std::uint64_t)D.size() != U.size(k))
    throw AlgError(Errc::ValidationError, "cyclic decomposition does not fill the group");
  return out;
}

// The decomposition costs a full group enumeration, and callers routinely ask
// for the same quotient through freshly built value-equal algebras (scalar
// extension in particular).  Memoize by structural identity; the cache also
// makes value-equal quotients pointer-equal, so character domains compare
// cheaply.  Entry payloads are small next to the enumeration they replace.
AbelianQuotientRef abelianize(const AlgebraRef& Aref, const Subspace& U) {
  std::ostringstream key_os;
  key_os << Aref->fingerprint() << "|";
  for (int r = 0; r < U.rank(); ++r) {
    Vec unit(U.rank(), 0);
    unit[r] = 1;
    for (Fel x : U.lift(*Aref->field, unit)) key_os << x << ",";
    key_os << ";";
  }
  std::string key = key_os.str();

  static std::mutex cache_mutex;
  static std::unordered_map<std::string, AbelianQuotientRef> cache;
  static std::deque<std::string> cache_age;
  constexpr size_t kCacheEntries = 512;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  AbelianQuotientRef out = abelianize_fresh(Aref, U);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto [it, inserted] = cache.emplace(key, out);
  if (inserted) {
    cache_age.push_back(key);
    while (cache_age.size() > kCacheEntries) {
      cache.erase(cache_age.front());
      cache_age.pop_front();
    }
  }
  return it->second;
}

std::vector<std::pair<GroupElement, std::uint64_t>> conjugacy_classes(const Algebra& A) {
  return conjugacy_classes(A, Subspace::full(A.dim));
}

std::vector<std::pair<GroupElement, std::uint64_t>> conjugacy_classes(const Algebra& A,
                                                                      const Subspace& U) {
  auto elems = enumerate_group(A, U);
  auto gens = generating_set(A, U);
  std::unordered_set<std::uint64_t> visited;
  std::vector<std::pair<GroupElement, std::uint64_t>> classes;
  for (const auto& g : elems) {
    if (visited.count(element_code(A, g))) continue;
    std::vector<GroupElement> orbit{g};
    visited.insert(element_code(A, g));
    for (size_t head = 0; head < orbit.size(); ++head) {
      GroupElement cur = orbit[head];
      for (const auto& h : gens) {
        GroupElement c = g_conjugate(A, cur, h);
        if (visited.insert(element_code(A, c)).second) orbit.push_back(std::move(c));
      }
    }
    classes.push_back({g, (std::uint64_t)orbit.size()});
  }
  return classes;
}

std::uint64_t LinearCharacter::eval_exponent(const GroupElement& g) const {
  const std::uint64_t E = domain->exponent();
  auto lg = domain->log(g);
  std::uint64_t acc = 0;
  for (size_t i = 0; i < exponents.size(); ++i)
    acc = (acc + exponents[i] * lg[i] % E * (E / domain->orders[i])) % E;
  return acc;
}

bool LinearCharacter::is_trivial() const {
  return std::all_of(exponents.begin(), exponents.end(), [](std::uint64_t e) { return e == 0; });
}

std::vector<LinearCharacter> character_group(const AbelianQuotientRef& Q) {
  std::uint64_t total = Q->size();
  if (total > kEnumerationBound)
    throw AlgError(Errc::TooLarge, "character group exceeds the enumeration bound");
  std::vector<LinearCharacter> out;
  out.reserve(total);
  for (std::uint64_t t = 0; t < total; ++t) {
    std::vector<std::uint64_t> e(Q->orders.size());
    std::uint64_t x = t;
    for (size_t i = 0; i < Q->orders.size(); ++i) {
      e[i] = x % Q->orders[i];
      x /= Q->orders[i];
    }
    out.push_back({Q, std::move(e)});
  }
  return out;
}

Subspace stabilizer_of_character(const Algebra& A, const Subspace& U,
                                 const LinearCharacter& chi) {
  const Field& k = *A.field;
  if (!(chi.domain->space == U))
    throw AlgError(Errc::GroupMismatch, "character does not live on the given subgroup");
  auto gens_t = generating_set(A, U);
  auto gens_g = generating_set(A, Subspace::full(A.dim));
  for (const auto& t : gens_t)
    for (const auto& h : gens_g)
      if (!U.contains(k, g_conjugate(A, t, h).a))
        throw AlgError(Errc::NotNormal, "conjugation does not preserve the subgroup");

  std::vector<std::uint64_t> base_vals;
  for (const auto& t : gens_t) base_vals.push_back(chi.eval_exponent(t));

  std::vector<Vec> stab_vecs;
  std::uint64_t stab_count = 0;
  for (const auto& h : enumerate_group(A)) {
    bool fixes = true;
    for (size_t i = 0; i < gens_t.size(); ++i)
      if (chi.eval_exponent(g_conjugate(A, gens_t[i], h)) != base_vals[i]) {
        fixes = false;
        break;
      }
    if (fixes) {
      stab_vecs.push_back(h.a);
      ++stab_count;
    }
  }
  Subspace S = Subspace::span(k, A.dim, stab_vecs);
  if (S.size(k) != stab_count || !is_subalgebra(A, S)) {
    std::ostringstream os;
    os << "{\"fixer_size\":" << stab_count << ",\"span_size\":" << S.size(k)
       << ",\"closed\":" << (is_subalgebra(A, S) ? "true" : "false") << "}";
    throw AlgError(Errc::StabilizerNotAlgebraSubgroup,
                   "character fixer is not an algebra subgroup", os.str());
  }
  return S;
}

}  // namespace algroups
