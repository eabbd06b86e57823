#include "algroups/cyclo.hpp"

#include <algorithm>
#include <sstream>

#include "algroups/error.hpp"

namespace algroups {

namespace {

// smallest prime factor if E is a prime power, else 0
std::uint64_t prime_power_base(std::uint64_t E) {
  if (E < 2) return 0;
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= E; ++d)
    if (E % d == 0) {
      p = d;
      break;
    }
  if (p == 0) return E;  // E itself prime
  std::uint64_t t = E;
  while (t % p == 0) t /= p;
  return t == 1 ? p : 0;
}

// fold an exponent-indexed accumulator of length E down to the power basis
CyclotomicInteger reduce_full(std::uint64_t E, std::vector<long long> acc) {
  if (E == 1) {
    CyclotomicInteger r;
    r.level = 1;
    r.coeffs = {acc[0]};
    return r;
  }
  std::uint64_t p = prime_power_base(E);
  std::uint64_t t = E / p;             // p^{e-1}
  std::uint64_t ph = t * (p - 1);      // phi(E)
  for (std::uint64_t j = E - 1; j >= ph; --j) {
    long long c = acc[j];
    if (c == 0) continue;
    acc[j] = 0;
    std::uint64_t s = j - ph;  // in [0, t)
    for (std::uint64_t i = 0; i + 2 <= p; ++i) acc[s + i * t] -= c;
  }
  CyclotomicInteger r;
  r.level = E;
  r.coeffs.assign(acc.begin(), acc.begin() + ph);
  return r;
}

void check_level(std::uint64_t E) {
  if (E != 1 && prime_power_base(E) == 0)
    throw AlgError(Errc::BadParameter, "cyclotomic level must be a prime power");
}

}  // namespace

std::uint64_t cyclo_phi(std::uint64_t E) {
  check_level(E);
  if (E == 1) return 1;
  std::uint64_t p = prime_power_base(E);
  return E / p * (p - 1);
}

std::uint64_t cyclo_common_level(std::uint64_t a, std::uint64_t b) {
  check_level(a);
  check_level(b);
  if (a % b == 0) return a;
  if (b % a == 0) return b;
  std::ostringstream os;
  os << "{\"levels\":[" << a << "," << b << "]}";
  throw AlgError(Errc::LevelMismatch, "incompatible cyclotomic levels", os.str());
}

CyclotomicInteger CyclotomicInteger::zero(std::uint64_t E) {
  check_level(E);
  CyclotomicInteger r;
  r.level = E;
  r.coeffs.assign(cyclo_phi(E), 0);
  return r;
}

CyclotomicInteger CyclotomicInteger::integer(std::uint64_t E, long long n) {
  CyclotomicInteger r = zero(E);
  r.coeffs[0] = n;
  return r;
}

CyclotomicInteger CyclotomicInteger::zeta_pow(std::uint64_t E, std::uint64_t k) {
  check_level(E);
  std::vector<long long> acc(E, 0);
  acc[k % E] = 1;
  return reduce_full(E, std::move(acc));
}

bool CyclotomicInteger::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](long long c) { return c == 0; });
}

bool CyclotomicInteger::is_integer() const {
  for (size_t i = 1; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) return false;
  return true;
}

long long CyclotomicInteger::integer_value() const {
  if (!is_integer())
    throw AlgError(Errc::NotAnInteger, "cyclotomic value has nonconstant coordinates");
  return coeffs[0];
}

CyclotomicInteger CyclotomicInteger::conj() const {
  std::vector<long long> acc(level, 0);
  for (size_t j = 0; j < coeffs.size(); ++j)
    if (coeffs[j] != 0) acc[(level - j) % level] += coeffs[j];
  return reduce_full(level, std::move(acc));
}

CyclotomicInteger CyclotomicInteger::scaled(long long n) const {
  CyclotomicInteger r = *this;
  for (auto& c : r.coeffs) c *= n;
  return r;
}

CyclotomicInteger CyclotomicInteger::raised(std::uint64_t E) const {
  check_level(E);
  if (E == level) return *this;
  if (E % level != 0) {
    std::ostringstream os;
    os << "{\"from\":" << level << ",\"to\":" << E << "}";
    throw AlgError(Errc::LevelMismatch, "cannot lower a cyclotomic level", os.str());
  }
  std::uint64_t step = E / level;
  std::vector<long long> acc(E, 0);
  for (size_t j = 0; j < coeffs.size(); ++j) acc[j * step] += coeffs[j];
  return reduce_full(E, std::move(acc));
}

CyclotomicInteger cyclo_add(const CyclotomicInteger& a, const CyclotomicInteger& b) {
  std::uint64_t E = cyclo_common_level(a.level, b.level);
  CyclotomicInteger x = a.raised(E), y = b.raised(E);
  for (size_t i = 0; i < x.coeffs.size(); ++i) x.coeffs[i] += y.coeffs[i];
  return x;
}

CyclotomicInteger cyclo_sub(const CyclotomicInteger& a, const CyclotomicInteger& b) {
  return cyclo_add(a, b.scaled(-1));
}

CyclotomicInteger cyclo_mul(const CyclotomicInteger& a, const CyclotomicInteger& b) {
  std::uint64_t E = cyclo_common_level(a.level, b.level);
  CyclotomicInteger x = a.raised(E), y = b.raised(E);
  std::vector<long long> acc(E, 0);
  for (size_t i = 0; i < x.coeffs.size(); ++i) {
    if (x.coeffs[i] == 0) continue;
    for (size_t j = 0; j < y.coeffs.size(); ++j)
      if (y.coeffs[j] != 0) acc[(i + j) % E] += x.coeffs[i] * y.coeffs[j];
  }
  return reduce_full(E, std::move(acc));
}

CyclotomicInteger character_value(const LinearCharacter& chi, const GroupElement& g,
                                  std::uint64_t level) {
  std::uint64_t E0 = chi.domain->exponent();
  if (level % E0 != 0) {
    std::ostringstream os;
    os << "{\"level\":" << level << ",\"needed\":" << E0 << "}";
    throw AlgError(Errc::LevelTooSmall, "level does not contain the character values", os.str());
  }
  return CyclotomicInteger::zeta_pow(level, chi.eval_exponent(g) * (level / E0));
}

ClassFunction ClassFunction::zero(AlgebraRef A, const Subspace& U, std::uint64_t level) {
  check_level(level);
  std::uint64_t n = 1;
  for (int i = 0; i < U.rank(); ++i) {
    n *= (std::uint64_t)A->field->q();
    if (n > kClassFunctionBound)
      throw AlgError(Errc::TooLarge, "group exceeds the class function bound");
  }
  ClassFunction f;
  f.alg = A;
  f.space = U;
  f.level = level;
  f.classes = conjugacy_classes(*A, U);
  f.values.assign(f.classes.size(), CyclotomicInteger::zero(level));
  // orbit walk per class, sharing the subgroup generators
  auto gens = generating_set(*A, U);
  for (size_t ci = 0; ci < f.classes.size(); ++ci) {
    std::vector<GroupElement> orbit{f.classes[ci].first};
    f.class_of[element_code(*A, orbit[0])] = (int)ci;
    for (size_t head = 0; head < orbit.size(); ++head) {
      GroupElement cur = orbit[head];
      for (const auto& h : gens) {
        GroupElement c = g_conjugate(*A, cur, h);
        auto [it, fresh] = f.class_of.insert({element_code(*A, c), (int)ci});
        if (fresh) orbit.push_back(std::move(c));
      }
    }
  }
  return f;
}

const CyclotomicInteger& ClassFunction::value_at(const GroupElement& g) const {
  auto it = class_of.find(element_code(*alg, g));
  if (it == class_of.end())
    throw AlgError(Errc::GroupMismatch, "element is outside the class function's group");
  return values[it->second];
}

ClassFunction ClassFunction::raised(std::uint64_t E) const {
  ClassFunction f = *this;
  f.level = cyclo_common_level(level, E);
  for (auto& v : f.values) v = v.raised(f.level);
  return f;
}

ClassFunction class_function_of_character(AlgebraRef A, const Subspace& U,
                                          const LinearCharacter& chi, std::uint64_t level) {
  if (!(chi.domain->space == U))
    throw AlgError(Errc::GroupMismatch, "character does not live on the given subgroup");
  ClassFunction f = ClassFunction::zero(A, U, level);
  for (size_t i = 0; i < f.classes.size(); ++i)
    f.values[i] = character_value(chi, f.classes[i].first, level);
  return f;
}

ClassFunction trivial_character(AlgebraRef A, const Subspace& U, std::uint64_t level) {
  ClassFunction f = ClassFunction::zero(A, U, level);
  for (auto& v : f.values) v = CyclotomicInteger::integer(level, 1);
  return f;
}

namespace {

void check_same_group(const ClassFunction& f, const ClassFunction& g) {
  if (!(f.space == g.space) || f.alg->fingerprint() != g.alg->fingerprint())
    throw AlgError(Errc::GroupMismatch, "class functions live on different groups");
}

}  // namespace

ClassFunction cf_add(const ClassFunction& f, const ClassFunction& g) {
  check_same_group(f, g);
  std::uint64_t E = cyclo_common_level(f.level, g.level);
  ClassFunction r = f.raised(E);
  for (size_t i = 0; i < r.values.size(); ++i)
    r.values[i] = cyclo_add(r.values[i], g.values[i].raised(E));
  return r;
}

ClassFunction cf_sub(const ClassFunction& f, const ClassFunction& g) {
  check_same_group(f, g);
  std::uint64_t E = cyclo_common_level(f.level, g.level);
  ClassFunction r = f.raised(E);
  for (size_t i = 0; i < r.values.size(); ++i)
    r.values[i] = cyclo_sub(r.values[i], g.values[i].raised(E));
  return r;
}

ClassFunction cf_mul(const ClassFunction& f, const ClassFunction& g) {
  check_same_group(f, g);
  std::uint64_t E = cyclo_common_level(f.level, g.level);
  ClassFunction r = f.raised(E);
  for (size_t i = 0; i < r.values.size(); ++i)
    r.values[i] = cyclo_mul(r.values[i], g.values[i].raised(E));
  return r;
}

ClassFunction cf_conj(const ClassFunction& f) {
  ClassFunction r = f;
  for (auto& v : r.values) v = v.conj();
  return r;
}

ClassFunction induce(const ClassFunction& f, const Subspace& W) {
  const Algebra& A = *f.alg;
  const Field& k = *A.field;
  if (!f.space.subset_of(k, W) || !is_subalgebra(A, W))
    throw AlgError(Errc::NotSubgroup, "induction target does not contain the source group");
  ClassFunction r = ClassFunction::zero(f.alg, W, f.level);
  // left transversal of 1+U in 1+W
  auto big = enumerate_group(A, W);
  auto small = enumerate_group(A, f.space);
  std::unordered_set<std::uint64_t> covered;
  std::vector<GroupElement> transversal;
  for (const auto& x : big) {
    if (covered.count(element_code(A, x))) continue;
    transversal.push_back(x);
    for (const auto& u : small) covered.insert(element_code(A, g_mul(A, x, u)));
  }
  for (size_t ci = 0; ci < r.classes.size(); ++ci) {
    CyclotomicInteger acc = CyclotomicInteger::zero(f.level);
    for (const auto& x : transversal) {
      GroupElement c = g_mul(A, g_mul(A, g_inv(A, x), r.classes[ci].first), x);
      if (f.space.contains(k, c.a)) acc = cyclo_add(acc, f.value_at(c));
    }
    r.values[ci] = std::move(acc);
  }
  return r;
}

ClassFunction restrict_to(const ClassFunction& f, const Subspace& V) {
  const Algebra& A = *f.alg;
  if (!V.subset_of(*A.field, f.space) || !is_subalgebra(A, V))
    throw AlgError(Errc::NotSubgroup, "restriction target is not a subgroup of the domain");
  ClassFunction r = ClassFunction::zero(f.alg, V, f.level);
  for (size_t i = 0; i < r.classes.size(); ++i) r.values[i] = f.value_at(r.classes[i].first);
  return r;
}

long long inner_product(const ClassFunction& f1, const ClassFunction& f2) {
  check_same_group(f1, f2);
  std::uint64_t E = cyclo_common_level(f1.level, f2.level);
  CyclotomicInteger acc = CyclotomicInteger::zero(E);
  for (size_t i = 0; i < f1.classes.size(); ++i) {
    CyclotomicInteger term =
        cyclo_mul(f1.values[i].raised(E), f2.values[i].raised(E).conj());
    acc = cyclo_add(acc, term.scaled((long long)f1.classes[i].second));
  }
  std::uint64_t order = f1.space.size(*f1.alg->field);
  if (!acc.is_integer() || acc.coeffs[0] % (long long)order != 0) {
    std::ostringstream os;
    os << "{\"level\":" << acc.level << ",\"coeffs\":[";
    for (size_t i = 0; i < acc.coeffs.size(); ++i)
      os << (i ? "," : "") << acc.coeffs[i];
    os << "],\"group_order\":" << order << "}";
    throw AlgError(Errc::NotAnInteger, "class sum is not an integral multiple of the group order",
                   os.str());
  }
  return acc.coeffs[0] / (long long)order;
}

bool is_irreducible(const ClassFunction& f) { return inner_product(f, f) == 1; }

}  // namespace algroups
