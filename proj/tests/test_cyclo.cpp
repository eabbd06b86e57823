#include <cstdint>
#include <vector>

#include "algroups/cyclo.hpp"
#include "algroups/gf.hpp"
#include "algroups/nilalg.hpp"
#include "doctest.h"

using namespace algroups;

namespace {

// Independent oracle: evaluate at an exact root of unity of order E inside
// F_ell for a prime ell = 1 (mod E), and compare ring operations there.
std::uint64_t modpow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

bool is_prime_small(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

struct ModRoot {
  std::uint64_t ell;
  std::uint64_t w;  // element of exact multiplicative order E
};

ModRoot find_root(std::uint64_t E) {
  for (std::uint64_t m = 1;; ++m) {
    std::uint64_t ell = m * E + 1;
    if (ell < 3 || !is_prime_small(ell)) continue;
    for (std::uint64_t g = 2; g < ell; ++g) {
      std::uint64_t w = modpow(g, (ell - 1) / E, ell);
      // verify the order is exactly E
      bool exact = w != 1 || E == 1;
      for (std::uint64_t d = 1; exact && d < E; ++d)
        if (E % d == 0 && modpow(w, d, ell) == 1) exact = false;
      if (exact) return {ell, w};
    }
  }
}

std::uint64_t eval_mod(const CyclotomicInteger& v, const ModRoot& r) {
  std::uint64_t acc = 0;
  for (size_t j = 0; j < v.coeffs.size(); ++j) {
    long long c = v.coeffs[j] % (long long)r.ell;
    if (c < 0) c += (long long)r.ell;
    acc = (acc + (std::uint64_t)c * modpow(r.w, j, r.ell)) % r.ell;
  }
  return acc;
}

struct Lcg {
  std::uint64_t s;
  std::uint64_t next() { return s = s * 6364136223846793005ull + 1442695040888963407ull; }
  long long small() { return (long long)(next() >> 40) % 19 - 9; }
};

CyclotomicInteger random_value(std::uint64_t E, Lcg& rng) {
  CyclotomicInteger v = CyclotomicInteger::zero(E);
  for (auto& c : v.coeffs) c = rng.small();
  return v;
}

}  // namespace

TEST_CASE("small root-of-unity identities") {
  CHECK(CyclotomicInteger::zeta_pow(2, 1) == CyclotomicInteger::integer(2, -1));
  auto z4 = CyclotomicInteger::zeta_pow(4, 1);
  CHECK(cyclo_add(z4, z4.conj()).is_zero());
  CHECK(cyclo_mul(z4, z4) == CyclotomicInteger::integer(4, -1));
  CHECK(cyclo_mul(z4, z4.conj()) == CyclotomicInteger::integer(4, 1));
  // vanishing sums along the p-part
  for (std::uint64_t E : {2, 3, 4, 8, 9, 27, 5, 25}) {
    std::uint64_t p = E;
    for (std::uint64_t d = 2; d * d <= E; ++d)
      if (E % d == 0) {
        p = d;
        break;
      }
    CyclotomicInteger s = CyclotomicInteger::zero(E);
    for (std::uint64_t i = 0; i < p; ++i)
      s = cyclo_add(s, CyclotomicInteger::zeta_pow(E, i * (E / p)));
    CHECK(s.is_zero());
    // full orbit sum vanishes too
    CyclotomicInteger t = CyclotomicInteger::zero(E);
    for (std::uint64_t i = 0; i < E; ++i) t = cyclo_add(t, CyclotomicInteger::zeta_pow(E, i));
    CHECK(t.is_zero());
  }
  CHECK(cyclo_phi(27) == 18);
  CHECK(cyclo_phi(1) == 1);
  CHECK_THROWS_AS(cyclo_phi(12), AlgError);
}

TEST_CASE("ring operations agree with modular evaluation") {
  for (std::uint64_t E : {2, 3, 4, 5, 8, 9, 16, 27}) {
    ModRoot r = find_root(E);
    Lcg rng{0x9e3779b97f4a7c15ull ^ (E * 0x2545f4914f6cdd1dull)};
    for (int trial = 0; trial < 40; ++trial) {
      auto a = random_value(E, rng), b = random_value(E, rng);
      CHECK(eval_mod(cyclo_add(a, b), r) == (eval_mod(a, r) + eval_mod(b, r)) % r.ell);
      CHECK(eval_mod(cyclo_mul(a, b), r) == eval_mod(a, r) * eval_mod(b, r) % r.ell);
      // conjugation evaluates at the inverse root
      ModRoot rc{r.ell, modpow(r.w, E - 1, r.ell)};
      CHECK(eval_mod(a.conj(), r) == eval_mod(a, rc));
      CHECK(a.conj().conj() == a);
    }
    for (std::uint64_t k = 0; k < E; ++k)
      CHECK(eval_mod(CyclotomicInteger::zeta_pow(E, k), r) == modpow(r.w, k, r.ell));
  }
}

TEST_CASE("level raising embeds compatibly") {
  CHECK(CyclotomicInteger::zeta_pow(2, 1).raised(4) == CyclotomicInteger::zeta_pow(4, 2));
  CHECK(CyclotomicInteger::zeta_pow(4, 1).raised(16) == CyclotomicInteger::zeta_pow(16, 4));
  CHECK(CyclotomicInteger::zeta_pow(3, 2).raised(9) == CyclotomicInteger::zeta_pow(9, 6));
  CHECK(CyclotomicInteger::integer(2, 7).raised(8) == CyclotomicInteger::integer(8, 7));
  // raising then arithmetic matches arithmetic then raising
  Lcg rng{12345};
  for (int trial = 0; trial < 25; ++trial) {
    auto a = random_value(3, rng), b = random_value(3, rng);
    CHECK(cyclo_mul(a, b).raised(27) == cyclo_mul(a.raised(27), b.raised(27)));
    CHECK(cyclo_add(a, b).raised(9) == cyclo_add(a.raised(9), b.raised(9)));
  }
  CHECK_THROWS_AS(CyclotomicInteger::zeta_pow(4, 1).raised(2), AlgError);
  CHECK_THROWS_AS(cyclo_add(CyclotomicInteger::zeta_pow(4, 1), CyclotomicInteger::zeta_pow(3, 1)),
                  AlgError);
  CHECK(cyclo_common_level(8, 2) == 8);
  CHECK_THROWS_AS(cyclo_common_level(8, 9), AlgError);
}

TEST_CASE("integrality recognition") {
  auto v = CyclotomicInteger::integer(9, -5);
  CHECK(v.is_integer());
  CHECK(v.integer_value() == -5);
  auto z = CyclotomicInteger::zeta_pow(9, 1);
  CHECK(!z.is_integer());
  CHECK_THROWS_AS(z.integer_value(), AlgError);
  // zeta_2 reduces to a plain integer even though it is a root of unity
  CHECK(CyclotomicInteger::zeta_pow(2, 1).is_integer());
}

TEST_CASE("character values as exact roots of unity") {
  auto k = Field::make(2, 1);
  auto x2 = builtin_truncated_poly(k, 2);
  auto Qx = abelianize(x2, Subspace::full(1));
  auto chars = character_group(Qx);
  REQUIRE(chars.size() == 2);
  GroupElement b1{{1}};
  CHECK(character_value(chars[0], b1, 2) == CyclotomicInteger::integer(2, 1));
  CHECK(character_value(chars[1], b1, 2) == CyclotomicInteger::integer(2, -1));
  CHECK(character_value(chars[1], b1, 4) == CyclotomicInteger::integer(4, -1));

  auto t3 = builtin_truncated_poly(k, 3);
  auto Qt = abelianize(t3, Subspace::full(2));
  REQUIRE(Qt->orders == std::vector<std::uint64_t>{4});
  LinearCharacter chi{Qt, {1}};
  CHECK(character_value(chi, GroupElement{{1, 0}}, 4) == CyclotomicInteger::zeta_pow(4, 1));
  CHECK(character_value(chi, GroupElement{{0, 1}}, 4) == CyclotomicInteger::integer(4, -1));
  CHECK_THROWS_AS(character_value(chi, GroupElement{{1, 0}}, 2), AlgError);
}

TEST_CASE("linear characters are orthonormal class functions") {
  for (auto [p, n] : {std::pair{2, 3}, {3, 3}}) {
    auto k = Field::make(p, 1);
    auto A = builtin_upper_triangular(k, n);
    Subspace full = Subspace::full(A->dim);
    auto Q = abelianize(A, full);
    std::uint64_t E = Q->exponent();
    std::vector<ClassFunction> lin;
    for (const auto& chi : character_group(Q))
      lin.push_back(class_function_of_character(A, full, chi, E));
    for (size_t i = 0; i < lin.size(); ++i)
      for (size_t j = 0; j < lin.size(); ++j)
        CHECK(inner_product(lin[i], lin[j]) == (i == j ? 1 : 0));
    CHECK(is_irreducible(lin[0]));
    CHECK(inner_product(trivial_character(A, full, E), lin[0]) == 1);
  }
}

TEST_CASE("induction from an index-two subgroup hits the known character") {
  auto k = Field::make(2, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  Subspace H = Subspace::span(*k, 3, {{1, 0, 0}, {0, 0, 1}});
  auto QH = abelianize(u3, H);
  REQUIRE(QH->orders == std::vector<std::uint64_t>{2, 2});
  REQUIRE(QH->generators[0] == GroupElement{{1, 0, 0}});
  REQUIRE(QH->generators[1] == GroupElement{{0, 0, 1}});
  // lambda kills 1+b1 and negates 1+b3
  LinearCharacter lam{QH, {0, 1}};
  auto f = class_function_of_character(u3, H, lam, 2);
  auto ind = induce(f, Subspace::full(3));
  REQUIRE(ind.classes.size() == 5);
  CHECK(ind.values[0] == CyclotomicInteger::integer(2, 2));   // identity
  CHECK(ind.value_at(GroupElement{{0, 0, 1}}) == CyclotomicInteger::integer(2, -2));
  CHECK(ind.value_at(GroupElement{{1, 0, 0}}).is_zero());
  CHECK(ind.value_at(GroupElement{{0, 1, 0}}).is_zero());
  CHECK(ind.value_at(GroupElement{{1, 1, 0}}).is_zero());
  CHECK(inner_product(ind, ind) == 1);
  CHECK(is_irreducible(ind));
  // orthogonal to every linear character
  auto QG = abelianize(u3, Subspace::full(3));
  for (const auto& chi : character_group(QG))
    CHECK(inner_product(ind, class_function_of_character(u3, Subspace::full(3), chi, 2)) == 0);
}

TEST_CASE("induction degrees and identity cases") {
  auto k = Field::make(3, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  Subspace full = Subspace::full(3);
  Subspace H = power_ideal(*u3, 2);
  auto tr = trivial_character(u3, H, 3);
  auto ind = induce(tr, full);
  CHECK(ind.degree() == CyclotomicInteger::integer(3, 9));  // the index [G:H]
  // inducing from the whole group changes nothing
  auto QG = abelianize(u3, full);
  auto chi = class_function_of_character(u3, full, character_group(QG)[1], 3);
  auto same = induce(chi, full);
  CHECK(same.values == chi.values);
  // degree multiplies by the index
  auto QH = abelianize(u3, H);
  auto lam = class_function_of_character(u3, H, character_group(QH)[1], 3);
  CHECK(induce(lam, full).degree() == CyclotomicInteger::integer(3, 9));
  CHECK_THROWS_AS(induce(ind, H), AlgError);  // target below the source
}

TEST_CASE("frobenius reciprocity for linear characters") {
  auto k2 = Field::make(2, 1);
  auto k3 = Field::make(3, 1);
  for (auto A : {builtin_upper_triangular(k2, 3), builtin_upper_triangular(k3, 3)}) {
    Subspace full = Subspace::full(A->dim);
    Subspace sq = power_ideal(*A, 2);
    auto QG = abelianize(A, full);
    std::uint64_t E = QG->exponent();
    std::vector<ClassFunction> gchars;
    for (const auto& chi : character_group(QG))
      gchars.push_back(class_function_of_character(A, full, chi, E));
    // the induced two-dimensional pieces join the test set
    for (const auto& T : subspaces_between(*A, sq, full)) {
      auto QH = abelianize(A, T);
      for (const auto& lam : character_group(QH)) {
        auto f = class_function_of_character(A, T, lam, QH->exponent());
        auto ind = induce(f, full);
        for (const auto& F : gchars)
          CHECK(inner_product(ind, F) == inner_product(f, restrict_to(F, T)));
      }
    }
  }
}

TEST_CASE("class function plumbing") {
  auto k = Field::make(2, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  Subspace full = Subspace::full(3);
  auto QG = abelianize(u3, full);
  auto f = class_function_of_character(u3, full, character_group(QG)[1], 2);
  auto g = class_function_of_character(u3, full, character_group(QG)[2], 2);
  auto s = cf_add(f, g);
  auto m = cf_mul(f, g);
  for (size_t i = 0; i < f.classes.size(); ++i) {
    CHECK(s.values[i] == cyclo_add(f.values[i], g.values[i]));
    CHECK(m.values[i] == cyclo_mul(f.values[i], g.values[i]));
  }
  CHECK(cf_sub(s, g).values == f.values);
  CHECK(cf_conj(cf_conj(f)).values == f.values);
  // products of linear characters are again characters of inner norm one
  CHECK(inner_product(m, m) == 1);
  // mismatched groups are rejected
  auto t3 = builtin_truncated_poly(k, 3);
  auto Qt = abelianize(t3, Subspace::full(2));
  auto h = class_function_of_character(t3, Subspace::full(2), character_group(Qt)[1], 4);
  CHECK_THROWS_AS(cf_add(f, h), AlgError);
  CHECK_THROWS_AS(inner_product(f, h), AlgError);
  CHECK_THROWS_AS(f.value_at(GroupElement{{1, 1}}), AlgError);
  // restriction to a non-subgroup is rejected
  CHECK_THROWS_AS(restrict_to(f, Subspace::span(*k, 3, {{1, 0, 0}, {0, 1, 0}})), AlgError);
}

TEST_CASE("restriction composes with value lookup") {
  auto k = Field::make(3, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  Subspace full = Subspace::full(3);
  Subspace H = Subspace::span(*k, 3, {{1, 0, 0}, {0, 0, 1}});
  auto QG = abelianize(u3, full);
  for (const auto& chi : character_group(QG)) {
    auto F = class_function_of_character(u3, full, chi, 3);
    auto res = restrict_to(F, H);
    for (const auto& [rep, sz] : res.classes) CHECK(res.value_at(rep) == F.value_at(rep));
    // restriction of a linear character stays linear: norm one
    CHECK(inner_product(res, res) == 1);
  }
}
