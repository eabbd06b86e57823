#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "algroups/algrp.hpp"
#include "algroups/cyclo.hpp"
#include "algroups/error.hpp"
#include "algroups/gf.hpp"
#include "algroups/heis.hpp"
#include "algroups/k1norm.hpp"
#include "algroups/nilalg.hpp"
#include "doctest.h"

using namespace algroups;

namespace {

// conjugation-invariance of a central character, against every group element
bool brute_invariant(const AlgebraRef& A, const LinearCharacter& phi) {
  auto center = enumerate_group(*A, power_ideal(*A, 2));
  for (const GroupElement& g : enumerate_group(*A))
    for (const GroupElement& h : center)
      if (phi.eval_exponent(g_conjugate(*A, h, g)) != phi.eval_exponent(h)) return false;
  return true;
}

// the radical straight from its definition
std::set<std::uint64_t> brute_radical(const AlgebraRef& A, const LinearCharacter& phi) {
  std::set<std::uint64_t> out;
  auto all = enumerate_group(*A);
  for (const GroupElement& g : all) {
    bool ok = true;
    for (const GroupElement& h : all)
      if (phi.eval_exponent(g_commutator(*A, g, h)) != 0) {
        ok = false;
        break;
      }
    if (ok) out.insert(element_code(*A, g));
  }
  return out;
}

std::set<std::uint64_t> codes_of_subgroup(const AlgebraRef& A, const Subspace& U) {
  std::set<std::uint64_t> out;
  for (const GroupElement& g : enumerate_group(*A, U)) out.insert(element_code(*A, g));
  return out;
}

// chi extends phi: they agree on the smaller domain subgroup
bool extends_central(const SHDatum& d) {
  std::uint64_t E1 = d.phi.domain->exponent();
  std::uint64_t E2 = d.chi.domain->exponent();
  std::uint64_t L = std::lcm(std::max<std::uint64_t>(E1, 1), std::max<std::uint64_t>(E2, 1));
  for (const GroupElement& h : enumerate_group(*d.alg, d.phi.domain->space)) {
    std::uint64_t a = E1 ? d.phi.eval_exponent(h) * (L / E1) % L : 0;
    std::uint64_t b = E2 ? d.chi.eval_exponent(h) * (L / E2) % L : 0;
    if (a != b) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("invariant central characters of the three-step unipotent groups") {
  for (int p : {2, 3}) {
    auto k = Field::make(p, 1);
    auto A = builtin_upper_triangular(k, 3);
    auto inv = invariant_central_characters(A);
    // the square subgroup is central, so every character is invariant
    CHECK((int)inv.size() == p);
    for (const auto& phi : inv) CHECK(brute_invariant(A, phi));
  }
  auto A4 = builtin_upper_triangular(Field::make(2, 2), 3);
  CHECK(invariant_central_characters(A4).size() == 4);
}

TEST_CASE("invariant central characters of an abelian group are everything") {
  auto A = builtin_truncated_poly(Field::make(2, 1), 3);
  auto inv = invariant_central_characters(A);
  CHECK(inv.size() == 2);  // A^2 = span(t^2), two characters
  for (const auto& phi : inv) CHECK(brute_invariant(A, phi));
}

TEST_CASE("invariant central characters of the four-step group are cut down") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 4);
  auto Q2 = abelianize(A, power_ideal(*A, 2));
  auto all = character_group(Q2);
  CHECK(all.size() == 8);
  auto inv = invariant_central_characters(A);
  CHECK(inv.size() < 8);
  CHECK(inv.size() == 4);

  // generator test agrees with the full conjugation sweep, character by
  // character
  std::set<std::vector<std::uint64_t>> inv_set;
  for (const auto& phi : inv) inv_set.insert(phi.exponents);
  for (const auto& phi : all)
    CHECK(brute_invariant(A, phi) == (inv_set.count(phi.exponents) == 1));

  // the invariant ones are exactly those trivial on the deepest direction
  GroupElement e14{{0, 0, 0, 0, 0, 1}};
  for (const auto& phi : inv) CHECK(phi.eval_exponent(e14) == 0);
}

TEST_CASE("commutator pairing of the smallest Heisenberg group") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 3);
  auto inv = invariant_central_characters(A);
  REQUIRE(inv.size() == 2);
  CHECK(inv[0].is_trivial());

  PairingMatrix P0 = commutator_pairing(A, inv[0]);
  CHECK(P0.level == 1);
  CHECK(P0.dim == 2);
  CHECK(P0.entries == std::vector<std::uint64_t>{0, 0, 0, 0});

  PairingMatrix P = commutator_pairing(A, inv[1]);
  CHECK(P.level == 2);
  CHECK(P.dim == 2);
  CHECK(P.entries == std::vector<std::uint64_t>{0, 1, 1, 0});
}

TEST_CASE("commutator pairing over odd characteristic is antisymmetric") {
  auto A = builtin_upper_triangular(Field::make(3, 1), 3);
  auto inv = invariant_central_characters(A);
  REQUIRE(inv.size() == 3);
  PairingMatrix P = commutator_pairing(A, inv[1]);
  CHECK(P.level == 3);
  CHECK(P.at(0, 0) == 0);
  CHECK(P.at(1, 1) == 0);
  CHECK(P.at(0, 1) != 0);
  CHECK((P.at(0, 1) + P.at(1, 0)) % 3 == 0);
}

TEST_CASE("pairing rejects characters that move under conjugation") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 4);
  auto Q2 = abelianize(A, power_ideal(*A, 2));
  for (const auto& phi : character_group(Q2)) {
    if (brute_invariant(A, phi)) continue;
    CHECK_THROWS_AS(commutator_pairing(A, phi), AlgError);
    break;
  }
}

TEST_CASE("scalar balance of the pairing holds exhaustively") {
  for (int p : {2, 3}) {
    auto A = builtin_upper_triangular(Field::make(p, 1), 3);
    for (const auto& phi : invariant_central_characters(A)) {
      CheckResult r = verify_balance(A, phi);
      INFO(r.witness);
      CHECK(r.pass);
    }
  }
  // quartic field scalars as well
  auto A4 = builtin_upper_triangular(Field::make(2, 2), 3);
  for (const auto& phi : invariant_central_characters(A4)) CHECK(verify_balance(A4, phi).pass);
  // truncated polynomials commute, the pairing is everywhere trivial
  auto T = builtin_truncated_poly(Field::make(3, 1), 4);
  for (const auto& phi : invariant_central_characters(T)) CHECK(verify_balance(T, phi).pass);
}

TEST_CASE("balance sweep refuses oversized groups") {
  auto A = builtin_upper_triangular(Field::make(2, 2), 4);  // 4096 points
  auto Q2 = abelianize(A, power_ideal(*A, 2));
  LinearCharacter trivial{Q2, std::vector<std::uint64_t>(Q2->orders.size(), 0)};
  CHECK_THROWS_AS(verify_balance(A, trivial), AlgError);
}

TEST_CASE("radical of a nondegenerate pairing is the square subgroup") {
  for (int p : {2, 3}) {
    auto A = builtin_upper_triangular(Field::make(p, 1), 3);
    auto inv = invariant_central_characters(A);
    Subspace rad = radical_g_phi(A, inv[1]);
    CHECK(rad.rank() == 1);
    CHECK(rad == power_ideal(*A, 2));
    CHECK(codes_of_subgroup(A, rad) == brute_radical(A, inv[1]));

    Subspace full = radical_g_phi(A, inv[0]);
    CHECK(full.rank() == A->dim);
  }
}

TEST_CASE("radical swallows an abelian direct summand") {
  auto k = Field::make(2, 1);
  auto A = direct_sum(builtin_upper_triangular(k, 3), builtin_truncated_poly(k, 2));
  auto inv = invariant_central_characters(A);
  bool saw_nontrivial = false;
  for (const auto& phi : inv) {
    if (phi.is_trivial()) continue;
    saw_nontrivial = true;
    Subspace rad = radical_g_phi(A, phi);
    CHECK(codes_of_subgroup(A, rad) == brute_radical(A, phi));
    Vec x2dir = A->zero();
    x2dir[3] = 1;  // the abelian summand's generator
    CHECK(rad.contains(*A->field, x2dir));
  }
  CHECK(saw_nontrivial);
}

TEST_CASE("radical matches the brute-force definition on the four-step group") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 4);
  for (const auto& phi : invariant_central_characters(A)) {
    Subspace rad = radical_g_phi(A, phi);
    CHECK(codes_of_subgroup(A, rad) == brute_radical(A, phi));
    CHECK(power_ideal(*A, 2).subset_of(*A->field, rad));
  }
}

TEST_CASE("maximal isotropic subspaces of the Heisenberg pairing") {
  auto k = Field::make(2, 1);
  auto A = builtin_upper_triangular(k, 3);
  auto inv = invariant_central_characters(A);

  Subspace L0 = maximal_isotropic(A, inv[0]);
  CHECK(L0.rank() == 3);  // trivial pairing, everything is isotropic

  Subspace L = maximal_isotropic(A, inv[1]);
  CHECK(L.rank() == 2);
  CHECK(L.contains(*k, {1, 0, 0}));  // lex-first pick is b1
  CHECK(L.contains(*k, {0, 0, 1}));
  CHECK(is_subalgebra(*A, L));

  // isotropy and maximality, directly
  for (const GroupElement& u : enumerate_group(*A, L))
    for (const GroupElement& w : enumerate_group(*A, L))
      CHECK(inv[1].eval_exponent(g_commutator(*A, u, w)) == 0);
  for (const GroupElement& g : enumerate_group(*A)) {
    if (L.contains(*k, g.a)) continue;
    bool all_trivial = true;
    for (const GroupElement& u : enumerate_group(*A, L))
      if (inv[1].eval_exponent(g_commutator(*A, g, u)) != 0) all_trivial = false;
    CHECK(!all_trivial);
  }
}

TEST_CASE("maximal isotropic over the quartic field keeps scalar closure") {
  auto A = builtin_upper_triangular(Field::make(2, 2), 3);
  auto inv = invariant_central_characters(A);
  REQUIRE(inv.size() == 4);
  Subspace L = maximal_isotropic(A, inv[1]);
  CHECK(L.rank() == 2);  // one isotropic line over the square subgroup
  CHECK(is_subalgebra(*A, L));
  for (const GroupElement& u : enumerate_group(*A, L))
    for (const GroupElement& w : enumerate_group(*A, L))
      CHECK(inv[1].eval_exponent(g_commutator(*A, u, w)) == 0);
}

TEST_CASE("randomized isotropic scans still produce valid maximal subspaces") {
  auto A = builtin_upper_triangular(Field::make(3, 1), 3);
  auto inv = invariant_central_characters(A);
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Subspace L = maximal_isotropic(A, inv[1], seed);
    CHECK(L.rank() == 2);
    CHECK(is_subalgebra(*A, L));
    for (const GroupElement& u : enumerate_group(*A, L))
      for (const GroupElement& w : enumerate_group(*A, L))
        CHECK(inv[1].eval_exponent(g_commutator(*A, u, w)) == 0);
  }
}

TEST_CASE("classification of the smallest Heisenberg group") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 3);
  auto data = sh_classify(A);
  REQUIRE(data.size() == 5);
  int linear = 0, big = 0;
  for (const auto& d : data) {
    CHECK(extends_central(d));
    if (d.g_phi.rank() == A->dim)
      ++linear;
    else {
      ++big;
      CHECK(d.g_phi == power_ideal(*A, 2));
      CHECK(d.chi.exponents == std::vector<std::uint64_t>{1});
    }
  }
  CHECK(linear == 4);
  CHECK(big == 1);
}

TEST_CASE("classification of an abelian group is its character group") {
  auto A = builtin_truncated_poly(Field::make(2, 1), 2);
  auto data = sh_classify(A);
  CHECK(data.size() == 2);
  for (const auto& d : data) {
    CHECK(d.phi.is_trivial());
    CHECK(d.g_phi.rank() == A->dim);
  }
}

TEST_CASE("classification count over the nine-element field center") {
  auto A = builtin_upper_triangular(Field::make(3, 1), 3);
  auto data = sh_classify(A);
  CHECK(data.size() == 11);  // 9 linear plus two of degree 3
}

TEST_CASE("classification of the four-step group and its degree budget") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 4);
  auto data = sh_classify(A);
  CHECK(data.size() == 14);  // 8 linear, then two extensions for each of 3
  std::uint64_t degsq = 0;
  for (const auto& d : data)
    degsq += Subspace::full(A->dim).size(*A->field) / d.g_phi.size(*A->field);
  CHECK(degsq == 32);  // strictly below |G| = 64: the rest is not strongly Heisenberg
}

TEST_CASE("the induced Heisenberg character of the eight-element group") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 3);
  auto data = sh_classify(A);
  const SHDatum& d = data.back();
  REQUIRE(!d.phi.is_trivial());
  ClassFunction f = sh_character(d);
  CHECK(f.degree().integer_value() == 2);
  CHECK(is_irreducible(f));
  CHECK(f.value_at(g_identity(*A)).integer_value() == 2);
  CHECK(f.value_at(GroupElement{{0, 0, 1}}).integer_value() == -2);
  for (std::uint64_t code : {1ULL, 2ULL, 3ULL})
    CHECK(f.value_at(element_from_code(*A, code)).is_zero());

  // linear data materialize as their characters
  for (const auto& dl : data)
    if (dl.g_phi.rank() == A->dim) {
      ClassFunction lf = sh_character(dl);
      CHECK(lf.degree().integer_value() == 1);
      CHECK(is_irreducible(lf));
    }
}

TEST_CASE("all strongly Heisenberg characters are orthonormal and complete for class two") {
  for (int p : {2, 3}) {
    auto A = builtin_upper_triangular(Field::make(p, 1), 3);
    auto data = sh_classify(A);
    std::vector<ClassFunction> chars;
    for (const auto& d : data) chars.push_back(sh_character(d));
    std::uint64_t degsq = 0;
    for (size_t i = 0; i < chars.size(); ++i) {
      degsq += (std::uint64_t)(chars[i].degree().integer_value() *
                               chars[i].degree().integer_value());
      for (size_t j = i; j < chars.size(); ++j)
        CHECK(inner_product(chars[i], chars[j]) == (i == j ? 1 : 0));
    }
    CHECK(degsq == A->group_size());  // class-two groups are entirely strongly Heisenberg
  }
}

TEST_CASE("induced character does not depend on the extension or the isotropic choice") {
  for (int p : {2, 3}) {
    auto A = builtin_upper_triangular(Field::make(p, 1), 3);
    auto data = sh_classify(A);
    const SHDatum& d = data.back();
    REQUIRE(!d.phi.is_trivial());
    ClassFunction base = sh_character(d);

    Subspace lt = maximal_isotropic(A, d.phi);
    auto exts = sh_extensions(d, lt);
    CHECK(exts.size() >= 2);
    for (const auto& psi : exts) {
      ClassFunction f = induce(
          class_function_of_character(A, lt, psi, psi.domain->exponent()),
          Subspace::full(A->dim));
      CHECK(f.degree().integer_value() == base.degree().integer_value());
      CHECK(inner_product(f, base) == 1);
    }
    for (std::uint64_t seed : {4ULL, 9ULL, 14ULL}) {
      ClassFunction g = sh_character(d, seed);
      CHECK(inner_product(g, base) == 1);
    }
  }
}

TEST_CASE("norm pullback turns the nontrivial line character into the trace character") {
  auto k = Field::make(2, 1);
  auto A = builtin_truncated_poly(k, 2);
  auto Q = abelianize(A, Subspace::full(A->dim));
  LinearCharacter chi{Q, {1}};
  LinearCharacter chi2 = norm_pullback(A, Subspace::full(A->dim), chi, 2);
  const AlgebraRef& A4 = chi2.domain->alg;
  for (std::uint64_t a = 0; a < 4; ++a) {
    Fel tr = trace_to_subfield(A4->field, (Fel)a, k);
    std::uint64_t want = tr == 0 ? 0 : 1;
    std::uint64_t E = chi2.domain->exponent();
    CHECK(chi2.eval_exponent(GroupElement{{(Fel)a}}) == want * (E / 2));
  }
}

TEST_CASE("norm pullback agrees with the tabulated norm on a full group") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 3);
  NormTable T = norm_map(A, 2);
  auto chars = character_group(T.dst);
  for (const auto& chi : {chars[1], chars[2], chars[3]}) {
    LinearCharacter chi2 = norm_pullback(A, Subspace::full(A->dim), chi, 2);
    std::uint64_t E = chi.domain->exponent();
    std::uint64_t E2 = chi2.domain->exponent();
    for (const GroupElement& g : enumerate_group(*chi2.domain->alg)) {
      std::vector<std::uint64_t> nt = T.apply(T.src->log(g));
      GroupElement rep = g_identity(*A);
      for (size_t j = 0; j < nt.size(); ++j)
        rep = g_mul(*A, rep, g_pow(*A, T.dst->generators[j], (long long)nt[j]));
      std::uint64_t lhs = chi2.eval_exponent(g) % E2;
      std::uint64_t rhs = chi.eval_exponent(rep) % E;
      std::uint64_t L = std::lcm(E, E2);
      CHECK(lhs * (L / E2) % L == rhs * (L / E) % L);
    }
  }
}

TEST_CASE("base change of strongly Heisenberg data over the quadratic extension") {
  auto k = Field::make(2, 1);
  auto A = builtin_upper_triangular(k, 3);
  auto data = sh_classify(A);
  const SHDatum& d = data.back();

  SHDatum same = sh_base_change(d, 1);
  CHECK(sh_datum_eq(same, d));

  SHDatum d2 = sh_base_change(d, 2);
  const AlgebraRef& A2 = d2.alg;
  CHECK(A2->field->q() == 4);
  CHECK(d2.g_phi.rank() == 1);  // the radical stays the square subgroup

  // the extended central character is the trace composite on the center
  const FieldRef& K = A2->field;
  std::uint64_t E = d2.phi.domain->exponent();
  for (std::uint64_t c = 0; c < 4; ++c) {
    Vec v = A2->zero();
    v[2] = (Fel)c;
    Fel tr = trace_to_subfield(K, (Fel)c, k);
    CHECK(d2.phi.eval_exponent(GroupElement{v}) == (tr == 0 ? 0 : E / 2));
  }

  ClassFunction f2 = sh_character(d2);
  CHECK(f2.degree().integer_value() == 4);
  CHECK(is_irreducible(f2));
}

TEST_CASE("base change keeps distinct Heisenberg data distinct") {
  auto A = builtin_upper_triangular(Field::make(2, 1), 3);
  auto data = sh_classify(A);
  std::vector<SHDatum> images;
  for (const auto& d : data) images.push_back(sh_base_change(d, 2));
  for (size_t i = 0; i < images.size(); ++i)
    for (size_t j = i + 1; j < images.size(); ++j)
      CHECK(!sh_datum_eq(images[i], images[j]));

  // characters of the images are pairwise distinct too
  std::vector<ClassFunction> chars;
  for (const auto& d : images) chars.push_back(sh_character(d));
  for (size_t i = 0; i < chars.size(); ++i)
    for (size_t j = i + 1; j < chars.size(); ++j)
      CHECK(inner_product(chars[i], chars[j]) == 0);
}

TEST_CASE("base-changed linear data act through the norm on the abelianization") {
  auto A = builtin_truncated_poly(Field::make(2, 1), 3);
  auto data = sh_classify(A);
  NormTable T = norm_map(A, 2);
  for (const auto& d : data) {
    SHDatum d2 = sh_base_change(d, 2);
    std::uint64_t E = d.chi.domain->exponent();
    std::uint64_t E2 = d2.chi.domain->exponent();
    std::uint64_t L = std::lcm(E, E2);
    for (const GroupElement& g : enumerate_group(*d2.alg)) {
      std::vector<std::uint64_t> nt = T.apply(T.src->log(g));
      GroupElement rep = g_identity(*A);
      for (size_t j = 0; j < nt.size(); ++j)
        rep = g_mul(*A, rep, g_pow(*A, T.dst->generators[j], (long long)nt[j]));
      CHECK(d2.chi.eval_exponent(g) % E2 * (L / E2) % L ==
            d.chi.eval_exponent(rep) % E * (L / E) % L);
    }
  }
}

TEST_CASE("restriction of a Heisenberg irrep is compatible with base change") {
  auto k = Field::make(2, 1);
  auto A = builtin_upper_triangular(k, 3);
  auto data = sh_classify(A);
  const SHDatum& d = data.back();
  ClassFunction rho = sh_character(d);
  SHDatum d2 = sh_base_change(d, 2);
  ClassFunction rho2 = sh_character(d2);

  Subspace lo = power_ideal(*A, 2);
  for (const Subspace& U : subspaces_between(*A, lo, Subspace::full(A->dim))) {
    if (U.rank() == 0 || U.rank() == A->dim) continue;
    SubAlgebra sub = subalgebra(A, U);
    ClassFunction res = restrict_to(rho, U);
    // summands of the restriction, as data of the subalgebra
    for (const auto& s : sh_classify(sub.alg)) {
      ClassFunction sch = sh_character(s);
      // bring to the ambient frame to compare with the restriction
      ClassFunction amb = ClassFunction::zero(A, U, sch.level);
      for (size_t ci = 0; ci < amb.classes.size(); ++ci)
        amb.values[ci] = sch.value_at(GroupElement{sub.from_parent(amb.classes[ci].first.a)});
      long long mult = inner_product(res, amb);
      if (mult == 0) continue;
      // the base-changed summand appears in the restricted base change
      SHDatum s2 = sh_base_change(s, 2);
      ClassFunction sch2 = sh_character(s2);
      std::vector<Vec> urows;
      Embedding emb(k, d2.alg->field);
      for (int r = 0; r < U.rank(); ++r) {
        Vec c(U.rank(), 0);
        c[r] = 1;
        Vec row = U.lift(*k, c);
        for (Fel& x : row) x = emb(x);
        urows.push_back(std::move(row));
      }
      Subspace Uext = Subspace::span(*d2.alg->field, A->dim, urows);
      ClassFunction res2 = restrict_to(rho2, Uext);
      ClassFunction amb2 = ClassFunction::zero(d2.alg, Uext, sch2.level);
      SubAlgebra sub2 = subalgebra(d2.alg, Uext);
      for (size_t ci = 0; ci < amb2.classes.size(); ++ci)
        amb2.values[ci] =
            sch2.value_at(GroupElement{sub2.from_parent(amb2.classes[ci].first.a)});
      CHECK(inner_product(res2, amb2) >= 1);
    }
  }
}
