#include <algorithm>
#include <set>
#include <vector>

#include "algroups/gf.hpp"
#include "algroups/linalg.hpp"
#include "algroups/nilalg.hpp"
#include "doctest.h"

using namespace algroups;

namespace {

// Oracle: multiply strictly upper triangular n x n matrices directly and
// compare against the algebra's basis-indexed product.  The basis order is
// first superdiagonal, then second, and so on.
std::vector<std::pair<int, int>> ut_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int d = 1; d < n; ++d)
    for (int i = 1; i + d <= n; ++i) pairs.push_back({i, i + d});
  return pairs;
}

std::vector<Fel> to_matrix(const Field& k, int n, const std::vector<std::pair<int, int>>& pairs,
                           const Vec& v) {
  std::vector<Fel> m((size_t)n * n, 0);
  for (size_t t = 0; t < pairs.size(); ++t)
    m[(size_t)(pairs[t].first - 1) * n + (pairs[t].second - 1)] = v[t];
  (void)k;
  return m;
}

Vec from_matrix(int n, const std::vector<std::pair<int, int>>& pairs,
                const std::vector<Fel>& m) {
  Vec v(pairs.size(), 0);
  for (size_t t = 0; t < pairs.size(); ++t)
    v[t] = m[(size_t)(pairs[t].first - 1) * n + (pairs[t].second - 1)];
  return v;
}

std::vector<Fel> mat_mul(const Field& k, int n, const std::vector<Fel>& a,
                         const std::vector<Fel>& b) {
  std::vector<Fel> c((size_t)n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        c[(size_t)i * n + j] = k.add(c[(size_t)i * n + j],
                                     k.mul(a[(size_t)i * n + l], b[(size_t)l * n + j]));
  return c;
}

Vec unrank_vec(const Field& k, int dim, std::uint64_t t) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) {
    v[i] = (Fel)(t % k.q());
    t /= k.q();
  }
  return v;
}

}  // namespace

TEST_CASE("subspace span has a unique reduced form") {
  auto k = Field::make(2, 1);
  Subspace a = Subspace::span(*k, 3, {{1, 1, 0}, {0, 1, 0}});
  Subspace b = Subspace::span(*k, 3, {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  CHECK(a == b);
  CHECK(a.rank() == 2);
  CHECK(a.row(0) == Vec{1, 0, 0});
  CHECK(a.row(1) == Vec{0, 1, 0});
  CHECK(a.contains(*k, {1, 1, 0}));
  CHECK(!a.contains(*k, {0, 0, 1}));
  CHECK(a.size(*k) == 4);
  CHECK(Subspace::full(3).rank() == 3);
  CHECK(Subspace::span(*k, 3, {}).rank() == 0);
}

TEST_CASE("subspace coords and lift invert each other") {
  auto k = Field::make(3, 1);
  Subspace s = Subspace::span(*k, 3, {{1, 2, 0}, {0, 0, 1}});
  Vec v = {2, 1, 1};  // 2*(1,2,0) + 1*(0,0,1)
  CHECK(s.contains(*k, v));
  Vec c = s.coords(*k, v);
  CHECK(s.lift(*k, c) == v);
  CHECK_THROWS_WITH_AS(s.coords(*k, {0, 1, 0}), "vector is not in the subspace", AlgError);
  for (std::uint64_t t = 0; t < 9; ++t) {
    Vec cs = unrank_vec(*k, 2, t);
    CHECK(s.coords(*k, s.lift(*k, cs)) == cs);
  }
}

TEST_CASE("subspace sum and inclusion") {
  auto k = Field::make(2, 1);
  Subspace a = Subspace::span(*k, 4, {{1, 0, 0, 0}});
  Subspace b = Subspace::span(*k, 4, {{0, 1, 0, 0}});
  Subspace s = a.sum(*k, b);
  CHECK(s.rank() == 2);
  CHECK(a.subset_of(*k, s));
  CHECK(b.subset_of(*k, s));
  CHECK(!s.subset_of(*k, a));
  CHECK(a < s);  // deterministic ordering puts smaller rank first
}

TEST_CASE("upper triangular algebra of size 3 matches matrix arithmetic") {
  auto k = Field::make(2, 1);
  auto A = builtin_upper_triangular(k, 3);
  CHECK(A->dim == 3);
  CHECK(A->nclass == 3);
  CHECK(A->defined_over == 2);

  Vec b1 = {1, 0, 0}, b2 = {0, 1, 0}, b3 = {0, 0, 1};
  CHECK(A->mul(b1, b2) == b3);
  CHECK(A->mul(b2, b1) == Vec{0, 0, 0});
  CHECK(A->mul(b1, b3) == Vec{0, 0, 0});
  CHECK(A->mul(b3, b3) == Vec{0, 0, 0});

  auto pairs = ut_pairs(3);
  for (std::uint64_t s = 0; s < 8; ++s)
    for (std::uint64_t t = 0; t < 8; ++t) {
      Vec x = unrank_vec(*k, 3, s), y = unrank_vec(*k, 3, t);
      auto oracle = from_matrix(3, pairs,
                                mat_mul(*k, 3, to_matrix(*k, 3, pairs, x),
                                        to_matrix(*k, 3, pairs, y)));
      CHECK(A->mul(x, y) == oracle);
    }
}

TEST_CASE("upper triangular algebra of size 4 matches matrix arithmetic") {
  for (int p : {2, 3}) {
    auto k = Field::make(p, 1);
    auto A = builtin_upper_triangular(k, 4);
    CHECK(A->dim == 6);
    CHECK(A->nclass == 4);
    auto pairs = ut_pairs(4);
    // spot products through the basis indexing
    auto basis = [&](int i) {
      Vec v(6, 0);
      v[i] = 1;
      return v;
    };
    CHECK(A->mul(basis(0), basis(1)) == basis(3));  // e12 e23 = e13
    CHECK(A->mul(basis(1), basis(2)) == basis(4));  // e23 e34 = e24
    CHECK(A->mul(basis(0), basis(4)) == basis(5));  // e12 e24 = e14
    CHECK(A->mul(basis(3), basis(2)) == basis(5));  // e13 e34 = e14
    CHECK(A->mul(basis(1), basis(0)) == Vec(6, 0));
    // random-free exhaustive oracle over a slice
    for (std::uint64_t s = 0; s < 64; ++s) {
      Vec x = unrank_vec(*k, 6, s % ((std::uint64_t)1 << 6));
      Vec y = unrank_vec(*k, 6, (s * 7 + 3) % ((std::uint64_t)1 << 6));
      if (p == 3) {
        x = unrank_vec(*k, 6, s);
        y = unrank_vec(*k, 6, s * 5 + 1);
      }
      auto oracle = from_matrix(4, pairs,
                                mat_mul(*k, 4, to_matrix(*k, 4, pairs, x),
                                        to_matrix(*k, 4, pairs, y)));
      CHECK(A->mul(x, y) == oracle);
    }
  }
}

TEST_CASE("truncated polynomial algebra matches polynomial arithmetic") {
  auto k = Field::make(3, 1);
  auto A = builtin_truncated_poly(k, 4);  // basis t, t^2, t^3
  CHECK(A->dim == 3);
  CHECK(A->nclass == 4);
  for (std::uint64_t s = 0; s < 27; ++s)
    for (std::uint64_t t = 0; t < 27; ++t) {
      Vec x = unrank_vec(*k, 3, s), y = unrank_vec(*k, 3, t);
      // polynomial oracle: coefficient of t^(i+j) accumulates x_i y_j
      Vec oracle(3, 0);
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
          if (i + j <= 3)
            oracle[i + j - 1] = k->add(oracle[i + j - 1], k->mul(x[i - 1], y[j - 1]));
      CHECK(A->mul(x, y) == oracle);
      CHECK(A->mul(x, y) == A->mul(y, x));
    }
}

TEST_CASE("construction rejects bad structure constants") {
  auto k = Field::make(2, 1);
  SUBCASE("wrong table size") {
    CHECK_THROWS_AS(algebra_from_constants(k, 2, std::vector<Fel>(7, 0)), AlgError);
  }
  SUBCASE("constants outside the field") {
    std::vector<Fel> sc(8, 0);
    sc[0] = 2;
    try {
      algebra_from_constants(k, 2, sc);
      CHECK(false);
    } catch (const AlgError& e) {
      CHECK(e.code == Errc::FieldMismatch);
    }
  }
  SUBCASE("associativity failure carries the witness triple") {
    // b1 b1 = b2, b2 b1 = b2 breaks (b1 b1) b1 = b1 (b1 b1)
    std::vector<Fel> sc(8, 0);
    sc[0 * 4 + 0 * 2 + 1] = 1;
    sc[1 * 4 + 0 * 2 + 1] = 1;
    try {
      algebra_from_constants(k, 2, sc);
      CHECK(false);
    } catch (const AlgError& e) {
      CHECK(e.code == Errc::NotAssociative);
      CHECK(e.witness == "{\"triple\":[0,0,0]}");
    }
  }
  SUBCASE("idempotent element is flagged as not nilpotent") {
    std::vector<Fel> sc = {1};  // one dimensional, b1 b1 = b1
    try {
      algebra_from_constants(k, 1, sc);
      CHECK(false);
    } catch (const AlgError& e) {
      CHECK(e.code == Errc::NotNilpotent);
    }
  }
}

TEST_CASE("rationality declarations are validated") {
  auto k4 = Field::make(2, 2);
  std::vector<Fel> sc(8, 0);
  sc[0 * 4 + 0 * 2 + 1] = 1;  // b1 b1 = b2 over F4
  auto A = algebra_from_constants(k4, 2, sc, 2);
  CHECK(A->defined_over == 2);
  CHECK(algebra_from_constants(k4, 2, sc)->defined_over == 4);
  CHECK_THROWS_AS(algebra_from_constants(k4, 2, sc, 3), AlgError);
  CHECK_THROWS_AS(algebra_from_constants(k4, 2, sc, 8), AlgError);  // F8 is not inside F4
  std::vector<Fel> sct(8, 0);
  sct[0 * 4 + 0 * 2 + 1] = 2;  // b1 b1 = t b2, not rational over F2
  try {
    algebra_from_constants(k4, 2, sct, 2);
    CHECK(false);
  } catch (const AlgError& e) {
    CHECK(e.code == Errc::NotDefinedOverSubfield);
  }
}

TEST_CASE("power ideals descend as expected") {
  auto k = Field::make(2, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  CHECK(power_ideal(*u3, 1).rank() == 3);
  Subspace sq = power_ideal(*u3, 2);
  CHECK(sq.rank() == 1);
  CHECK(sq.contains(*k, {0, 0, 1}));
  CHECK(power_ideal(*u3, 3).rank() == 0);
  CHECK(power_ideal(*u3, 7).rank() == 0);

  auto u4 = builtin_upper_triangular(k, 4);
  Subspace sq4 = power_ideal(*u4, 2);
  CHECK(sq4.rank() == 3);
  for (int i : {3, 4, 5}) {
    Vec v(6, 0);
    v[i] = 1;
    CHECK(sq4.contains(*k, v));
  }
  Subspace cb4 = power_ideal(*u4, 3);
  CHECK(cb4.rank() == 1);
  CHECK(cb4.contains(*k, {0, 0, 0, 0, 0, 1}));
  CHECK(power_ideal(*u4, 4).rank() == 0);
}

TEST_CASE("annihilator ideal of triangular algebras is the deepest power") {
  auto k = Field::make(2, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  Subspace ann = annihilator_ideal(*u3);
  CHECK(ann.rank() == 1);
  CHECK(ann.contains(*k, {0, 0, 1}));
  auto u4 = builtin_upper_triangular(k, 4);
  Subspace ann4 = annihilator_ideal(*u4);
  CHECK(ann4.rank() == 1);
  CHECK(ann4.contains(*k, {0, 0, 0, 0, 0, 1}));
  // in the truncated polynomial algebra mod t^4 the annihilator is t^3 alone
  auto t4 = builtin_truncated_poly(k, 4);
  Subspace annt = annihilator_ideal(*t4);
  CHECK(annt.rank() == 1);
  CHECK(annt.contains(*k, {0, 0, 1}));
}

TEST_CASE("direct sums multiply blockwise") {
  auto k = Field::make(2, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  auto x2 = builtin_truncated_poly(k, 2);  // one dimensional square zero
  auto S = direct_sum(u3, x2);
  CHECK(S->dim == 4);
  CHECK(S->nclass == 3);
  Vec b1 = {1, 0, 0, 0}, b2 = {0, 1, 0, 0}, b3 = {0, 0, 1, 0}, b4 = {0, 0, 0, 1};
  CHECK(S->mul(b1, b2) == b3);
  CHECK(S->mul(b4, b4) == Vec{0, 0, 0, 0});
  CHECK(S->mul(b1, b4) == Vec{0, 0, 0, 0});
  CHECK(S->mul(b4, b1) == Vec{0, 0, 0, 0});
  CHECK(S->group_size() == 16);

  auto k3 = Field::make(3, 1);
  CHECK_THROWS_AS(direct_sum(u3, builtin_truncated_poly(k3, 2)), AlgError);
}

TEST_CASE("scalar extension preserves products and power ideals") {
  auto k = Field::make(2, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  auto E = extend_scalars(u3, 2);
  CHECK(E->field->q() == 4);
  CHECK(E->dim == 3);
  CHECK(E->nclass == 3);
  CHECK(E->defined_over == 2);
  CHECK(E->mul({1, 0, 0}, {0, 1, 0}) == Vec{0, 0, 1});
  // products with scalars from the big field follow bilinearity
  Fel t = 2;  // a generator of F4 over F2
  CHECK(E->mul({t, 0, 0}, {0, 1, 0}) == Vec{0, 0, t});
  CHECK(power_ideal(*E, 2).rank() == power_ideal(*u3, 2).rank());
  CHECK(power_ideal(*E, 3).rank() == 0);
  CHECK(extend_scalars(u3, 1) == u3);
  CHECK(E->group_size() == 64);
}

TEST_CASE("coordinatewise frobenius demands rational constants") {
  auto k = Field::make(2, 2);
  auto u3 = builtin_upper_triangular(k, 3);
  Vec v = {2, 3, 1};
  Vec w = frobenius_on_vec(*u3, v, 2);
  CHECK(w == Vec{3, 2, 1});
  CHECK(frobenius_on_vec(*u3, w, 2) == v);
  // squaring respects the twisted product
  Vec a = {2, 0, 0}, b = {0, 3, 0};
  CHECK(frobenius_on_vec(*u3, u3->mul(a, b), 2) ==
        u3->mul(frobenius_on_vec(*u3, a, 2), frobenius_on_vec(*u3, b, 2)));

  std::vector<Fel> sct(8, 0);
  sct[0 * 4 + 0 * 2 + 1] = 2;  // b1 b1 = t b2
  auto A = algebra_from_constants(k, 2, sct);
  CHECK_THROWS_AS(frobenius_on_vec(*A, {1, 0}, 2), AlgError);
}

TEST_CASE("subalgebra closure and membership") {
  auto k = Field::make(2, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  CHECK(is_subalgebra(*u3, Subspace::span(*k, 3, {{1, 0, 0}, {0, 0, 1}})));
  CHECK(!is_subalgebra(*u3, Subspace::span(*k, 3, {{1, 0, 0}, {0, 1, 0}})));
  Subspace c = subalgebra_closure(*u3, {{1, 1, 0}});
  CHECK(c.rank() == 2);
  CHECK(c.contains(*k, {1, 1, 0}));
  CHECK(c.contains(*k, {0, 0, 1}));
  CHECK(subalgebra_closure(*u3, {}).rank() == 0);
}

TEST_CASE("subalgebra views translate coordinates faithfully") {
  auto k = Field::make(2, 1);
  auto u4 = builtin_upper_triangular(k, 4);
  Subspace sq = power_ideal(*u4, 2);
  SubAlgebra S = subalgebra(u4, sq);
  CHECK(S.alg->dim == 3);
  CHECK(S.alg->nclass == 2);  // the square of u4 multiplies to zero
  CHECK(S.alg->defined_over == 2);
  for (std::uint64_t t = 0; t < 8; ++t) {
    Vec c = unrank_vec(*k, 3, t);
    CHECK(S.from_parent(S.to_parent(c)) == c);
  }
  // products in the view agree with products upstairs
  Vec a = {1, 1, 0}, b = {0, 1, 1};
  CHECK(S.to_parent(S.alg->mul(a, b)) == u4->mul(S.to_parent(a), S.to_parent(b)));
  CHECK_THROWS_AS(subalgebra(u4, Subspace::span(*k, 6, {{1, 0, 0, 0, 0, 0}, {0, 1, 0, 0, 0, 0}})),
                  AlgError);
}

TEST_CASE("intermediate subspace scan finds the full lattice") {
  auto k = Field::make(2, 1);
  auto u3 = builtin_upper_triangular(k, 3);
  Subspace lo = power_ideal(*u3, 2);
  Subspace hi = Subspace::full(3);
  auto spaces = subspaces_between(*u3, lo, hi);
  // one rank 1, three rank 2, one rank 3: the lattice over the quotient plane
  CHECK(spaces.size() == 5);
  int by_rank[4] = {0, 0, 0, 0};
  for (const auto& s : spaces) {
    CHECK(lo.subset_of(*k, s));
    CHECK(s.subset_of(*k, hi));
    by_rank[s.rank()]++;
  }
  CHECK(by_rank[1] == 1);
  CHECK(by_rank[2] == 3);
  CHECK(by_rank[3] == 1);
  CHECK(std::is_sorted(spaces.begin(), spaces.end()));
  CHECK_THROWS_AS(subspaces_between(*u3, hi, lo), AlgError);
}

TEST_CASE("group sizes are guarded against overflow") {
  auto k = Field::make(2, 1);
  CHECK(builtin_upper_triangular(k, 3)->group_size() == 8);
  CHECK(builtin_upper_triangular(k, 4)->group_size() == 64);
  auto big = builtin_truncated_poly(k, 64);
  CHECK_THROWS_AS(big->group_size(), AlgError);
}

TEST_CASE("fingerprints separate structurally distinct algebras") {
  auto k = Field::make(2, 1);
  auto a = builtin_upper_triangular(k, 3);
  auto b = builtin_truncated_poly(k, 4);
  auto c = builtin_upper_triangular(k, 3);
  CHECK(a->fingerprint() == c->fingerprint());
  CHECK(a->fingerprint() != b->fingerprint());
  CHECK(a->fingerprint() != extend_scalars(a, 2)->fingerprint());
}
