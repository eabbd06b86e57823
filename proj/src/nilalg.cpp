#include "algroups/nilalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "algroups/linalg.hpp"

namespace algroups {

namespace {

std::string triple_str(int i, int j, int l) {
  std::ostringstream os;
  os << "{\"triple\":[" << i << "," << j << "," << l << "]}";
  return os.str();
}

bool is_pow_of(std::uint32_t q0, int p) {
  if (q0 < 2) return false;
  while (q0 % (std::uint32_t)p == 0) q0 /= (std::uint32_t)p;
  return q0 == 1;
}

}  // namespace

Subspace Subspace::span(const Field& k, int ambient, const std::vector<Vec>& vectors) {
  std::vector<Fel> m;
  m.reserve(vectors.size() * ambient);
  for (const auto& v : vectors) {
    if ((int)v.size() != ambient)
      throw AlgError(Errc::BadParameter, "vector length does not match ambient dimension");
    m.insert(m.end(), v.begin(), v.end());
  }
  int r = linalg::rref(k, m, (int)vectors.size(), ambient);
  Subspace s(ambient);
  s.rank_ = r;
  s.rows_.assign(m.begin(), m.begin() + (size_t)r * ambient);
  return s;
}

Subspace Subspace::full(int ambient) {
  Subspace s(ambient);
  s.rank_ = ambient;
  s.rows_.assign((size_t)ambient * ambient, 0);
  for (int i = 0; i < ambient; ++i) s.rows_[(size_t)i * ambient + i] = 1;
  return s;
}

Vec Subspace::row(int i) const {
  return Vec(rows_.begin() + (size_t)i * ambient_, rows_.begin() + (size_t)(i + 1) * ambient_);
}

bool Subspace::contains(const Field& k, const Vec& v) const {
  if ((int)v.size() != ambient_)
    throw AlgError(Errc::BadParameter, "vector length does not match ambient dimension");
  Vec w = v;
  for (int i = 0; i < rank_; ++i) {
    int pc = -1;
    for (int j = 0; j < ambient_; ++j)
      if (rows_[(size_t)i * ambient_ + j] != 0) {
        pc = j;
        break;
      }
    Fel f = w[pc];
    if (f == 0) continue;
    for (int j = 0; j < ambient_; ++j)
      w[j] = k.sub(w[j], k.mul(f, rows_[(size_t)i * ambient_ + j]));
  }
  for (Fel x : w)
    if (x != 0) return false;
  return true;
}

Vec Subspace::coords(const Field& k, const Vec& v) const {
  Vec c(rank_, 0);
  for (int i = 0; i < rank_; ++i) {
    for (int j = 0; j < ambient_; ++j)
      if (rows_[(size_t)i * ambient_ + j] != 0) {
        c[i] = v[j];  // reduced form: pivot column is zero in every other row
        break;
      }
  }
  if (lift(k, c) != v)
    throw AlgError(Errc::BadParameter, "vector is not in the subspace");
  return c;
}

Vec Subspace::lift(const Field& k, const Vec& c) const {
  if ((int)c.size() != rank_)
    throw AlgError(Errc::BadParameter, "coordinate length does not match rank");
  Vec v(ambient_, 0);
  for (int i = 0; i < rank_; ++i) {
    if (c[i] == 0) continue;
    for (int j = 0; j < ambient_; ++j)
      v[j] = k.add(v[j], k.mul(c[i], rows_[(size_t)i * ambient_ + j]));
  }
  return v;
}

Subspace Subspace::sum(const Field& k, const Subspace& o) const {
  if (ambient_ != o.ambient_) throw AlgError(Errc::BadParameter, "ambient dimensions differ");
  std::vector<Vec> all;
  for (int i = 0; i < rank_; ++i) all.push_back(row(i));
  for (int i = 0; i < o.rank_; ++i) all.push_back(o.row(i));
  return span(k, ambient_, all);
}

bool Subspace::subset_of(const Field& k, const Subspace& o) const {
  for (int i = 0; i < rank_; ++i)
    if (!o.contains(k, row(i))) return false;
  return true;
}

std::uint64_t Subspace::size(const Field& k) const {
  std::uint64_t n = 1;
  for (int i = 0; i < rank_; ++i) n *= (std::uint64_t)k.q();
  return n;
}

bool Algebra::is_zero(const Vec& v) const {
  for (Fel x : v)
    if (x) return false;
  return true;
}

Vec Algebra::add(const Vec& a, const Vec& b) const {
  Vec r(dim);
  for (int i = 0; i < dim; ++i) r[i] = field->add(a[i], b[i]);
  return r;
}

Vec Algebra::sub(const Vec& a, const Vec& b) const {
  Vec r(dim);
  for (int i = 0; i < dim; ++i) r[i] = field->sub(a[i], b[i]);
  return r;
}

Vec Algebra::neg(const Vec& a) const {
  Vec r(dim);
  for (int i = 0; i < dim; ++i) r[i] = field->neg(a[i]);
  return r;
}

Vec Algebra::scale(Fel c, const Vec& a) const {
  Vec r(dim);
  for (int i = 0; i < dim; ++i) r[i] = field->mul(c, a[i]);
  return r;
}

Vec Algebra::mul(const Vec& a, const Vec& b) const {
  Vec r(dim, 0);
  const Field& k = *field;
  for (int i = 0; i < dim; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < dim; ++j) {
      if (b[j] == 0) continue;
      const auto& nz = sparse[(size_t)i * dim + j];
      if (nz.empty()) continue;
      Fel w = k.mul(a[i], b[j]);
      for (const auto& [l, c] : nz) r[l] = k.add(r[l], k.mul(w, c));
    }
  }
  return r;
}

std::uint64_t Algebra::group_size() const {
  std::uint64_t n = 1;
  for (int i = 0; i < dim; ++i) {
    if (n > (std::uint64_t(1) << 62) / field->q())
      throw AlgError(Errc::TooLarge, "group size overflows");
    n *= (std::uint64_t)field->q();
  }
  return n;
}

std::string Algebra::fingerprint() const {
  std::ostringstream os;
  os << field->p() << ":" << field->m() << ":";
  for (int c : field->modulus()) os << c << ",";
  os << ":" << dim << ":" << defined_over << ":";
  for (Fel c : sc) os << c << ",";
  return os.str();
}

AlgebraRef algebra_from_constants(FieldRef k, int dim, std::vector<Fel> sc,
                                  std::uint32_t defined_over) {
  if (dim < 1) throw AlgError(Errc::BadParameter, "dimension must be >= 1");
  if (sc.size() != (size_t)dim * dim * dim)
    throw AlgError(Errc::BadParameter, "structure constant table has wrong size");
  for (Fel c : sc)
    if (c >= k->q()) throw AlgError(Errc::FieldMismatch, "structure constant out of field range");
  auto A = std::make_shared<Algebra>();
  A->field = k;
  A->dim = dim;
  A->sc = std::move(sc);
  if (defined_over == 0) defined_over = k->q();
  if (!is_pow_of(defined_over, k->p()))
    throw AlgError(Errc::BadParameter, "defined_over must be a power of p");
  {
    // subfield degree must divide m, and the constants must lie in it
    int e = 0;
    std::uint32_t t = defined_over;
    while (t > 1) {
      t /= (std::uint32_t)k->p();
      ++e;
    }
    if (e == 0 || k->m() % e != 0)
      throw AlgError(Errc::NotDefinedOverSubfield, "declared subfield does not embed");
    for (Fel c : A->sc)
      if (k->frob_pow(c, defined_over) != c)
        throw AlgError(Errc::NotDefinedOverSubfield,
                       "structure constant not fixed by the declared subfield");
  }
  A->defined_over = defined_over;
  A->sparse.assign((size_t)dim * dim, {});
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l) {
        Fel c = A->sc_at(i, j, l);
        if (c) A->sparse[(size_t)i * dim + j].push_back({l, c});
      }
  // associativity on basis triples
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int l = 0; l < dim; ++l) {
        Vec bi(dim, 0), bj(dim, 0), bl(dim, 0);
        bi[i] = bj[j] = bl[l] = 1;
        if (A->mul(A->mul(bi, bj), bl) != A->mul(bi, A->mul(bj, bl)))
          throw AlgError(Errc::NotAssociative, "associativity fails on a basis triple",
                         triple_str(i, j, l));
      }
  // nilpotency: descend the power filtration
  Subspace P = Subspace::full(dim);
  int n = 1;
  while (P.rank() > 0) {
    std::vector<Vec> prods;
    for (int s = 0; s < P.rank(); ++s)
      for (int i = 0; i < dim; ++i) {
        Vec bi(dim, 0);
        bi[i] = 1;
        prods.push_back(A->mul(P.row(s), bi));
      }
    Subspace Q = Subspace::span(*k, dim, prods);
    if (Q.rank() == P.rank()) {
      std::ostringstream os;
      os << "{\"stable_rank\":" << Q.rank() << "}";
      throw AlgError(Errc::NotNilpotent, "power filtration stabilizes above zero", os.str());
    }
    P = Q;
    ++n;
  }
  A->nclass = n;
  return A;
}

AlgebraRef builtin_upper_triangular(FieldRef k, int n) {
  if (n < 2) throw AlgError(Errc::BadParameter, "upper_triangular needs n >= 2");
  std::vector<std::pair<int, int>> pairs;
  for (int d = 1; d < n; ++d)
    for (int i = 1; i + d <= n; ++i) pairs.push_back({i, i + d});
  int dim = (int)pairs.size();
  auto index = [&](int i, int j) {
    for (int t = 0; t < dim; ++t)
      if (pairs[t] == std::pair<int, int>{i, j}) return t;
    return -1;
  };
  std::vector<Fel> sc((size_t)dim * dim * dim, 0);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) {
      auto [i, j] = pairs[a];
      auto [s, t] = pairs[b];
      if (j == s) sc[((size_t)a * dim + b) * dim + index(i, t)] = 1;
    }
  return algebra_from_constants(std::move(k), dim, std::move(sc));
}

AlgebraRef builtin_truncated_poly(FieldRef k, int n) {
  if (n < 2) throw AlgError(Errc::BadParameter, "truncated_poly needs n >= 2");
  int dim = n - 1;  // basis t, ..., t^{n-1}
  std::vector<Fel> sc((size_t)dim * dim * dim, 0);
  for (int i = 1; i <= dim; ++i)
    for (int j = 1; j <= dim; ++j)
      if (i + j <= dim) sc[(((size_t)(i - 1) * dim) + (j - 1)) * dim + (i + j - 1)] = 1;
  return algebra_from_constants(std::move(k), dim, std::move(sc));
}

AlgebraRef direct_sum(const AlgebraRef& a, const AlgebraRef& b) {
  if (!a->field->same(*b->field))
    throw AlgError(Errc::FieldMismatch, "direct sum needs a common field");
  int dim = a->dim + b->dim;
  std::vector<Fel> sc((size_t)dim * dim * dim, 0);
  for (int i = 0; i < a->dim; ++i)
    for (int j = 0; j < a->dim; ++j)
      for (int l = 0; l < a->dim; ++l) sc[((size_t)i * dim + j) * dim + l] = a->sc_at(i, j, l);
  for (int i = 0; i < b->dim; ++i)
    for (int j = 0; j < b->dim; ++j)
      for (int l = 0; l < b->dim; ++l)
        sc[((size_t)(a->dim + i) * dim + (a->dim + j)) * dim + (a->dim + l)] = b->sc_at(i, j, l);
  int p = a->field->p();
  auto exp_of = [&](std::uint32_t q0) {
    int e = 0;
    while (q0 > 1) {
      q0 /= (std::uint32_t)p;
      ++e;
    }
    return e;
  };
  int ea = exp_of(a->defined_over), eb = exp_of(b->defined_over);
  int el = ea / std::gcd(ea, eb) * eb;
  std::uint32_t q0 = 1;
  for (int i = 0; i < el; ++i) q0 *= (std::uint32_t)p;
  return algebra_from_constants(a->field, dim, std::move(sc), q0);
}

Subspace power_ideal(const Algebra& A, int j) {
  if (j < 1) throw AlgError(Errc::BadParameter, "power index must be >= 1");
  Subspace P = Subspace::full(A.dim);
  for (int step = 2; step <= j; ++step) {
    std::vector<Vec> prods;
    for (int s = 0; s < P.rank(); ++s)
      for (int i = 0; i < A.dim; ++i) {
        Vec bi(A.dim, 0);
        bi[i] = 1;
        prods.push_back(A.mul(P.row(s), bi));
      }
    P = Subspace::span(*A.field, A.dim, prods);
    if (P.rank() == 0) break;
  }
  return P;
}

AlgebraRef extend_scalars(const AlgebraRef& A, int n) {
  if (n < 1) throw AlgError(Errc::BadParameter, "extension degree must be >= 1");
  if (n == 1) return A;
  auto k2 = Field::make(A->field->p(), A->field->m() * n);
  Embedding e(A->field, k2);
  std::vector<Fel> sc(A->sc.size());
  for (size_t i = 0; i < sc.size(); ++i) sc[i] = e(A->sc[i]);
  return algebra_from_constants(k2, A->dim, std::move(sc), A->defined_over);
}

Vec frobenius_on_vec(const Algebra& A, const Vec& v, std::uint32_t q0) {
  for (Fel c : A.sc)
    if (A.field->frob_pow(c, q0) != c)
      throw AlgError(Errc::NotDefinedOverSubfield,
                     "structure constants are not fixed by x -> x^q0");
  Vec r(A.dim);
  for (int i = 0; i < A.dim; ++i) r[i] = A.field->frob_pow(v[i], q0);
  return r;
}

bool is_subalgebra(const Algebra& A, const Subspace& U) {
  for (int s = 0; s < U.rank(); ++s)
    for (int t = 0; t < U.rank(); ++t)
      if (!U.contains(*A.field, A.mul(U.row(s), U.row(t)))) return false;
  return true;
}

Subspace subalgebra_closure(const Algebra& A, const std::vector<Vec>& gens) {
  Subspace S = Subspace::span(*A.field, A.dim, gens);
  for (;;) {
    std::vector<Vec> prods;
    for (int s = 0; s < S.rank(); ++s)
      for (int t = 0; t < S.rank(); ++t) prods.push_back(A.mul(S.row(s), S.row(t)));
    Subspace next = S.sum(*A.field, Subspace::span(*A.field, A.dim, prods));
    if (next == S) return S;
    S = next;
  }
}

Subspace annihilator_ideal(const Algebra& A) {
  const int d = A.dim;
  std::vector<Fel> m((size_t)2 * d * d * d, 0);
  size_t r = 0;
  for (int i = 0; i < d; ++i)
    for (int l = 0; l < d; ++l) {
      for (int j = 0; j < d; ++j) m[r * d + j] = A.sc_at(j, i, l);  // (x b_i)_l
      ++r;
      for (int j = 0; j < d; ++j) m[r * d + j] = A.sc_at(i, j, l);  // (b_i x)_l
      ++r;
    }
  auto basis = linalg::kernel(*A.field, m, (int)r, d);
  return Subspace::span(*A.field, d, basis);
}

SubAlgebra subalgebra(const AlgebraRef& A, const Subspace& U) {
  if (!is_subalgebra(*A, U))
    throw AlgError(Errc::BadParameter, "subspace is not multiplicatively closed");
  const int r = U.rank();
  std::vector<Fel> sc((size_t)r * r * r, 0);
  for (int s = 0; s < r; ++s)
    for (int t = 0; t < r; ++t) {
      Vec prod = U.coords(*A->field, A->mul(U.row(s), U.row(t)));
      for (int l = 0; l < r; ++l) sc[((size_t)s * r + t) * r + l] = prod[l];
    }
  // keep the parent's rationality flag when the induced constants allow it
  std::uint32_t q0 = A->defined_over;
  bool ok = true;
  for (Fel c : sc)
    if (A->field->frob_pow(c, q0) != c) {
      ok = false;
      break;
    }
  return SubAlgebra{algebra_from_constants(A->field, r, std::move(sc), ok ? q0 : A->field->q()),
                    U};
}

Vec SubAlgebra::to_parent(const Vec& v) const { return space.lift(*alg->field, v); }
Vec SubAlgebra::from_parent(const Vec& v) const { return space.coords(*alg->field, v); }

std::vector<Subspace> subspaces_between(const Algebra& A, const Subspace& lo, const Subspace& hi) {
  if (!lo.subset_of(*A.field, hi))
    throw AlgError(Errc::BadParameter, "lower space is not inside the upper space");
  if (hi.size(*A.field) > (std::uint64_t(1) << 20))
    throw AlgError(Errc::TooLarge, "too many vectors to scan");
  const Field& k = *A.field;
  // all elements of hi
  std::vector<Vec> elems;
  std::uint64_t total = hi.size(k);
  for (std::uint64_t t = 0; t < total; ++t) {
    Vec c(hi.rank());
    std::uint64_t x = t;
    for (int i = 0; i < hi.rank(); ++i) {
      c[i] = (Fel)(x % k.q());
      x /= k.q();
    }
    elems.push_back(hi.lift(k, c));
  }
  std::set<Subspace> seen{lo};
  std::vector<Subspace> queue{lo};
  while (!queue.empty()) {
    Subspace s = queue.back();
    queue.pop_back();
    for (const auto& v : elems) {
      if (s.contains(k, v)) continue;
      Subspace next = s.sum(k, Subspace::span(k, A.dim, {v}));
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace algroups
