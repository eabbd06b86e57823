#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "algroups/gf.hpp"

namespace algroups {

using Vec = std::vector<Fel>;

// k-subspace of k^ambient held as its unique reduced row echelon basis,
// so equal subspaces have equal representations.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int ambient) : ambient_(ambient) {}

  static Subspace span(const Field& k, int ambient, const std::vector<Vec>& vectors);
  static Subspace full(int ambient);

  int ambient() const { return ambient_; }
  int rank() const { return rank_; }
  const std::vector<Fel>& rows() const { return rows_; }
  Vec row(int i) const;

  bool contains(const Field& k, const Vec& v) const;
  // coordinates w.r.t. the echelon basis (requires containment)
  Vec coords(const Field& k, const Vec& v) const;
  // the ambient vector with given echelon coordinates
  Vec lift(const Field& k, const Vec& coords) const;

  Subspace sum(const Field& k, const Subspace& o) const;
  bool subset_of(const Field& k, const Subspace& o) const;
  std::uint64_t size(const Field& k) const;  // q^rank

  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && rank_ == o.rank_ && rows_ == o.rows_;
  }
  bool operator<(const Subspace& o) const {  // deterministic container order
    if (rank_ != o.rank_) return rank_ < o.rank_;
    return rows_ < o.rows_;
  }

 private:
  int ambient_ = 0;
  int rank_ = 0;
  std::vector<Fel> rows_;  // rank x ambient, row-major, reduced
};

// Finite-dimensional associative nilpotent algebra over a finite field,
// given by structure constants b_i b_j = sum_l sc[i][j][l] b_l.
struct Algebra {
  FieldRef field;
  int dim = 0;
  std::vector<Fel> sc;  // dim*dim*dim, index ((i*dim)+j)*dim+l
  int nclass = 0;       // least n with A^n = 0
  std::uint32_t defined_over = 0;  // subfield size containing all sc entries
  // nonzero (l, c) pairs per (i,j), for fast products
  std::vector<std::vector<std::pair<int, Fel>>> sparse;

  Fel sc_at(int i, int j, int l) const { return sc[((size_t)i * dim + j) * dim + l]; }

  Vec zero() const { return Vec(dim, 0); }
  bool is_zero(const Vec& v) const;
  Vec add(const Vec& a, const Vec& b) const;
  Vec sub(const Vec& a, const Vec& b) const;
  Vec neg(const Vec& a) const;
  Vec scale(Fel c, const Vec& a) const;
  Vec mul(const Vec& a, const Vec& b) const;

  std::uint64_t group_size() const;  // q^dim, TooLarge beyond 2^62
  std::string fingerprint() const;   // stable identity for caching
};

using AlgebraRef = std::shared_ptr<const Algebra>;

// Build and validate; throws NotAssociative / NotNilpotent with a witness,
// BadParameter on malformed input.  defined_over = 0 means "the whole field".
AlgebraRef algebra_from_constants(FieldRef k, int dim, std::vector<Fel> sc,
                                  std::uint32_t defined_over = 0);

// Strictly upper triangular n x n matrices; basis e_{ij} ordered by
// superdiagonal (j - i, then i), so powers of the algebra sit at the tail.
AlgebraRef builtin_upper_triangular(FieldRef k, int n);
// t k[t] / (t^n); basis t, t^2, ..., t^{n-1}.
AlgebraRef builtin_truncated_poly(FieldRef k, int n);
AlgebraRef direct_sum(const AlgebraRef& a, const AlgebraRef& b);

// A^j as a subspace of A (A^1 = everything).
Subspace power_ideal(const Algebra& A, int j);

// A tensor k', k' the canonical degree-n extension; same basis labels.
AlgebraRef extend_scalars(const AlgebraRef& A, int n);

// Coordinatewise x -> x^{q0}; an algebra automorphism when the structure
// constants are fixed by it (checked, NotDefinedOverSubfield otherwise).
Vec frobenius_on_vec(const Algebra& A, const Vec& v, std::uint32_t q0);

bool is_subalgebra(const Algebra& A, const Subspace& U);
Subspace subalgebra_closure(const Algebra& A, const std::vector<Vec>& gens);
Subspace annihilator_ideal(const Algebra& A);  // {x : xA = Ax = 0}

// U as an algebra in its own right; rows give its basis inside A.
struct SubAlgebra {
  AlgebraRef alg;
  Subspace space;  // inside the parent
  Vec to_parent(const Vec& v) const;    // coordinates: alg -> parent
  Vec from_parent(const Vec& v) const;  // requires membership
};
SubAlgebra subalgebra(const AlgebraRef& A, const Subspace& U);

// All subspaces U with lo <= U <= hi (each is automatically a subalgebra
// when hi*hi <= lo).  Sorted deterministically.
std::vector<Subspace> subspaces_between(const Algebra& A, const Subspace& lo, const Subspace& hi);

}  // namespace algroups
