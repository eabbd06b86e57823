#pragma once

#include <cstdint>
#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

#include "algroups/nilalg.hpp"

namespace algroups {

// An element 1+a of the unit group attached to a nilpotent algebra, stored
// through its algebra part a.
struct GroupElement {
  Vec a;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

inline constexpr std::uint64_t kEnumerationBound = std::uint64_t(1) << 20;

GroupElement g_identity(const Algebra& A);
GroupElement g_mul(const Algebra& A, const GroupElement& g, const GroupElement& h);
GroupElement g_inv(const Algebra& A, const GroupElement& g);
GroupElement g_pow(const Algebra& A, const GroupElement& g, long long e);
// (g,h) = g h g^-1 h^-1
GroupElement g_commutator(const Algebra& A, const GroupElement& g, const GroupElement& h);
// h g h^-1
GroupElement g_conjugate(const Algebra& A, const GroupElement& g, const GroupElement& h);
std::uint64_t element_order(const Algebra& A, const GroupElement& g);

// Elements are ordered by a packed numeric code with the first coefficient
// least significant; every deterministic choice below refers to this order.
std::uint64_t element_code(const Algebra& A, const GroupElement& g);
GroupElement element_from_code(const Algebra& A, std::uint64_t code);

// All elements 1+a with a in the given multiplicatively closed subspace,
// sorted by code.
std::vector<GroupElement> enumerate_group(const Algebra& A, const Subspace& U);
std::vector<GroupElement> enumerate_group(const Algebra& A);

// A verified generating set for 1+U: scalar-multiple candidates 1 + t^j u_i
// over a prime-field basis of scalars, extended deterministically until the
// closure fills the group.
std::vector<GroupElement> generating_set(const Algebra& A, const Subspace& U);

// Closure of a generating list under multiplication, sorted by code.
std::vector<GroupElement> subgroup_closure(const Algebra& A, const std::vector<GroupElement>& gens,
                                           std::uint64_t bound = kEnumerationBound);

// The subgroup generated by all commutators (t,s) with t in 1+U, s in 1+W,
// as a sorted element list.  Computed from generator commutators saturated
// under conjugation, which yields the same subgroup as the all-pairs closure.
std::vector<GroupElement> commutator_subgroup(const Algebra& A, const Subspace& U,
                                              const Subspace& W);

// Cyclic decomposition of T^ab for T = 1+U, with enough structure retained
// to take discrete logarithms of arbitrary elements of T.
struct AbelianQuotient {
  AlgebraRef alg;
  Subspace space;
  std::vector<GroupElement> generators;
  std::vector<std::uint64_t> orders;  // weakly decreasing prime powers
  std::vector<GroupElement> derived;  // (T,T), sorted by code

  std::uint64_t size() const;      // product of orders
  std::uint64_t exponent() const;  // lcm of orders
  // exponent tuple of g modulo the derived subgroup, entry i in [0, orders[i])
  std::vector<std::uint64_t> log(const GroupElement& g) const;

  // codes of the subgroups D, <g_1>D, <g_1,g_2>D, ... up to <g_1..g_{r-1}>D
  std::vector<std::unordered_set<std::uint64_t>> levels;
};
using AbelianQuotientRef = std::shared_ptr<const AbelianQuotient>;

AbelianQuotientRef abelianize(const AlgebraRef& A, const Subspace& U);

// Orbits of conjugation, ordered by their lex-minimal representative.  The
// subspace form computes the classes of 1+U under its own conjugation.
std::vector<std::pair<GroupElement, std::uint64_t>> conjugacy_classes(const Algebra& A);
std::vector<std::pair<GroupElement, std::uint64_t>> conjugacy_classes(const Algebra& A,
                                                                      const Subspace& U);

// chi(g) = zeta_E ^ eval_exponent(g) with E the exponent of the domain.
struct LinearCharacter {
  AbelianQuotientRef domain;
  std::vector<std::uint64_t> exponents;

  std::uint64_t eval_exponent(const GroupElement& g) const;
  bool is_trivial() const;
  friend bool operator==(const LinearCharacter& a, const LinearCharacter& b) {
    return a.domain == b.domain && a.exponents == b.exponents;
  }
};

// All characters of the quotient, the trivial one first, ordered by the
// mixed-radix exponent tuple with the first entry fastest.
std::vector<LinearCharacter> character_group(const AbelianQuotientRef& Q);

// The set of h in 1+A fixing chi under conjugation of its domain group
// T = 1+U.  Throws NotNormal when T is not normal, and
// StabilizerNotAlgebraSubgroup when the fixer is not of the form 1+V for a
// multiplicatively closed subspace V (a reportable finding, not a crash).
Subspace stabilizer_of_character(const Algebra& A, const Subspace& U, const LinearCharacter& chi);

}  // namespace algroups
