#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "algroups/algrp.hpp"

namespace algroups {

// Exact element of Z[zeta_E] for a prime-power level E, held in the power
// basis 1, zeta, ..., zeta^{phi(E)-1} and always fully reduced.
struct CyclotomicInteger {
  std::uint64_t level = 1;
  std::vector<long long> coeffs = {0};  // length phi(level)

  static CyclotomicInteger zero(std::uint64_t E);
  static CyclotomicInteger integer(std::uint64_t E, long long n);
  static CyclotomicInteger zeta_pow(std::uint64_t E, std::uint64_t k);

  bool is_zero() const;
  bool is_integer() const;       // all non-constant coordinates vanish
  long long integer_value() const;  // requires is_integer

  CyclotomicInteger conj() const;            // zeta -> zeta^{-1}
  CyclotomicInteger scaled(long long n) const;
  CyclotomicInteger raised(std::uint64_t E) const;  // to a multiple level

  friend bool operator==(const CyclotomicInteger&, const CyclotomicInteger&) = default;
};

// phi(E) for a prime power E; rejects other levels
std::uint64_t cyclo_phi(std::uint64_t E);
std::uint64_t cyclo_common_level(std::uint64_t a, std::uint64_t b);

CyclotomicInteger cyclo_add(const CyclotomicInteger& a, const CyclotomicInteger& b);
CyclotomicInteger cyclo_sub(const CyclotomicInteger& a, const CyclotomicInteger& b);
CyclotomicInteger cyclo_mul(const CyclotomicInteger& a, const CyclotomicInteger& b);

// chi(g) as an exact root of unity at the requested level
CyclotomicInteger character_value(const LinearCharacter& chi, const GroupElement& g,
                                  std::uint64_t level);

inline constexpr std::uint64_t kClassFunctionBound = std::uint64_t(1) << 12;

// Exact class function on the subspace-group 1+space, stored on its
// conjugacy classes.
struct ClassFunction {
  AlgebraRef alg;
  Subspace space;
  std::uint64_t level = 1;
  std::vector<std::pair<GroupElement, std::uint64_t>> classes;
  std::vector<CyclotomicInteger> values;
  std::unordered_map<std::uint64_t, int> class_of;  // element code -> class index

  static ClassFunction zero(AlgebraRef A, const Subspace& U, std::uint64_t level);

  const CyclotomicInteger& value_at(const GroupElement& g) const;
  CyclotomicInteger degree() const { return value_at(GroupElement{Vec(alg->dim, 0)}); }
  ClassFunction raised(std::uint64_t E) const;
};

ClassFunction class_function_of_character(AlgebraRef A, const Subspace& U,
                                          const LinearCharacter& chi, std::uint64_t level);
ClassFunction trivial_character(AlgebraRef A, const Subspace& U, std::uint64_t level);

ClassFunction cf_add(const ClassFunction& f, const ClassFunction& g);
ClassFunction cf_sub(const ClassFunction& f, const ClassFunction& g);
ClassFunction cf_mul(const ClassFunction& f, const ClassFunction& g);  // pointwise
ClassFunction cf_conj(const ClassFunction& f);

// Frobenius induction in division-free coset form, from 1+U to the larger
// subspace-group 1+W.
ClassFunction induce(const ClassFunction& f, const Subspace& W);
ClassFunction restrict_to(const ClassFunction& f, const Subspace& V);

// (1/|H|) sum over H of f1 * conj(f2); the class sum must come out as an
// exact multiple of |H| or NotAnInteger is thrown.
long long inner_product(const ClassFunction& f1, const ClassFunction& f2);
bool is_irreducible(const ClassFunction& f);

}  // namespace algroups
