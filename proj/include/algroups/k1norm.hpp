#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "algroups/algrp.hpp"
#include "algroups/gf.hpp"
#include "algroups/nilalg.hpp"

namespace algroups {

// Element of the local ring R = k + A obtained by adjoining a unit to the
// nilpotent algebra.  Units are exactly the elements with nonzero scalar.
struct HullElement {
  Fel scalar = 0;
  Vec nil;

  friend bool operator==(const HullElement&, const HullElement&) = default;
};

HullElement hull_zero(const Algebra& A);
HullElement hull_one(const Algebra& A);
HullElement hull_from_group(const GroupElement& g);
HullElement hull_add(const Algebra& A, const HullElement& x, const HullElement& y);
HullElement hull_sub(const Algebra& A, const HullElement& x, const HullElement& y);
HullElement hull_mul(const Algebra& A, const HullElement& x, const HullElement& y);
HullElement hull_scale(const Algebra& A, Fel c, const HullElement& x);
HullElement hull_inv(const Algebra& A, const HullElement& x);  // NotInvertible on nonunits
bool hull_is_unit(const HullElement& x);

// Class of a unit in (R^x)^ab = k^x  x  G^ab, the concrete form of the
// first K-group of the local ring R.
struct UnitClass {
  Fel scalar = 1;
  std::vector<std::uint64_t> unipotent;  // exponent tuple in the reference quotient
  AbelianQuotientRef ab;
};

UnitClass unit_class_of(const Algebra& A, const AbelianQuotientRef& ab, const HullElement& u);
UnitClass unit_class_mul(const UnitClass& a, const UnitClass& b);
bool unit_class_eq(const UnitClass& a, const UnitClass& b);

// Determinant of an invertible matrix over the local ring R, valued in
// (R^x)^ab.  Unit-pivot Gaussian elimination: transvections are free, row
// swaps contribute the class of -1, the diagonal contributes its classes.
// A nonzero choice_seed randomizes the pivot choice among eligible rows;
// the resulting class is independent of that choice.
UnitClass dieudonne_det(const Algebra& A, const AbelianQuotientRef& ab,
                        std::vector<HullElement> M, int n, std::uint64_t choice_seed = 0);

// Base-change bookkeeping for A' = A tensored up to the degree-n extension
// field, with the k-basis 1, t, ..., t^{n-1} of k' and the splitting of k'
// coordinates back into that basis.
struct ExtensionContext {
  AlgebraRef base;
  AlgebraRef ext;
  int n = 1;
  Fel t = 0;  // canonical generator of k' over k

  // alpha in k' as coefficients over k: alpha = sum_i out[i] * t^i
  std::vector<Fel> decompose(Fel alpha) const;

  FieldRef fp;               // prime field
  std::vector<Fel> dinv;     // inverse basis matrix over the prime field
};

ExtensionContext make_extension(const AlgebraRef& A, int n);

// The n x n matrix over R of left multiplication by g (an element of the
// extended group) on R' in the basis 1, t, ..., t^{n-1}.
std::vector<HullElement> multiplication_matrix(const ExtensionContext& ctx,
                                               const GroupElement& g);

// Norm of one element of G' into G^ab, through the Dieudonne determinant.
std::vector<std::uint64_t> norm_of_element(const ExtensionContext& ctx,
                                           const AbelianQuotientRef& dst,
                                           const GroupElement& g,
                                           std::uint64_t choice_seed = 0);

inline constexpr std::uint64_t kTabulationBound = std::uint64_t(1) << 12;

// Full tabulation of the norm on G'^ab.  Well-definedness on cosets of the
// derived subgroup and the homomorphism property are verified during
// tabulation; violations throw the reportable errors.
struct NormTable {
  AbelianQuotientRef src;  // abelianization of G' = 1 + A'
  AbelianQuotientRef dst;  // abelianization of G = 1 + A
  std::map<std::vector<std::uint64_t>, std::vector<std::uint64_t>> table;

  const std::vector<std::uint64_t>& apply(const std::vector<std::uint64_t>& x) const;
};

NormTable norm_map(const AlgebraRef& A, int n);

// Image of the norm computed from generator images only, usable when G' is
// too large to tabulate.  Returns the set of reachable exponent tuples.
std::vector<std::vector<std::uint64_t>> norm_image(const AlgebraRef& A, int n);

// The endomorphism of a quotient induced by the q0-power coefficient map,
// as log images of the generators.
std::vector<std::vector<std::uint64_t>> frobenius_on_quotient(const AbelianQuotient& Q,
                                                              std::uint32_t q0);
std::vector<std::uint64_t> apply_generator_map(const std::vector<std::vector<std::uint64_t>>& M,
                                               const AbelianQuotient& Q,
                                               const std::vector<std::uint64_t>& x);

struct CheckResult {
  std::string check;
  bool pass = false;
  std::string witness;  // compact JSON fragment
};

// The theorem battery for the norm maps: functoriality over intermediate
// algebra subgroups, Frobenius equivariance, tower transitivity,
// surjectivity, and the coinvariants factorization.
std::vector<CheckResult> verify_norm_properties(const AlgebraRef& A,
                                                const std::vector<int>& tower);

}  // namespace algroups
