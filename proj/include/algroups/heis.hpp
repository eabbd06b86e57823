#pragma once

#include <cstdint>
#include <vector>

#include "algroups/algrp.hpp"
#include "algroups/cyclo.hpp"
#include "algroups/k1norm.hpp"
#include "algroups/nilalg.hpp"

namespace algroups {

// The commutator pairing attached to an invariant character of 1+A^2,
// tabulated on a fixed lift basis of A/A^2.  Values are exponents modulo
// the order of the character's value group.
struct PairingMatrix {
  int dim = 0;
  std::uint64_t level = 1;
  std::vector<Vec> lift_basis;          // dim vectors spanning a complement of A^2
  std::vector<std::uint64_t> entries;   // dim*dim, row-major

  std::uint64_t at(int i, int j) const { return entries[(size_t)i * dim + j]; }
};

// Lex-first standard basis vectors completing A^2 to all of A.
std::vector<Vec> complement_basis(const Algebra& A, const Subspace& inner);

// Linear characters of 1+A^2 fixed under conjugation by all of G.
std::vector<LinearCharacter> invariant_central_characters(const AlgebraRef& A);

PairingMatrix commutator_pairing(const AlgebraRef& A, const LinearCharacter& phi);

// The scalar balance identity c(1+la, 1+b) = c(1+a, 1+lb), checked on the
// whole group, all scalars.
CheckResult verify_balance(const AlgebraRef& A, const LinearCharacter& phi);

// The radical {g : phi((g,h)) = 1 for all h}, pulled back to a subspace of
// A containing A^2.  RadicalNotSubspace when the kernel fails to be a
// scalar-closed multiplicatively closed subspace.
Subspace radical_g_phi(const AlgebraRef& A, const LinearCharacter& phi);

// Greedy maximal isotropic extension of the radical; returns the lifted
// subspace of A (containing A^2).  A nonzero seed randomizes the scan
// order; the induced character is independent of it.
Subspace maximal_isotropic(const AlgebraRef& A, const LinearCharacter& phi,
                           std::uint64_t seed = 0);

// A strongly Heisenberg representation as its classifying data: the
// invariant central character, the radical subgroup, and the extension of
// the central character to it.
struct SHDatum {
  AlgebraRef alg;
  LinearCharacter phi;   // on the quotient of 1+A^2
  Subspace g_phi;        // radical subgroup 1+U
  LinearCharacter chi;   // on the quotient of 1+U, extending phi
};

bool sh_datum_eq(const SHDatum& a, const SHDatum& b);

std::vector<SHDatum> sh_classify(const AlgebraRef& A);

ClassFunction sh_character(const SHDatum& d, std::uint64_t seed = 0);

// All linear extensions of chi to the isotropic subgroup; the first one is
// the lex-first choice sh_character uses.
std::vector<LinearCharacter> sh_extensions(const SHDatum& d, const Subspace& ltilde);

// chi composed with the norm map of the extension, as a character of the
// scalar-extended subgroup quotient.  U must be multiplicatively closed and
// chi must live on the quotient of 1+U.
LinearCharacter norm_pullback(const AlgebraRef& A, const Subspace& U,
                              const LinearCharacter& chi, int n);

// Base change of strongly Heisenberg data along the degree-n extension.
// Verifies that the fresh radical equals the scalar extension of the old
// one (RadicalMismatch otherwise) and that the result is Galois-invariant.
SHDatum sh_base_change(const SHDatum& d, int n);

}  // namespace algroups
