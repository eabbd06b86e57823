#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "algroups/algrp.hpp"
#include "algroups/cyclo.hpp"
#include "algroups/heis.hpp"
#include "algroups/k1norm.hpp"
#include "algroups/nilalg.hpp"

namespace algroups {

// One peeled level of the reduction: the stabilizer subgroup the
// representation is induced from, and the isotypic central character it lies
// over.  Subspaces and characters are in the coordinates of the top algebra.
struct ChainStep {
  Subspace subgroup;
  LinearCharacter central_char;
};

// Constructive certificate of one irreducible representation: the descent
// through proper stabilizers, the Heisenberg datum it bottoms out in, and the
// exact character obtained by inducing back up.  terminal lives in the
// innermost algebra's own coordinates; terminal_frame gives that algebra's
// basis as rows in the coordinates of alg.  child, when set, is the chain of
// the first step's subalgebra in its own coordinates.
struct IrrepChain {
  AlgebraRef alg;
  std::vector<ChainStep> steps;  // descending; empty iff strongly Heisenberg
  SHDatum terminal;
  std::vector<Vec> terminal_frame;
  ClassFunction character;
  int fdim = 0;  // degree = q^fdim
  int sh = 0;    // steps.size()
  std::shared_ptr<const IrrepChain> child;
};

// All irreducible characters of 1+A, with certificates, verified complete by
// the sum of squared degrees and pairwise orthogonality.  A nonzero seed
// randomizes the orbit representatives picked during the descent; the
// resulting character multiset must not change.
std::vector<IrrepChain> enumerate_irreps(const AlgebraRef& A, std::uint64_t choice_seed = 0);

// First level of the canonical decomposition of an irreducible character:
// the isotypic constituents on the square subgroup form one orbit with equal
// multiplicities, and the subgroup is the stabilizer of the chosen one.
struct ReductionData {
  Subspace subgroup;
  LinearCharacter central_char;
  long long multiplicity = 0;
  std::vector<LinearCharacter> orbit;
};
ReductionData reduction_step(const AlgebraRef& A, const ClassFunction& rho);

// rho.character = induce(character, from 1+space), with space a subalgebra.
struct MonomialData {
  Subspace space;
  LinearCharacter character;
};
MonomialData monomialize(const IrrepChain& rho);

// Scalar extension of an irreducible along the degree-n field extension,
// peeling the chain one step at a time.  Verifies irreducibility, Galois
// invariance, and the match between the image's first reduction level and
// the extension of the original one.
IrrepChain base_change(const IrrepChain& rho, int n);

// Orbit of a class function under x -> x^{q0} acting on the group, smallest
// power first.  The subgroup and the structure constants must be stable
// under the map.
std::vector<ClassFunction> galois_orbit(const ClassFunction& chi, std::uint32_t q0);

// Exact equality of class functions on the same group; irreducible
// characters separate isomorphism classes.
bool iso_test(const ClassFunction& a, const ClassFunction& b);

// Check battery over one algebra and a list of extension degrees.  Known
// ids: isaacs, gutkin, halasi, commutator-balance, norms, orders,
// injectivity, transitivity, equivariance, surjectivity, conditional,
// restriction.  An empty list selects all of them.  Oversized instances
// produce records with a "skipped" witness instead of being dropped.
std::vector<CheckResult> experiments(const AlgebraRef& A, const std::vector<int>& exts,
                                     const std::vector<std::string>& checks);

}  // namespace algroups
