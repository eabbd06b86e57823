#pragma once

#include <stdexcept>
#include <string>

namespace algroups {

// Error codes fall into three classes that callers treat differently:
//  - usage errors: bad input, violated preconditions; the caller's fault
//  - consistency errors: an internal certificate failed; a bug somewhere
//  - violation errors: an empirically checked statement failed on concrete
//    data; the interesting case, surfaced as a structured report rather
//    than a crash wherever a verification driver is in charge
enum class Errc {
  // fields
  NotPrime,
  ReducibleModulus,
  DegreeMismatch,
  DivisionByZero,
  FieldMismatch,
  NotASubfield,
  NoEmbedding,
  // algebras
  NotAssociative,
  NotNilpotent,
  BadParameter,
  NotDefinedOverSubfield,
  TooLarge,
  // groups
  NotNormal,
  NotSubgroup,
  GroupMismatch,
  StabilizerNotAlgebraSubgroup,
  // cyclotomic / class functions
  LevelMismatch,
  LevelTooSmall,
  NotAnInteger,
  // hull matrices / norms
  NotInvertible,
  NotAHomomorphism,
  NotConstantOnCosets,
  // pairings / classification
  NotInvariant,
  RadicalNotSubspace,
  IsotropicExtensionFailed,
  NoExtension,
  RadicalMismatch,
  // representations
  NotIrreducible,
  NotIrreducibleAfterBaseChange,
  NotGaloisInvariant,
  ReductionMismatch,
  SumOfSquaresMismatch,
  InvariantNotLinear,
  // catalog / cli
  ParseError,
  ValidationError,
};

const char* errc_name(Errc c);

// True for codes that report a failed mathematical statement on concrete
// data (as opposed to caller mistakes or internal bugs).
bool errc_is_violation(Errc c);

struct AlgError : std::runtime_error {
  Errc code;
  // Compact JSON fragment describing the offending data, already encoded;
  // empty when there is nothing useful to attach.
  std::string witness;

  AlgError(Errc c, const std::string& msg, std::string witness_json = {})
      : std::runtime_error(msg), code(c), witness(std::move(witness_json)) {}
};

}  // namespace algroups
