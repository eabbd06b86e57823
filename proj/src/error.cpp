#include "algroups/error.hpp"

namespace algroups {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::NotASubfield: return "NotASubfield";
    case Errc::NoEmbedding: return "NoEmbedding";
    case Errc::NotAssociative: return "NotAssociative";
    case Errc::NotNilpotent: return "NotNilpotent";
    case Errc::BadParameter: return "BadParameter";
    case Errc::NotDefinedOverSubfield: return "NotDefinedOverSubfield";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotNormal: return "NotNormal";
    case Errc::NotSubgroup: return "NotSubgroup";
    case Errc::GroupMismatch: return "GroupMismatch";
    case Errc::StabilizerNotAlgebraSubgroup: return "StabilizerNotAlgebraSubgroup";
    case Errc::LevelMismatch: return "LevelMismatch";
    case Errc::LevelTooSmall: return "LevelTooSmall";
    case Errc::NotAnInteger: return "NotAnInteger";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::NotAHomomorphism: return "NotAHomomorphism";
    case Errc::NotConstantOnCosets: return "NotConstantOnCosets";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::RadicalNotSubspace: return "RadicalNotSubspace";
    case Errc::IsotropicExtensionFailed: return "IsotropicExtensionFailed";
    case Errc::NoExtension: return "NoExtension";
    case Errc::RadicalMismatch: return "RadicalMismatch";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::NotIrreducibleAfterBaseChange: return "NotIrreducibleAfterBaseChange";
    case Errc::NotGaloisInvariant: return "NotGaloisInvariant";
    case Errc::ReductionMismatch: return "ReductionMismatch";
    case Errc::SumOfSquaresMismatch: return "SumOfSquaresMismatch";
    case Errc::InvariantNotLinear: return "InvariantNotLinear";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

bool errc_is_violation(Errc c) {
  switch (c) {
    case Errc::StabilizerNotAlgebraSubgroup:
    case Errc::NotAHomomorphism:
    case Errc::NotConstantOnCosets:
    case Errc::NotInvariant:
    case Errc::RadicalNotSubspace:
    case Errc::IsotropicExtensionFailed:
    case Errc::NoExtension:
    case Errc::RadicalMismatch:
    case Errc::NotIrreducibleAfterBaseChange:
    case Errc::NotGaloisInvariant:
    case Errc::ReductionMismatch:
    case Errc::InvariantNotLinear:
      return true;
    default:
      return false;
  }
}

}  // namespace algroups
