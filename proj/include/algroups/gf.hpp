#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "algroups/error.hpp"

namespace algroups {

// Field element, stored as the packed little-endian base-p digit string of
// its coefficient vector: code = sum c_i p^i.  Elements carry no reference
// to their field; every operation takes the field explicitly.
using Fel = std::uint16_t;

// F_{p^m} presented as F_p[x]/(modulus).  The modulus is monic of degree m,
// stored little-endian with length m+1.  Construction without an explicit
// modulus picks the canonical one: the first irreducible monic polynomial
// in coefficient scan order (c_0 + c_1 p + ... ascending).
class Field {
 public:
  static std::shared_ptr<const Field> make(int p, int m);
  static std::shared_ptr<const Field> make(int p, int m, const std::vector<int>& modulus);

  int p() const { return p_; }
  int m() const { return m_; }
  std::uint32_t q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  Fel zero() const { return 0; }
  Fel one() const { return 1; }

  Fel add(Fel a, Fel b) const;
  Fel sub(Fel a, Fel b) const;
  Fel neg(Fel a) const;
  Fel mul(Fel a, Fel b) const;
  Fel inv(Fel a) const;  // DivisionByZero on 0
  // a^e with e arbitrary (negative needs a != 0).
  Fel pow(Fel a, long long e) const;
  // x -> x^{p^i}; i defaults to 1.  Always a field automorphism.
  Fel frobenius(Fel a, int i = 1) const;
  // x -> x^{q0} where q0 is a power of p.
  Fel frob_pow(Fel a, std::uint32_t q0) const;

  std::vector<int> coeffs(Fel a) const;                 // little-endian, length m
  Fel from_coeffs(const std::vector<int>& c) const;     // length m, entries in [0,p)

  // Multiplicative order of a nonzero element.
  std::uint32_t mult_order(Fel a) const;

  bool same(const Field& other) const;  // identical (p, m, modulus)

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

 private:
  Field() = default;
  void init_tables();
  Fel mul_poly(Fel a, Fel b) const;
  void check(Fel a) const;

  int p_ = 0;
  int m_ = 0;
  std::uint32_t q_ = 0;
  std::vector<int> modulus_;

  // log/antilog w.r.t. a fixed generator, always built (size q).
  std::vector<std::uint32_t> log_;
  std::vector<Fel> exp_;
  // full add/mul tables for small q, empty otherwise
  std::vector<Fel> add_tab_;
  std::vector<Fel> mul_tab_;
  std::vector<Fel> neg_tab_;
};

using FieldRef = std::shared_ptr<const Field>;

// Subfield inclusion src -> dst realized by sending the canonical generator
// of src to its smallest root in dst (coefficient scan order).  Tabulated.
class Embedding {
 public:
  Embedding(FieldRef src, FieldRef dst);

  Fel operator()(Fel a) const;
  bool in_image(Fel b) const;
  Fel preimage(Fel b) const;  // NotASubfield if b is outside the image

  const Field& src() const { return *src_; }
  const Field& dst() const { return *dst_; }

 private:
  FieldRef src_;
  FieldRef dst_;
  std::vector<Fel> fwd_;
  std::vector<Fel> back_;  // indexed by dst code; q_dst sentinel = not in image
};

// Trace / norm from f down to its subfield sub (s | m required).
// Results are returned as elements of sub.
Fel trace_to_subfield(const FieldRef& f, Fel a, const FieldRef& sub);
Fel norm_to_subfield(const FieldRef& f, Fel a, const FieldRef& sub);

namespace detail {
// Dense polynomial helpers over F_p (little-endian coefficient vectors),
// shared with tests that want an independent irreducibility oracle.
std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& f, int p);
std::vector<int> poly_mul(const std::vector<int>& a, const std::vector<int>& b, int p);
std::vector<int> poly_gcd(std::vector<int> a, std::vector<int> b, int p);
bool poly_irreducible(const std::vector<int>& f, int p);
}  // namespace detail

}  // namespace algroups
