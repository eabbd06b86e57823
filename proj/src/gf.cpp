#include "algroups/gf.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace algroups {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; (long long)d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::string poly_str(const std::vector<int>& f) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
  os << "]";
  return os.str();
}

std::vector<int> trim(std::vector<int> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

}  // namespace

namespace detail {

std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& f, int p) {
  // f monic
  a = trim(std::move(a));
  const int df = (int)f.size() - 1;
  while ((int)a.size() - 1 >= df) {
    int da = (int)a.size() - 1;
    int c = a.back();
    for (int i = 0; i <= df; ++i) {
      int& t = a[da - df + i];
      t = (t - c * f[i]) % p;
      if (t < 0) t += p;
    }
    a = trim(std::move(a));
  }
  return a;
}

std::vector<int> poly_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
  if (a.empty() || b.empty()) return {};
  std::vector<int> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return trim(std::move(r));
}

std::vector<int> poly_gcd(std::vector<int> a, std::vector<int> b, int p) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  while (!b.empty()) {
    // make b monic before reducing
    int lead = b.back();
    if (lead != 1) {
      int li = 1;
      while ((lead * li) % p != 1) ++li;
      for (int& c : b) c = (c * li) % p;
    }
    auto r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    int lead = a.back(), li = 1;
    while ((lead * li) % p != 1) ++li;
    for (int& c : a) c = (c * li) % p;
  }
  return a;
}

bool poly_irreducible(const std::vector<int>& f, int p) {
  const int m = (int)f.size() - 1;
  if (m < 1) return false;
  if (m == 1) return true;
  // x^{p^i} mod f by square-and-multiply, then gcd(f, x^{p^i} - x)
  for (int i = 1; i <= m / 2; ++i) {
    unsigned long long e = 1;
    for (int j = 0; j < i; ++j) e *= (unsigned long long)p;
    std::vector<int> acc{1};       // 1
    std::vector<int> base{0, 1};   // x
    unsigned long long k = e;
    while (k) {
      if (k & 1) acc = poly_mod(poly_mul(acc, base, p), f, p);
      base = poly_mod(poly_mul(base, base, p), f, p);
      k >>= 1;
    }
    // acc - x
    std::vector<int> g = acc;
    if (g.size() < 2) g.resize(2, 0);
    g[1] = (g[1] - 1 % p + p) % p;
    g = trim(std::move(g));
    auto d = poly_gcd(f, g, p);
    if ((int)d.size() - 1 >= 1) return false;
  }
  return true;
}

}  // namespace detail

std::shared_ptr<const Field> Field::make(int p, int m) {
  if (!is_prime(p)) throw AlgError(Errc::NotPrime, "p is not prime: " + std::to_string(p));
  if (m < 1) throw AlgError(Errc::BadParameter, "extension degree must be >= 1");
  std::vector<int> mod(m + 1, 0);
  mod[m] = 1;
  if (m == 1) {
    // modulus x
    return make(p, m, mod);
  }
  // scan constant-first packed coefficient strings ascending
  unsigned long long total = 1;
  for (int i = 0; i < m; ++i) total *= (unsigned long long)p;
  for (unsigned long long c = 1; c < total; ++c) {
    unsigned long long t = c;
    for (int i = 0; i < m; ++i) {
      mod[i] = (int)(t % p);
      t /= p;
    }
    if (mod[0] == 0) continue;  // divisible by x
    if (detail::poly_irreducible(mod, p)) return make(p, m, mod);
  }
  throw AlgError(Errc::BadParameter, "no irreducible modulus found");  // unreachable
}

std::shared_ptr<const Field> Field::make(int p, int m, const std::vector<int>& modulus) {
  if (!is_prime(p)) throw AlgError(Errc::NotPrime, "p is not prime: " + std::to_string(p));
  if (m < 1) throw AlgError(Errc::BadParameter, "extension degree must be >= 1");
  if ((int)modulus.size() != m + 1)
    throw AlgError(Errc::DegreeMismatch,
                   "modulus must have length m+1 = " + std::to_string(m + 1) + ", got " +
                       std::to_string(modulus.size()));
  if (modulus[m] != 1)
    throw AlgError(Errc::DegreeMismatch, "modulus must be monic", poly_str(modulus));
  for (int c : modulus)
    if (c < 0 || c >= p)
      throw AlgError(Errc::BadParameter, "modulus coefficient out of range", poly_str(modulus));
  if (m >= 2 && !detail::poly_irreducible(modulus, p)) {
    // find a witness factor for the error payload
    std::vector<int> witness;
    for (int i = 1; i <= m / 2 && witness.empty(); ++i) {
      unsigned long long e = 1;
      for (int j = 0; j < i; ++j) e *= (unsigned long long)p;
      std::vector<int> acc{1}, base{0, 1};
      unsigned long long k = e;
      while (k) {
        if (k & 1) acc = detail::poly_mod(detail::poly_mul(acc, base, p), modulus, p);
        base = detail::poly_mod(detail::poly_mul(base, base, p), modulus, p);
        k >>= 1;
      }
      std::vector<int> g = acc;
      if (g.size() < 2) g.resize(2, 0);
      g[1] = (g[1] - 1 + p) % p;
      auto d = detail::poly_gcd(modulus, g, p);
      if ((int)d.size() - 1 >= 1 && (int)d.size() - 1 < m) witness = d;
    }
    throw AlgError(Errc::ReducibleModulus, "modulus is reducible", poly_str(witness));
  }
  auto f = std::shared_ptr<Field>(new Field());
  f->p_ = p;
  f->m_ = m;
  std::uint64_t q = 1;
  for (int i = 0; i < m; ++i) q *= (std::uint64_t)p;
  if (q > 65536) throw AlgError(Errc::TooLarge, "field size exceeds element encoding");
  f->q_ = (std::uint32_t)q;
  f->modulus_ = modulus;
  f->init_tables();
  return f;
}

void Field::check(Fel a) const {
  if (a >= q_)
    throw AlgError(Errc::FieldMismatch,
                   "element code " + std::to_string(a) + " out of range for q=" + std::to_string(q_));
}

Fel Field::mul_poly(Fel a, Fel b) const {
  std::vector<int> pa(m_), pb(m_);
  std::uint32_t t = a;
  for (int i = 0; i < m_; ++i) {
    pa[i] = (int)(t % p_);
    t /= p_;
  }
  t = b;
  for (int i = 0; i < m_; ++i) {
    pb[i] = (int)(t % p_);
    t /= p_;
  }
  auto r = detail::poly_mod(detail::poly_mul(pa, pb, p_), modulus_, p_);
  std::uint32_t code = 0;
  for (int i = (int)r.size() - 1; i >= 0; --i) code = code * p_ + (std::uint32_t)r[i];
  return (Fel)code;
}

void Field::init_tables() {
  // generator search for log/antilog
  std::vector<std::uint32_t> prime_factors;
  {
    std::uint32_t n = q_ - 1;
    for (std::uint32_t d = 2; (std::uint64_t)d * d <= n; ++d)
      while (n % d == 0) {
        if (prime_factors.empty() || prime_factors.back() != d) prime_factors.push_back(d);
        n /= d;
      }
    if (n > 1) prime_factors.push_back(n);
  }
  Fel gen = 1;
  for (Fel g = 1; g < q_; ++g) {
    bool ok = true;
    for (std::uint32_t r : prime_factors) {
      // g^{(q-1)/r} by repeated squaring with mul_poly
      std::uint32_t e = (q_ - 1) / r;
      Fel acc = 1, base = g;
      while (e) {
        if (e & 1) acc = mul_poly(acc, base);
        base = mul_poly(base, base);
        e >>= 1;
      }
      if (acc == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      gen = g;
      break;
    }
  }
  log_.assign(q_, 0);
  exp_.assign(q_ - 1, 0);
  Fel x = 1;
  for (std::uint32_t i = 0; i < q_ - 1; ++i) {
    exp_[i] = x;
    log_[x] = i;
    x = mul_poly(x, gen);
  }
  if (x != 1) throw AlgError(Errc::BadParameter, "generator order mismatch");
  if (q_ <= 256) {
    add_tab_.assign((size_t)q_ * q_, 0);
    mul_tab_.assign((size_t)q_ * q_, 0);
    neg_tab_.assign(q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a) {
      // digitwise negation
      std::uint32_t t = a, code = 0, f = 1;
      for (int i = 0; i < m_; ++i) {
        int d = (int)(t % p_);
        t /= p_;
        code += (std::uint32_t)((p_ - d) % p_) * f;
        f *= p_;
      }
      neg_tab_[a] = (Fel)code;
    }
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b <= a; ++b) {
        std::uint32_t ta = a, tb = b, code = 0, f = 1;
        for (int i = 0; i < m_; ++i) {
          code += (std::uint32_t)(((ta % p_) + (tb % p_)) % p_) * f;
          ta /= p_;
          tb /= p_;
          f *= p_;
        }
        add_tab_[a * q_ + b] = add_tab_[b * q_ + a] = (Fel)code;
        Fel mv = (a == 0 || b == 0) ? 0 : exp_[(log_[a] + log_[b]) % (q_ - 1)];
        mul_tab_[a * q_ + b] = mul_tab_[b * q_ + a] = mv;
      }
  }
}

Fel Field::add(Fel a, Fel b) const {
  check(a);
  check(b);
  if (!add_tab_.empty()) return add_tab_[(size_t)a * q_ + b];
  std::uint32_t ta = a, tb = b, code = 0, f = 1;
  for (int i = 0; i < m_; ++i) {
    code += (std::uint32_t)(((ta % p_) + (tb % p_)) % p_) * f;
    ta /= p_;
    tb /= p_;
    f *= p_;
  }
  return (Fel)code;
}

Fel Field::neg(Fel a) const {
  check(a);
  if (!neg_tab_.empty()) return neg_tab_[a];
  std::uint32_t t = a, code = 0, f = 1;
  for (int i = 0; i < m_; ++i) {
    int d = (int)(t % p_);
    t /= p_;
    code += (std::uint32_t)((p_ - d) % p_) * f;
    f *= p_;
  }
  return (Fel)code;
}

Fel Field::sub(Fel a, Fel b) const { return add(a, neg(b)); }

Fel Field::mul(Fel a, Fel b) const {
  check(a);
  check(b);
  if (!mul_tab_.empty()) return mul_tab_[(size_t)a * q_ + b];
  if (a == 0 || b == 0) return 0;
  return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

Fel Field::inv(Fel a) const {
  check(a);
  if (a == 0) throw AlgError(Errc::DivisionByZero, "inverse of zero");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Fel Field::pow(Fel a, long long e) const {
  check(a);
  if (a == 0) {
    if (e > 0) return 0;
    if (e == 0) return 1;
    throw AlgError(Errc::DivisionByZero, "negative power of zero");
  }
  long long n = q_ - 1;
  long long r = ((e % n) + n) % n;
  return exp_[(std::uint64_t)log_[a] * (std::uint64_t)r % (std::uint64_t)n];
}

Fel Field::frobenius(Fel a, int i) const {
  check(a);
  if (a == 0) return 0;
  std::uint64_t n = q_ - 1, e = 1;
  for (int j = 0; j < i; ++j) e = e * (std::uint64_t)p_ % n;
  return exp_[(std::uint64_t)log_[a] * e % n];
}

Fel Field::frob_pow(Fel a, std::uint32_t q0) const {
  std::uint32_t t = q0;
  int i = 0;
  while (t > 1 && t % p_ == 0) {
    t /= (std::uint32_t)p_;
    ++i;
  }
  if (t != 1 || i == 0)
    throw AlgError(Errc::BadParameter, "q0 must be a positive power of p");
  return frobenius(a, i);
}

std::vector<int> Field::coeffs(Fel a) const {
  check(a);
  std::vector<int> c(m_);
  std::uint32_t t = a;
  for (int i = 0; i < m_; ++i) {
    c[i] = (int)(t % p_);
    t /= p_;
  }
  return c;
}

Fel Field::from_coeffs(const std::vector<int>& c) const {
  if ((int)c.size() != m_)
    throw AlgError(Errc::DegreeMismatch, "coefficient vector must have length m");
  std::uint32_t code = 0;
  for (int i = m_ - 1; i >= 0; --i) {
    if (c[i] < 0 || c[i] >= p_)
      throw AlgError(Errc::BadParameter, "coefficient out of range [0,p)");
    code = code * p_ + (std::uint32_t)c[i];
  }
  return (Fel)code;
}

std::uint32_t Field::mult_order(Fel a) const {
  check(a);
  if (a == 0) throw AlgError(Errc::DivisionByZero, "order of zero");
  std::uint32_t n = q_ - 1;
  return n / std::gcd(n, log_[a]);
}

bool Field::same(const Field& other) const {
  return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
}

Embedding::Embedding(FieldRef src, FieldRef dst) : src_(std::move(src)), dst_(std::move(dst)) {
  const Field& s = *src_;
  const Field& d = *dst_;
  if (s.p() != d.p())
    throw AlgError(Errc::NoEmbedding, "different characteristic");
  if (d.m() % s.m() != 0)
    throw AlgError(Errc::NoEmbedding, "degree does not divide");
  // smallest root of the src modulus in dst, coefficient scan order
  const auto& f = s.modulus();
  Fel root = 0;
  bool found = false;
  for (std::uint32_t y = 0; y < d.q(); ++y) {
    Fel acc = 0;
    for (int i = s.m(); i >= 0; --i) acc = d.add(d.mul(acc, (Fel)y), (Fel)f[i]);
    if (acc == 0) {
      root = (Fel)y;
      found = true;
      break;
    }
  }
  if (!found) throw AlgError(Errc::NoEmbedding, "modulus has no root in target");
  fwd_.assign(s.q(), 0);
  back_.assign(d.q(), (Fel)d.q());
  for (std::uint32_t a = 0; a < s.q(); ++a) {
    auto c = s.coeffs((Fel)a);
    Fel acc = 0;
    for (int i = s.m() - 1; i >= 0; --i) acc = d.add(d.mul(acc, root), (Fel)c[i]);
    fwd_[a] = acc;
    back_[acc] = (Fel)a;
  }
}

Fel Embedding::operator()(Fel a) const {
  if (a >= fwd_.size()) throw AlgError(Errc::FieldMismatch, "element outside source field");
  return fwd_[a];
}

bool Embedding::in_image(Fel b) const {
  if (b >= back_.size()) throw AlgError(Errc::FieldMismatch, "element outside target field");
  return back_[b] != (Fel)dst_->q();
}

Fel Embedding::preimage(Fel b) const {
  if (b >= back_.size()) throw AlgError(Errc::FieldMismatch, "element outside target field");
  if (back_[b] == (Fel)dst_->q())
    throw AlgError(Errc::NotASubfield, "element is not in the subfield image");
  return back_[b];
}

Fel trace_to_subfield(const FieldRef& f, Fel a, const FieldRef& sub) {
  if (sub->p() != f->p() || f->m() % sub->m() != 0)
    throw AlgError(Errc::NotASubfield, "declared subfield does not divide");
  const int n = f->m() / sub->m();
  Fel acc = a, x = a;
  for (int i = 1; i < n; ++i) {
    x = f->frobenius(x, sub->m());
    acc = f->add(acc, x);
  }
  Embedding e(sub, f);
  return e.preimage(acc);
}

Fel norm_to_subfield(const FieldRef& f, Fel a, const FieldRef& sub) {
  if (sub->p() != f->p() || f->m() % sub->m() != 0)
    throw AlgError(Errc::NotASubfield, "declared subfield does not divide");
  const int n = f->m() / sub->m();
  Fel acc = a, x = a;
  for (int i = 1; i < n; ++i) {
    x = f->frobenius(x, sub->m());
    acc = f->mul(acc, x);
  }
  Embedding e(sub, f);
  return e.preimage(acc);
}

}  // namespace algroups
