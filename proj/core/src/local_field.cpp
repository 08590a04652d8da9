#include "gl2sup/local_field.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace gl2sup {

Rational prime_power(std::uint64_t p, int k) {
  Integer base;
  mpz_ui_pow_ui(base.get_mpz_t(), p, static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return Rational(base);
  return Rational(Integer(1), base);
}

int p_valuation(const Integer& a, std::uint64_t p) {
  if (a == 0) throw std::domain_error("p_valuation of zero");
  Integer t = a;
  int v = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
    ++v;
  }
  return v;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mod_mul(r, a, m);
    a = mod_mul(a, a, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  __int128 t = 0, nt = 1;
  __int128 r = m, nr = a % m;
  while (nr != 0) {
    __int128 q = r / nr;
    __int128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::domain_error("mod_inverse: not invertible");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

std::uint64_t euler_phi_prime_power(std::uint64_t p, unsigned k) {
  if (k == 0) return 1;
  return ipow(p, k - 1) * (p - 1);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t reduce_mod_prime_power(const Rational& x, std::uint64_t p, unsigned k) {
  std::uint64_t mod = ipow(p, k);
  if (mod == 1) return 0;
  Integer num = x.get_num();
  Integer den = x.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), p))
    throw std::domain_error("reduce_mod_prime_power: value is not p-integral");
  std::uint64_t n = mpz_fdiv_ui(num.get_mpz_t(), mod);
  std::uint64_t d = mpz_fdiv_ui(den.get_mpz_t(), mod);
  return mod_mul(n, mod_inverse(d, mod), mod);
}

std::string to_string(const Rational& x) { return x.get_str(); }

std::ostream& operator<<(std::ostream& os, const Valuation& v) {
  if (v.is_infinite()) return os << "inf";
  return os << v.value();
}

Valuation valuation(const Rational& x, std::uint64_t p) {
  if (x == 0) return Valuation::infinity();
  return Valuation(p_valuation(x.get_num(), p) - p_valuation(x.get_den(), p));
}

Rational unit_part(const Rational& x, std::uint64_t p) {
  Valuation v = valuation(x, p);
  if (v.is_infinite()) throw std::domain_error("unit part of zero");
  return x * prime_power(p, -v.value());
}

std::uint64_t unit_residue(const Rational& x, std::uint64_t p, unsigned k) {
  return reduce_mod_prime_power(unit_part(x, p), p, k);
}

LocalScalar::LocalScalar(std::uint64_t p, Rational value) : p_(p), value_(std::move(value)) {
  if (p < 2) throw std::invalid_argument("LocalScalar: prime must be >= 2");
  value_.canonicalize();
}

double LocalScalar::abs() const {
  Valuation v = valuation();
  if (v.is_infinite()) return 0.0;
  return std::pow(static_cast<double>(p_), -v.value());
}

Rational LocalScalar::unit_part() const { return gl2sup::unit_part(value_, p_); }

std::uint64_t LocalScalar::unit_residue(unsigned k) const {
  return gl2sup::unit_residue(value_, p_, k);
}

void LocalScalar::check_same(const LocalScalar& o) const {
  if (o.p_ != p_) throw std::invalid_argument("LocalScalar: mixed primes");
}

LocalScalar LocalScalar::operator+(const LocalScalar& o) const {
  check_same(o);
  return LocalScalar(p_, value_ + o.value_);
}
LocalScalar LocalScalar::operator-(const LocalScalar& o) const {
  check_same(o);
  return LocalScalar(p_, value_ - o.value_);
}
LocalScalar LocalScalar::operator*(const LocalScalar& o) const {
  check_same(o);
  return LocalScalar(p_, value_ * o.value_);
}
LocalScalar LocalScalar::operator/(const LocalScalar& o) const {
  check_same(o);
  if (o.is_zero()) throw std::domain_error("LocalScalar: division by zero");
  return LocalScalar(p_, value_ / o.value_);
}

LocalMatrix::LocalMatrix(std::uint64_t p, Rational a, Rational b, Rational c, Rational d)
    : p_(p), m_{std::move(a), std::move(b), std::move(c), std::move(d)} {
  for (auto& e : m_) e.canonicalize();
  if (det() == 0) throw SingularMatrixError("LocalMatrix: determinant is zero");
}

LocalMatrix LocalMatrix::identity(std::uint64_t p) { return LocalMatrix(p, 1, 0, 0, 1); }
LocalMatrix LocalMatrix::w(std::uint64_t p) { return LocalMatrix(p, 0, 1, -1, 0); }
LocalMatrix LocalMatrix::a(std::uint64_t p, const Rational& y) { return LocalMatrix(p, y, 0, 0, 1); }
LocalMatrix LocalMatrix::n(std::uint64_t p, const Rational& x) { return LocalMatrix(p, 1, x, 0, 1); }
LocalMatrix LocalMatrix::z(std::uint64_t p, const Rational& y) { return LocalMatrix(p, y, 0, 0, y); }
LocalMatrix LocalMatrix::diag(std::uint64_t p, const Rational& d1, const Rational& d2) {
  return LocalMatrix(p, d1, 0, 0, d2);
}
LocalMatrix LocalMatrix::antidiag_pn(std::uint64_t p, int n) {
  return LocalMatrix(p, 0, 1, prime_power(p, n), 0);
}

Rational LocalMatrix::det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

LocalMatrix LocalMatrix::inverse() const {
  Rational d = det();
  return LocalMatrix(p_, m_[3] / d, -m_[1] / d, -m_[2] / d, m_[0] / d);
}

LocalMatrix LocalMatrix::operator*(const LocalMatrix& o) const {
  if (o.p_ != p_) throw std::invalid_argument("LocalMatrix: mixed primes");
  return LocalMatrix(p_, m_[0] * o.m_[0] + m_[1] * o.m_[2], m_[0] * o.m_[1] + m_[1] * o.m_[3],
                     m_[2] * o.m_[0] + m_[3] * o.m_[2], m_[2] * o.m_[1] + m_[3] * o.m_[3]);
}

LocalMatrix LocalMatrix::scaled(const Rational& s) const {
  return LocalMatrix(p_, m_[0] * s, m_[1] * s, m_[2] * s, m_[3] * s);
}

bool LocalMatrix::operator==(const LocalMatrix& o) const { return p_ == o.p_ && m_ == o.m_; }

bool LocalMatrix::is_integral() const {
  for (const auto& e : m_)
    if (!valuation(e, p_).at_least(0)) return false;
  return true;
}

bool LocalMatrix::in_gl2_zp() const { return is_integral() && valuation(det(), p_) == Valuation(0); }

std::string LocalMatrix::to_string() const {
  std::ostringstream os;
  os << "[[" << m_[0].get_str() << ", " << m_[1].get_str() << "], [" << m_[2].get_str() << ", "
     << m_[3].get_str() << "]]";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const LocalMatrix& g) { return os << g.to_string(); }

bool in_k1(const LocalMatrix& g, int n) {
  if (n < 0) throw std::invalid_argument("in_k1: n must be >= 0");
  if (!g.in_gl2_zp()) return false;
  std::uint64_t p = g.prime();
  return valuation(g(0, 0) - 1, p).at_least(n) && valuation(g(1, 0), p).at_least(n);
}

bool in_k2(const LocalMatrix& g, int n) {
  if (n < 0) throw std::invalid_argument("in_k2: n must be >= 0");
  if (!g.in_gl2_zp()) return false;
  std::uint64_t p = g.prime();
  return valuation(g(1, 1) - 1, p).at_least(n) && valuation(g(1, 0), p).at_least(n);
}

bool conjugate_k2_check(const LocalMatrix& g, int n) {
  if (n < 0) throw std::invalid_argument("conjugate_k2_check: n must be >= 0");
  LocalMatrix A = LocalMatrix::antidiag_pn(g.prime(), n);
  bool direct = in_k2(g, n);
  bool via = in_k1(A.inverse() * g * A, n);
  if (direct != via) throw std::logic_error("conjugate_k2_check: routes disagree for " + g.to_string());
  return direct;
}

}  // namespace gl2sup
