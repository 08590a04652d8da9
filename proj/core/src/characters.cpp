#include "gl2sup/characters.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gl2sup/local_field.hpp"

namespace gl2sup {

namespace {

constexpr std::uint64_t kMaxTableModulus = std::uint64_t(1) << 26;

Complex root_of_unity(std::uint64_t num, std::uint64_t den) {
  if (num == 0) return {1.0, 0.0};
  double angle = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

std::uint64_t multiplicative_order(std::uint64_t g, std::uint64_t mod, std::uint64_t group_order) {
  std::uint64_t best = group_order;
  std::uint64_t n = group_order;
  for (std::uint64_t r = 2; n > 1; ++r) {
    if (r * r > n) r = n;
    if (n % r != 0) continue;
    while (n % r == 0) n /= r;
    while (best % r == 0 && mod_pow(g, best / r, mod) == 1) best /= r;
  }
  return best;
}

}  // namespace

std::uint64_t smallest_primitive_root_mod_p2(std::uint64_t p) {
  if (p == 2) throw std::invalid_argument("no primitive root modulo 4 for p = 2");
  std::uint64_t mod = p * p;
  std::uint64_t phi = p * (p - 1);
  for (std::uint64_t g = 2; g < mod; ++g) {
    if (g % p == 0) continue;
    if (multiplicative_order(g, mod, phi) == phi) return g;
  }
  throw std::logic_error("primitive root search failed");
}

UnitGroup::UnitGroup(std::uint64_t p, unsigned level) : p_(p), level_(level) {
  if (!is_prime(p)) throw std::invalid_argument("UnitGroup: p must be prime");
  modulus_ = ipow(p, level);
  if (modulus_ > kMaxTableModulus) throw std::invalid_argument("UnitGroup: modulus too large");
  order_ = euler_phi_prime_power(p, level);
  if (p == 2) {
    generators_ = {modulus_ == 1 ? 0 : (modulus_ - 1) % modulus_, 5 % modulus_};
    orders_ = {level >= 2 ? std::uint64_t(2) : 1, level >= 3 ? ipow(2, level - 2) : 1};
  } else {
    generators_ = {level == 0 ? 0 : smallest_primitive_root_mod_p2(p) % modulus_};
    orders_ = {order_};
  }
  exponent_ = 1;
  for (auto o : orders_) exponent_ = std::max(exponent_, o);
  index_.assign(modulus_, std::numeric_limits<std::uint32_t>::max());
  std::uint64_t rank_two = orders_.size() == 2 ? orders_[1] : 1;
  std::uint64_t x = 1 % modulus_;
  for (std::uint64_t i = 0; i < orders_[0]; ++i) {
    std::uint64_t y = x;
    for (std::uint64_t j = 0; j < rank_two; ++j) {
      index_[y] = static_cast<std::uint32_t>(i * rank_two + j);
      if (orders_.size() == 2) y = mod_mul(y, generators_[1], modulus_);
    }
    x = mod_mul(x, generators_[0], modulus_);
  }
}

std::shared_ptr<const UnitGroup> UnitGroup::get(std::uint64_t p, unsigned level) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const UnitGroup>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, level);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const UnitGroup> g(new UnitGroup(p, level));
  cache.emplace(key, g);
  return g;
}

std::vector<std::uint64_t> UnitGroup::log(std::uint64_t u) const {
  u %= modulus_;
  if (modulus_ > 1 && u % p_ == 0) throw std::domain_error("UnitGroup::log: not a unit");
  std::uint32_t idx = index_[u];
  if (idx == std::numeric_limits<std::uint32_t>::max()) throw std::logic_error("UnitGroup::log: table gap");
  if (orders_.size() == 2) return {idx / orders_[1], idx % orders_[1]};
  return {idx};
}

ExtendedCharacter::ExtendedCharacter(std::uint64_t p, unsigned level, std::vector<std::uint64_t> exponents)
    : p_(p), level_(level), exponents_(std::move(exponents)), group_(UnitGroup::get(p, level)) {
  const auto& ord = group_->orders();
  if (exponents_.size() != ord.size())
    throw std::invalid_argument("ExtendedCharacter: exponent vector has wrong length");
  for (std::size_t i = 0; i < ord.size(); ++i) exponents_[i] %= ord[i];
  conductor_ = compute_conductor();
}

ExtendedCharacter ExtendedCharacter::trivial(std::uint64_t p) {
  return ExtendedCharacter(p, 0, std::vector<std::uint64_t>(p == 2 ? 2 : 1, 0));
}

std::uint64_t ExtendedCharacter::phase(std::uint64_t u) const {
  auto k = group_->log(u);
  const auto& ord = group_->orders();
  std::uint64_t E = group_->exponent();
  std::uint64_t num = 0;
  for (std::size_t i = 0; i < ord.size(); ++i) {
    std::uint64_t term = mod_mul(exponents_[i] % ord[i], k[i], ord[i]) * (E / ord[i]);
    num = (num + term) % E;
  }
  return num;
}

Complex ExtendedCharacter::on_residue(std::uint64_t u) const {
  return root_of_unity(phase(u), group_->exponent());
}

Complex ExtendedCharacter::operator()(const Rational& x) const {
  if (x == 0) throw std::domain_error("character evaluated at zero");
  return on_residue(unit_residue(x, p_, level_));
}

int ExtendedCharacter::sign_at_minus_one() const {
  std::uint64_t m = group_->modulus();
  if (m <= 2) return 1;
  return phase(m - 1) == 0 ? 1 : -1;
}

unsigned ExtendedCharacter::compute_conductor() const {
  std::uint64_t m = group_->modulus();
  auto trivial_on = [&](std::uint64_t u) { return phase(u % m) == 0; };
  bool all_trivial = true;
  for (auto g : group_->generators())
    if (m > 1 && !trivial_on(g)) all_trivial = false;
  if (all_trivial) return 0;
  for (unsigned k = 1; k <= level_; ++k) {
    if (p_ == 2 && k == 1) continue;  // U(1) is all units when p = 2
    std::uint64_t u = (1 + ipow(p_, k)) % m;
    if (trivial_on(u)) return k;
  }
  return level_;
}

ExtendedCharacter ExtendedCharacter::inverse() const {
  std::vector<std::uint64_t> e(exponents_.size());
  const auto& ord = group_->orders();
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = (ord[i] - exponents_[i] % ord[i]) % ord[i];
  return ExtendedCharacter(p_, level_, std::move(e));
}

ExtendedCharacter ExtendedCharacter::lift(unsigned level) const {
  if (level == level_) return *this;
  auto target = UnitGroup::get(p_, level);
  const auto& from = group_->orders();
  const auto& to = target->orders();
  std::vector<std::uint64_t> e(exponents_.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (to[i] >= from[i]) {
      e[i] = exponents_[i] * (to[i] / from[i]);
    } else {
      std::uint64_t r = from[i] / to[i];
      if (exponents_[i] % r != 0)
        throw std::invalid_argument("ExtendedCharacter::lift: level below conductor");
      e[i] = exponents_[i] / r;
    }
  }
  return ExtendedCharacter(p_, level, std::move(e));
}

ExtendedCharacter ExtendedCharacter::operator*(const ExtendedCharacter& o) const {
  if (o.p_ != p_) throw std::invalid_argument("character product: mixed primes");
  unsigned L = std::max(level_, o.level_);
  ExtendedCharacter a = lift(L), b = o.lift(L);
  const auto& ord = a.group_->orders();
  std::vector<std::uint64_t> e(ord.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = (a.exponents_[i] + b.exponents_[i]) % ord[i];
  return ExtendedCharacter(p_, L, std::move(e));
}

bool ExtendedCharacter::operator==(const ExtendedCharacter& o) const {
  if (o.p_ != p_) return false;
  unsigned L = std::max(level_, o.level_);
  return lift(L).exponents_ == o.lift(L).exponents_;
}

std::string ExtendedCharacter::to_string() const {
  std::ostringstream os;
  os << "chi(p=" << p_ << ", level=" << level_ << ", e=[";
  for (std::size_t i = 0; i < exponents_.size(); ++i) os << (i ? "," : "") << exponents_[i];
  os << "], a=" << conductor_ << ")";
  return os.str();
}

std::vector<ExtendedCharacter> enumerate_characters(std::uint64_t p, unsigned level) {
  auto g = UnitGroup::get(p, level);
  const auto& ord = g->orders();
  std::vector<ExtendedCharacter> out;
  out.reserve(g->order());
  if (ord.size() == 1) {
    for (std::uint64_t e = 0; e < ord[0]; ++e) out.emplace_back(p, level, std::vector<std::uint64_t>{e});
  } else {
    for (std::uint64_t e0 = 0; e0 < ord[0]; ++e0)
      for (std::uint64_t e1 = 0; e1 < ord[1]; ++e1)
        out.emplace_back(p, level, std::vector<std::uint64_t>{e0, e1});
  }
  return out;
}

unsigned conductor(const ExtendedCharacter& chi) { return chi.conductor_exponent(); }

std::pair<std::uint64_t, std::uint64_t> p_fractional_part(const Rational& r, std::uint64_t p) {
  if (r == 0) return {0, 1};
  Valuation v = valuation(r, p);
  if (v.value() >= 0) return {0, 1};
  unsigned k = static_cast<unsigned>(-v.value());
  std::uint64_t mod = ipow(p, k);
  // r = a / (p^k b'), {r}_p = (a / b' mod p^k) / p^k
  Rational scaled = r * prime_power(p, static_cast<int>(k));
  return {reduce_mod_prime_power(scaled, p, k), mod};
}

Complex additive_character(const Rational& r, std::uint64_t p) {
  auto [num, den] = p_fractional_part(r, p);
  return root_of_unity(num, den);
}

GaussSumPoint gauss_sum_bruteforce_detail(const Rational& x, const ExtendedCharacter& mu) {
  if (x == 0) throw std::domain_error("gauss_sum_bruteforce: x must be nonzero");
  std::uint64_t p = mu.prime();
  int v = valuation(x, p).value();
  unsigned K = std::max<unsigned>({mu.conductor_exponent(), static_cast<unsigned>(std::max(-v, 0)), 1u});
  std::uint64_t modK = ipow(p, K);
  // Evaluate mu at its own level; any lift of y is fine since a(mu) <= K.
  unsigned mu_level = std::max(mu.conductor_exponent(), 1u);
  ExtendedCharacter m = mu.lift(mu_level);
  std::uint64_t mu_mod = ipow(p, mu_level);
  std::vector<Complex> mu_values(mu_mod, Complex(0.0));
  for (std::uint64_t u = 1; u < mu_mod; ++u)
    if (u % p != 0) mu_values[u] = m.on_residue(u);

  std::uint64_t add_mod = v >= 0 ? 1 : ipow(p, static_cast<unsigned>(-v));
  std::uint64_t x0 = v >= 0 ? 0 : unit_residue(x, p, static_cast<unsigned>(-v));
  std::vector<Complex> add_roots(add_mod);
  for (std::uint64_t j = 0; j < add_mod; ++j) add_roots[j] = root_of_unity(j, add_mod);

  Complex sum = 0;
  for (std::uint64_t y = 1; y < modK; ++y) {
    if (y % p == 0) continue;
    Complex a = add_mod == 1 ? Complex(1.0) : add_roots[mod_mul(x0, y % add_mod, add_mod)];
    sum += a * mu_values[y % mu_mod];
  }
  return {sum / static_cast<double>(euler_phi_prime_power(p, K)), K};
}

Complex gauss_sum_bruteforce(const Rational& x, const ExtendedCharacter& mu) {
  return gauss_sum_bruteforce_detail(x, mu).value;
}

EpsilonDatum epsilon_factor(const ExtendedCharacter& mu) {
  unsigned a = mu.conductor_exponent();
  if (a == 0) return {mu, Complex(1.0), 0};
  double q = static_cast<double>(mu.prime());
  double zeta = q / (q - 1.0);
  Complex g = gauss_sum_bruteforce(prime_power(mu.prime(), -static_cast<int>(a)), mu.inverse());
  return {mu, g * std::pow(q, 0.5 * a) / zeta, a};
}

Complex gauss_sum_closed(const Rational& x, const ExtendedCharacter& mu, const EpsilonDatum* eps_mu_inverse) {
  if (x == 0) throw std::domain_error("gauss_sum_closed: x must be nonzero");
  std::uint64_t p = mu.prime();
  double q = static_cast<double>(p);
  double zeta = q / (q - 1.0);
  int v = valuation(x, p).value();
  unsigned a = mu.conductor_exponent();
  if (a == 0) {
    if (v >= 0) return 1.0;
    if (v == -1) return -zeta / q;
    return 0.0;
  }
  if (eps_mu_inverse == nullptr) throw std::invalid_argument("gauss_sum_closed: epsilon datum required");
  if (!(eps_mu_inverse->character == mu.inverse()))
    throw std::invalid_argument("gauss_sum_closed: epsilon datum is not for mu^{-1}");
  if (v != -static_cast<int>(a)) return 0.0;
  return zeta * std::pow(q, 0.5 * v) * eps_mu_inverse->value * mu.inverse()(x);
}

Complex gauss_sum_closed(const Rational& x, const ExtendedCharacter& mu) {
  if (mu.is_trivial()) return gauss_sum_closed(x, mu, nullptr);
  EpsilonDatum e = epsilon_factor(mu.inverse());
  return gauss_sum_closed(x, mu, &e);
}

std::vector<Complex> local_l_factor_inverse(const ExtendedCharacter& chi) {
  if (chi.is_ramified()) return {Complex(1.0)};
  // chi(p) = 1 by normalization
  return {Complex(1.0), Complex(-1.0)};
}

}  // namespace gl2sup
