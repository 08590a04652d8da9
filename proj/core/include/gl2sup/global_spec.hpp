#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gl2sup/arch_whittaker.hpp"
#include "gl2sup/local_newform.hpp"
#include "gl2sup/rational.hpp"

namespace gl2sup {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data at a prime p | N. High primes (c > n/2) carry the principal series
// chi1 [+] chi2 with a1 = c, a2 = n - c; low primes carry only the
// constant bounding the L^2 average of the local newform.
struct PrimeData {
  std::uint64_t p = 0;
  int n = 0;
  int c = 0;
  std::optional<PrincipalSeriesLocal> rep;
  double l2_constant = 4.0;

  bool high() const { return rep.has_value(); }
  int a2() const { return n - c; }
};

struct GlobalConfig {
  Rational epsilon{1, 100};
  double c_phi = 1.0;
  double kappa_cutoff = 40.0;  // stop once 2 pi |q| y exceeds this
  std::uint64_t smax = 10000;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  std::vector<double> x_grid{0.0};
  std::vector<double> y_grid{0.8660254037844386, 1.0, 2.0};
  std::size_t max_points = 64;
  std::int64_t support_numerator_bound = 10000;
};

struct NewformSpecGlobal {
  std::vector<PrimeData> primes;  // increasing p
  std::uint64_t N = 1;
  std::uint64_t C = 1;
  Rational delta = 0;
  ArchimedeanType arch = ArchimedeanType::holomorphic(2);
  std::optional<std::string> lambda_file;
  GlobalConfig config;

  bool maximally_ramified() const { return N == C; }
  const PrimeData* find(std::uint64_t p) const;
  std::vector<std::uint64_t> prime_list() const;
  double epsilon() const { return config.epsilon.get_d(); }
};

// Build and validate a spec from (p, n_p) and (p, c_p) lists, using the
// default primitive characters at high primes.
NewformSpecGlobal make_spec(const std::vector<std::pair<std::uint64_t, int>>& level,
                            const std::vector<std::pair<std::uint64_t, int>>& conductor, Rational delta = 0,
                            ArchimedeanType arch = ArchimedeanType::holomorphic(2), double l2_constant = 4.0);

// Parse the JSON spec format. Relative lambda_file paths are resolved
// against base_dir. Throws InputError with line/column on malformed input.
NewformSpecGlobal parse_spec(const std::string& text, const std::string& base_dir = ".");
NewformSpecGlobal load_spec(const std::string& path);

Rational parse_rational(const std::string& s);

}  // namespace gl2sup
