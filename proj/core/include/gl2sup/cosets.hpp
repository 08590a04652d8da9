#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gl2sup/local_field.hpp"

namespace gl2sup {

// (m, l, nu) indexing the double coset ZN g_{m,l,nu} K1(p^n).
struct CosetTriple {
  int m = 0;
  int ell = 0;
  std::uint64_t nu = 1;  // canonical residue mod p^{ell_n}
  int n = 0;

  bool operator==(const CosetTriple&) const = default;
  std::string to_string() const;
};

inline int ell_n(int ell, int n) { return std::min(ell, n - ell); }

// Least positive representative of nu mod p^k; 1 when k == 0.
std::uint64_t canonical_nu(std::uint64_t p, std::int64_t nu, unsigned k);
CosetTriple make_triple(std::uint64_t p, int n, int m, int ell, std::int64_t nu);

// [[0, p^m], [-1, -p^{-l} nu]]
LocalMatrix representative(std::uint64_t p, const CosetTriple& t);

// Certificate that g = z(zeta) n(x) h k with k in K1(p^n).
struct CosetWitness {
  Rational zeta;
  Rational x;
  LocalMatrix k;
};

// Exact search for a witness. Complete: returns nullopt only when g is not
// in ZN h K1(p^n).
std::optional<CosetWitness> find_witness(const LocalMatrix& g, const LocalMatrix& h, int n);

struct CosetReduction {
  CosetTriple triple;
  CosetWitness witness;  // relative to representative(triple)
};

CosetReduction reduce_to_triple(const LocalMatrix& g, int n);

// Every triple with the given m, ordered by l then nu.
std::vector<CosetTriple> canonical_index_set(std::uint64_t p, int n, int m);

struct MirrorResult {
  CosetTriple image;
  Rational twist;  // the identity carries diag(1, twist) on the right
  Rational x;      // left unipotent parameter
  Rational zeta;   // left central parameter
};

// n(p^{l+m}/nu) z(p^{l-n}/nu) g_{m,l,nu} A = g_{m+2l-n, n-l, -nu} diag(1, -nu^{-2})
// with A = antidiag(1, p^n). Asserted exactly; throws std::logic_error otherwise.
MirrorResult mirror(std::uint64_t p, const CosetTriple& t);

enum class TranslateBranch { LowEll, HighEll };

struct TranslateClass {
  CosetTriple triple;
  TranslateBranch branch;
};

// g in K a(p^e); branch l <= e gives m = -e, branch e < l <= n gives
// m = -2l + e. Cross-checked against reduce_to_triple.
TranslateClass classify_translate(const LocalMatrix& g, int n, int e);

struct DisjointCoverReport {
  std::uint64_t p = 0;
  int n = 0;
  std::size_t samples = 0;
  std::size_t covered = 0;
  std::size_t triples = 0;
  std::size_t pairs_checked = 0;
  std::size_t overlaps = 0;
  std::vector<std::string> failures;
  bool ok() const { return covered == samples && overlaps == 0 && failures.empty(); }
};

DisjointCoverReport verify_disjoint_cover(std::uint64_t p, int n, std::size_t samples,
                                          std::uint64_t seed = 1, int m_min = -6, int m_max = 2);

// Random elements used by tests and verification runs.
LocalMatrix random_gl2(std::uint64_t p, std::mt19937_64& rng, int max_val = 3);
LocalMatrix random_gl2_zp(std::uint64_t p, std::mt19937_64& rng);
LocalMatrix random_k1(std::uint64_t p, int n, std::mt19937_64& rng);

}  // namespace gl2sup
