#pragma once

#include <complex>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gl2sup {

class MissingEigenvalue : public std::out_of_range {
 public:
  explicit MissingEigenvalue(std::uint64_t index);
  // A table ending before `requested`; index() is the first absent row.
  MissingEigenvalue(std::uint64_t index, std::uint64_t requested);
  std::uint64_t index() const { return index_; }
  std::uint64_t requested() const { return requested_; }

 private:
  std::uint64_t index_;
  std::uint64_t requested_;
};

class EigenvalueFormatError : public std::runtime_error {
 public:
  EigenvalueFormatError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Hecke eigenvalues lambda(n), n >= 1, normalized so that |lambda(p)| <= 2 p^delta.
class EigenvalueSource {
 public:
  virtual ~EigenvalueSource() = default;
  virtual std::complex<double> lambda(std::uint64_t n) const = 0;
  double abs_lambda(std::uint64_t n) const { return std::abs(lambda(n)); }
  virtual std::string describe() const = 0;
};

std::uint64_t divisor_count(std::uint64_t n);

// lambda(n) = d(n). A sieve covers n <= limit, trial division beyond.
class DivisorEigenvalues final : public EigenvalueSource {
 public:
  explicit DivisorEigenvalues(std::uint64_t limit = 1u << 20);
  std::complex<double> lambda(std::uint64_t n) const override;
  std::string describe() const override { return "synthetic d(n)"; }

 private:
  std::vector<std::uint32_t> table_;
};

// CSV with header n,lambda_re,lambda_im and consecutive rows from n = 1.
class TableEigenvalues final : public EigenvalueSource {
 public:
  explicit TableEigenvalues(std::vector<std::complex<double>> values, std::string origin = "table");
  static TableEigenvalues from_csv(std::istream& in, const std::string& origin = "csv");
  static TableEigenvalues from_file(const std::string& path);

  std::complex<double> lambda(std::uint64_t n) const override;
  std::string describe() const override { return origin_; }
  std::uint64_t size() const { return values_.size(); }

 private:
  std::vector<std::complex<double>> values_;
  std::string origin_;
};

}  // namespace gl2sup
