#include "gl2sup/eigenvalues.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gl2sup {

MissingEigenvalue::MissingEigenvalue(std::uint64_t index)
    : std::out_of_range("missing eigenvalue lambda(" + std::to_string(index) + ")"), index_(index), requested_(index) {}

MissingEigenvalue::MissingEigenvalue(std::uint64_t index, std::uint64_t requested)
    : std::out_of_range("missing eigenvalue lambda(" + std::to_string(index) + "): table has no row n = " +
                        std::to_string(index) + " (requested n = " + std::to_string(requested) + ")"),
      index_(index),
      requested_(requested) {}

EigenvalueFormatError::EigenvalueFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::uint64_t divisor_count(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisor_count: n must be positive");
  std::uint64_t d = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    d *= e + 1;
  }
  if (n > 1) d *= 2;
  return d;
}

DivisorEigenvalues::DivisorEigenvalues(std::uint64_t limit) : table_(limit + 1, 0) {
  for (std::uint64_t i = 1; i <= limit; ++i)
    for (std::uint64_t j = i; j <= limit; j += i) ++table_[j];
}

std::complex<double> DivisorEigenvalues::lambda(std::uint64_t n) const {
  if (n == 0) throw MissingEigenvalue(0);
  if (n < table_.size()) return static_cast<double>(table_[n]);
  return static_cast<double>(divisor_count(n));
}

TableEigenvalues::TableEigenvalues(std::vector<std::complex<double>> values, std::string origin)
    : values_(std::move(values)), origin_(std::move(origin)) {}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, std::size_t line) {
  std::string f = trim(field);
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(f, &pos);
  } catch (const std::exception&) {
    throw EigenvalueFormatError(line, "not a number: '" + f + "'");
  }
  if (pos != f.size()) throw EigenvalueFormatError(line, "not a number: '" + f + "'");
  return v;
}

}  // namespace

TableEigenvalues TableEigenvalues::from_csv(std::istream& in, const std::string& origin) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw EigenvalueFormatError(1, "empty eigenvalue file");
  ++lineno;
  if (trim(line) != "n,lambda_re,lambda_im") throw EigenvalueFormatError(1, "expected header n,lambda_re,lambda_im");
  std::vector<std::complex<double>> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 3) throw EigenvalueFormatError(lineno, "expected 3 columns");
    std::string idx = trim(fields[0]);
    std::uint64_t n = 0;
    auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), n);
    if (ec != std::errc() || p != idx.data() + idx.size()) throw EigenvalueFormatError(lineno, "bad index '" + idx + "'");
    if (n != values.size() + 1)
      throw EigenvalueFormatError(lineno, "expected n = " + std::to_string(values.size() + 1) + ", got " + idx);
    values.emplace_back(parse_double(fields[1], lineno), parse_double(fields[2], lineno));
  }
  return TableEigenvalues(std::move(values), origin);
}

TableEigenvalues TableEigenvalues::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open eigenvalue file " + path);
  return from_csv(in, path);
}

std::complex<double> TableEigenvalues::lambda(std::uint64_t n) const {
  if (n == 0) throw MissingEigenvalue(0);
  if (n > values_.size()) throw MissingEigenvalue(values_.size() + 1, n);
  return values_[n - 1];
}

}  // namespace gl2sup
