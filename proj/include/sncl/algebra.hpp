#pragma once

// Exact residue arithmetic over Z_d and F_q, small dense matrices over them,
// and the systematic MDS generator used by the wiretap-II code.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sncl {

class ModulusMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_prime(std::uint64_t n);

/// Element of the quotient ring Z_d. The stored value is always the
/// canonical residue in [0, d).
class RingElement {
 public:
  RingElement(std::int64_t value, std::uint32_t modulus);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return modulus_; }

  RingElement operator+(const RingElement& rhs) const;
  RingElement operator-(const RingElement& rhs) const;
  RingElement operator*(const RingElement& rhs) const;
  RingElement operator-() const;

  bool operator==(const RingElement&) const = default;

 private:
  void require_same_modulus(const RingElement& rhs) const;

  std::uint32_t value_;
  std::uint32_t modulus_;
};

/// Multiplicative inverse in Z_d; empty when gcd(a, d) != 1.
std::optional<RingElement> invert(const RingElement& a);

/// Element of the prime field F_q.
class PrimeFieldElement {
 public:
  PrimeFieldElement(std::int64_t value, std::uint32_t q);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return q_; }

  PrimeFieldElement operator+(const PrimeFieldElement& rhs) const;
  PrimeFieldElement operator-(const PrimeFieldElement& rhs) const;
  PrimeFieldElement operator*(const PrimeFieldElement& rhs) const;
  PrimeFieldElement operator/(const PrimeFieldElement& rhs) const;
  PrimeFieldElement operator-() const;
  // Throws std::domain_error for zero.
  PrimeFieldElement inverse() const;

  bool operator==(const PrimeFieldElement&) const = default;

 private:
  PrimeFieldElement(std::uint32_t value, std::uint32_t q, bool /*trusted*/)
      : value_(value), q_(q) {}
  void require_same_modulus(const PrimeFieldElement& rhs) const;

  std::uint32_t value_;
  std::uint32_t q_;
};

/// Dense row-major matrix whose entries are residues sharing one modulus.
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, std::uint32_t modulus);
  Matrix(std::size_t rows, std::size_t cols, std::uint32_t modulus,
         std::vector<std::int64_t> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t modulus() const { return modulus_; }
  std::span<const std::uint32_t> entries() const { return entries_; }

  std::uint32_t at(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  void set(std::size_t i, std::size_t j, std::int64_t v);

  Matrix select_columns(std::span<const std::size_t> columns) const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::uint32_t modulus_;
  std::vector<std::uint32_t> entries_;
};

/// Determinant of a square matrix over a prime field.
std::uint32_t determinant(const Matrix& m);

/// Rank over a prime field.
std::size_t rank(const Matrix& m);

/// r x k generator [I_r | C] over F_q where C is an r x (k-r) Cauchy matrix.
/// Every r x r column selection is invertible. Requires k > r >= 1, q prime,
/// q >= k.
Matrix build_mds_generator(std::size_t k, std::size_t r, std::uint32_t q);

/// True iff every rows x rows column selection has nonzero determinant.
bool verify_mds(const Matrix& m);

// Text form: "rows cols modulus" then the entries in row-major order.
std::string to_text(const Matrix& m);
Matrix matrix_from_text(std::string_view text);

}  // namespace sncl
