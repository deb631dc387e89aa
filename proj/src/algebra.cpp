#include "sncl/algebra.hpp"

#include <numeric>
#include <sstream>

#include "sncl/combinatorics.hpp"

namespace sncl {

namespace {

std::uint32_t reduce(std::int64_t v, std::uint32_t m) {
  std::int64_t r = v % static_cast<std::int64_t>(m);
  if (r < 0) r += m;
  return static_cast<std::uint32_t>(r);
}

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t m) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % m);
}

// Extended Euclid; returns x with a*x = 1 (mod m) when gcd(a, m) = 1.
std::optional<std::uint32_t> inverse_mod(std::uint32_t a, std::uint32_t m) {
  std::int64_t old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) return std::nullopt;
  return reduce(old_s, m);
}

void require_prime_modulus(const Matrix& m, const char* what) {
  if (!is_prime(m.modulus()))
    throw std::invalid_argument(std::string(what) + ": modulus " +
                                std::to_string(m.modulus()) + " is not prime");
}

// Row-reduces in place over F_q; returns rank and the determinant of the
// leading square block when the matrix is square.
std::size_t eliminate(std::vector<std::uint32_t>& a, std::size_t rows,
                      std::size_t cols, std::uint32_t q, std::uint32_t* det) {
  std::uint32_t d = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + col] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < cols; ++j)
        std::swap(a[pivot * cols + j], a[rank * cols + j]);
      d = (q - d) % q;
    }
    const std::uint32_t pv = a[rank * cols + col];
    d = mul_mod(d, pv, q);
    const std::uint32_t inv = *inverse_mod(pv, q);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const std::uint32_t factor = mul_mod(a[i * cols + col], inv, q);
      if (factor == 0) continue;
      for (std::size_t j = col; j < cols; ++j) {
        const std::uint32_t sub = mul_mod(factor, a[rank * cols + j], q);
        a[i * cols + j] = (a[i * cols + j] + q - sub) % q;
      }
    }
    ++rank;
  }
  if (det) *det = rank == rows ? d : 0;
  return rank;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

RingElement::RingElement(std::int64_t value, std::uint32_t modulus)
    : value_(0), modulus_(modulus) {
  if (modulus < 2) throw std::invalid_argument("RingElement: modulus must be >= 2");
  value_ = reduce(value, modulus);
}

void RingElement::require_same_modulus(const RingElement& rhs) const {
  if (modulus_ != rhs.modulus_)
    throw ModulusMismatch("Z_" + std::to_string(modulus_) + " vs Z_" +
                          std::to_string(rhs.modulus_));
}

RingElement RingElement::operator+(const RingElement& rhs) const {
  require_same_modulus(rhs);
  return {static_cast<std::int64_t>(value_) + rhs.value_, modulus_};
}

RingElement RingElement::operator-(const RingElement& rhs) const {
  require_same_modulus(rhs);
  return {static_cast<std::int64_t>(value_) - rhs.value_, modulus_};
}

RingElement RingElement::operator*(const RingElement& rhs) const {
  require_same_modulus(rhs);
  return {static_cast<std::int64_t>(mul_mod(value_, rhs.value_, modulus_)), modulus_};
}

RingElement RingElement::operator-() const {
  return {-static_cast<std::int64_t>(value_), modulus_};
}

std::optional<RingElement> invert(const RingElement& a) {
  auto inv = inverse_mod(a.value(), a.modulus());
  if (!inv) return std::nullopt;
  return RingElement(*inv, a.modulus());
}

PrimeFieldElement::PrimeFieldElement(std::int64_t value, std::uint32_t q)
    : value_(0), q_(q) {
  if (!is_prime(q))
    throw std::invalid_argument("PrimeFieldElement: " + std::to_string(q) +
                                " is not prime");
  value_ = reduce(value, q);
}

void PrimeFieldElement::require_same_modulus(const PrimeFieldElement& rhs) const {
  if (q_ != rhs.q_)
    throw ModulusMismatch("F_" + std::to_string(q_) + " vs F_" + std::to_string(rhs.q_));
}

PrimeFieldElement PrimeFieldElement::operator+(const PrimeFieldElement& rhs) const {
  require_same_modulus(rhs);
  return {(value_ + rhs.value_) % q_, q_, true};
}

PrimeFieldElement PrimeFieldElement::operator-(const PrimeFieldElement& rhs) const {
  require_same_modulus(rhs);
  return {(value_ + q_ - rhs.value_) % q_, q_, true};
}

PrimeFieldElement PrimeFieldElement::operator*(const PrimeFieldElement& rhs) const {
  require_same_modulus(rhs);
  return {mul_mod(value_, rhs.value_, q_), q_, true};
}

PrimeFieldElement PrimeFieldElement::operator/(const PrimeFieldElement& rhs) const {
  return *this * rhs.inverse();
}

PrimeFieldElement PrimeFieldElement::operator-() const {
  return {(q_ - value_) % q_, q_, true};
}

PrimeFieldElement PrimeFieldElement::inverse() const {
  if (value_ == 0) throw std::domain_error("PrimeFieldElement: zero has no inverse");
  return {*inverse_mod(value_, q_), q_, true};
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::uint32_t modulus)
    : rows_(rows), cols_(cols), modulus_(modulus), entries_(rows * cols, 0) {
  if (modulus < 2) throw std::invalid_argument("Matrix: modulus must be >= 2");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::uint32_t modulus,
               std::vector<std::int64_t> entries)
    : Matrix(rows, cols, modulus) {
  if (entries.size() != rows * cols)
    throw std::invalid_argument("Matrix: expected " + std::to_string(rows * cols) +
                                " entries, got " + std::to_string(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) entries_[i] = reduce(entries[i], modulus);
}

void Matrix::set(std::size_t i, std::size_t j, std::int64_t v) {
  entries_.at(i * cols_ + j) = reduce(v, modulus_);
}

Matrix Matrix::select_columns(std::span<const std::size_t> columns) const {
  Matrix out(rows_, columns.size(), modulus_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < columns.size(); ++j)
      out.entries_[i * columns.size() + j] = at(i, columns[j]);
  return out;
}

std::uint32_t determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  require_prime_modulus(m, "determinant");
  if (m.rows() == 0) return 1;
  std::vector<std::uint32_t> a(m.entries().begin(), m.entries().end());
  std::uint32_t det = 0;
  eliminate(a, m.rows(), m.cols(), m.modulus(), &det);
  return det;
}

std::size_t rank(const Matrix& m) {
  require_prime_modulus(m, "rank");
  std::vector<std::uint32_t> a(m.entries().begin(), m.entries().end());
  return eliminate(a, m.rows(), m.cols(), m.modulus(), nullptr);
}

Matrix build_mds_generator(std::size_t k, std::size_t r, std::uint32_t q) {
  if (r < 1 || k <= r)
    throw std::invalid_argument("build_mds_generator: need k > r >= 1");
  if (!is_prime(q))
    throw std::invalid_argument("build_mds_generator: q = " + std::to_string(q) +
                                " is not prime");
  if (q < k)
    throw std::invalid_argument("build_mds_generator: need q >= k (q = " +
                                std::to_string(q) + ", k = " + std::to_string(k) + ")");
  Matrix g(r, k, q);
  for (std::size_t i = 0; i < r; ++i) g.set(i, i, 1);
  // Cauchy block 1 / (x_i - y_j) with x_i = i and y_j = r + j; all k points
  // are distinct in F_q because q >= k.
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < k - r; ++j) {
      const auto diff = reduce(static_cast<std::int64_t>(i) - static_cast<std::int64_t>(r + j), q);
      g.set(i, r + j, *inverse_mod(diff, q));
    }
  }
  return g;
}

bool verify_mds(const Matrix& m) {
  require_prime_modulus(m, "verify_mds");
  if (m.rows() > m.cols()) throw std::invalid_argument("verify_mds: rows > cols");
  bool ok = true;
  for_each_combination(m.cols(), m.rows(), [&](const std::vector<std::size_t>& cols) {
    if (ok && determinant(m.select_columns(cols)) == 0) ok = false;
  });
  return ok;
}

std::string to_text(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << ' ' << m.modulus() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m.at(i, j);
    os << '\n';
  }
  return os.str();
}

Matrix matrix_from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  long long rows = -1, cols = -1, modulus = -1;
  if (!(is >> rows >> cols >> modulus) || rows < 0 || cols < 0 || modulus < 2)
    throw std::invalid_argument("matrix_from_text: bad header");
  std::vector<std::int64_t> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  std::int64_t v = 0;
  while (is >> v) entries.push_back(v);
  if (!is.eof()) throw std::invalid_argument("matrix_from_text: non-integer entry");
  return Matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                static_cast<std::uint32_t>(modulus), std::move(entries));
}

}  // namespace sncl
