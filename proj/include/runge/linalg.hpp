#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include <gmpxx.h>

namespace runge {

// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix select_rows(const std::vector<std::size_t>& rows) const;
  IntMatrix select_cols(const std::vector<std::size_t>& cols) const;
  std::vector<mpz_class> apply(const std::vector<mpz_class>& v) const;
  mpz_class max_abs_entry() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<mpz_class> data_;
};

// Fraction-free (Bareiss) elimination; exact over Q.
std::size_t bareiss_rank(IntMatrix m);
mpz_class bareiss_determinant(IntMatrix m);

// Greedy left-to-right column scan: a column is kept when it raises the rank.
std::vector<std::size_t> independent_columns(const IntMatrix& m);

// Integer vector b with every coordinate of M*b strictly positive, built from
// the first nonsingular s x s minor found by column scan (Cramer's rule with a
// right-hand side of all |det|). ||b||_1 <= s^(s/2+1) A^(s-1) by Hadamard.
std::vector<mpz_class> runge_vector(const IntMatrix& m, const mpz_class& entry_bound);

// Exact test of ||b||_1 <= s^(s/2+1) A^(s-1), squared to stay in Z.
bool within_hadamard_bound(const mpz_class& l1_norm, std::size_t s, const mpz_class& entry_bound);

}  // namespace runge
