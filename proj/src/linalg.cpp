#include "runge/linalg.hpp"

#include <utility>

#include "runge/error.hpp"

namespace runge {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(Errc::InvalidArgument, "ragged matrix literal");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::select_rows(const std::vector<std::size_t>& rows) const {
  IntMatrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(rows[i], j);
  return out;
}

IntMatrix IntMatrix::select_cols(const std::vector<std::size_t>& cols) const {
  IntMatrix out(rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = (*this)(i, cols[j]);
  return out;
}

std::vector<mpz_class> IntMatrix::apply(const std::vector<mpz_class>& v) const {
  if (v.size() != cols_) throw Error(Errc::InvalidArgument, "vector length does not match column count");
  std::vector<mpz_class> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

mpz_class IntMatrix::max_abs_entry() const {
  mpz_class best = 0;
  for (const auto& v : data_)
    if (abs(v) > best) best = abs(v);
  return best;
}

namespace {

// Reduces m in place to row-echelon form; returns rank and the sign/last pivot
// needed for determinants.
struct Elimination {
  std::size_t rank = 0;
  int sign = 1;
  mpz_class last_pivot = 1;
};

Elimination eliminate(IntMatrix& m) {
  Elimination out;
  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
      out.sign = -out.sign;
    }
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      for (std::size_t j = col + 1; j < m.cols(); ++j) {
        m(i, j) = m(i, j) * m(row, col) - m(i, col) * m(row, j);
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      m(i, col) = 0;
    }
    prev = m(row, col);
    ++row;
  }
  out.rank = row;
  out.last_pivot = prev;
  return out;
}

}  // namespace

std::size_t bareiss_rank(IntMatrix m) { return eliminate(m).rank; }

mpz_class bareiss_determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw Error(Errc::InvalidArgument, "determinant of a non-square matrix");
  if (m.rows() == 0) return 1;
  const auto e = eliminate(m);
  if (e.rank < m.rows()) return 0;
  return e.sign * e.last_pivot;
}

std::vector<std::size_t> independent_columns(const IntMatrix& m) {
  std::vector<std::size_t> chosen;
  for (std::size_t j = 0; j < m.cols() && chosen.size() < m.rows(); ++j) {
    auto trial = chosen;
    trial.push_back(j);
    if (bareiss_rank(m.select_cols(trial)) == trial.size()) chosen = std::move(trial);
  }
  return chosen;
}

bool within_hadamard_bound(const mpz_class& l1_norm, std::size_t s, const mpz_class& entry_bound) {
  // (s^(s/2+1) A^(s-1))^2 = s^(s+2) A^(2s-2)
  mpz_class rhs, a_pow;
  mpz_ui_pow_ui(rhs.get_mpz_t(), s, s + 2);
  mpz_pow_ui(a_pow.get_mpz_t(), entry_bound.get_mpz_t(), 2 * s - 2);
  return l1_norm * l1_norm <= rhs * a_pow;
}

std::vector<mpz_class> runge_vector(const IntMatrix& m, const mpz_class& entry_bound) {
  const std::size_t s = m.rows();
  if (s == 0) throw Error(Errc::InvalidArgument, "matrix has no rows");
  if (m.max_abs_entry() > entry_bound) throw Error(Errc::InvalidArgument, "entry exceeds the stated bound A");
  const auto cols = independent_columns(m);
  if (cols.size() < s) throw Error(Errc::RankDeficient, "matrix rank is below its row count");

  const IntMatrix square = m.select_cols(cols);
  const mpz_class d = bareiss_determinant(square);
  const int sign = sgn(d);
  std::vector<mpz_class> b(m.cols());
  for (std::size_t k = 0; k < s; ++k) {
    IntMatrix replaced = square;
    for (std::size_t i = 0; i < s; ++i) replaced(i, k) = 1;
    b[cols[k]] = sign * bareiss_determinant(std::move(replaced));
  }

  mpz_class l1 = 0;
  for (const auto& v : b) l1 += abs(v);
  const auto image = m.apply(b);
  for (const auto& v : image)
    if (v <= 0) throw Error(Errc::BoundViolated, "M*b has a non-positive coordinate");
  if (!within_hadamard_bound(l1, s, entry_bound))
    throw Error(Errc::BoundViolated, "||b||_1 exceeds s^(s/2+1) A^(s-1)");
  return b;
}

}  // namespace runge
