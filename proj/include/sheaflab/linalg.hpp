#pragma once

// Exact linear algebra over a prime field GF(p).
//
// Vectors are row vectors; a subspace is stored by a basis in reduced row
// echelon form, which is canonical: two subspaces are equal iff their
// bases are equal.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sheaflab/util.hpp"

namespace sheaflab {

using Residue = std::uint32_t;

inline constexpr std::uint64_t kDefaultPrime = 2147483647ULL;

class PrimeField {
 public:
  // Throws InputError unless p is a prime below 2^32.
  explicit PrimeField(std::uint64_t p = kDefaultPrime);

  std::uint64_t modulus() const { return p_; }

  Residue reduce(std::int64_t x) const;
  Residue add(Residue a, Residue b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Residue>(s >= p_ ? s - p_ : s);
  }
  Residue sub(Residue a, Residue b) const {
    return static_cast<Residue>(a >= b ? a - b : a + p_ - b);
  }
  Residue neg(Residue a) const { return a == 0 ? 0 : static_cast<Residue>(p_ - a); }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>((std::uint64_t{a} * b) % p_);
  }
  Residue pow(Residue a, std::uint64_t e) const;
  Residue inv(Residue a) const;  // InputError on zero

  Residue random(Rng& rng) const { return static_cast<Residue>(uniform_below(rng, p_)); }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<Residue> data);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Residue& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Residue> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Residue> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Residue>& data() const { return data_; }

  bool is_zero() const;
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Residue> data_;
};

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b);
Matrix add(const PrimeField& f, const Matrix& a, const Matrix& b);
Matrix subtract(const PrimeField& f, const Matrix& a, const Matrix& b);
Matrix scale(const PrimeField& f, const Matrix& a, Residue s);
Matrix transpose(const Matrix& a);
Matrix kronecker(const PrimeField& f, const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& top, const Matrix& bottom);
Matrix hstack(const Matrix& left, const Matrix& right);
// Copies `block` into `into` with its top-left corner at (r, c).
void place_block(Matrix& into, std::size_t r, std::size_t c, const Matrix& block);
Matrix select_columns(const Matrix& a, std::span<const std::size_t> cols);
Matrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, Rng& rng);

struct Echelon {
  Matrix reduced;                   // rank x cols, reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each row, increasing
};

Echelon row_reduce(const PrimeField& f, Matrix m);
std::size_t rank(const PrimeField& f, Matrix m);

class Subspace {
 public:
  Subspace(PrimeField field, std::size_t ambient_dim);  // zero subspace

  // Span of the rows of `spanning`.
  static Subspace span(const PrimeField& field, const Matrix& spanning);
  static Subspace full(const PrimeField& field, std::size_t ambient_dim);

  const PrimeField& field() const { return field_; }
  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  bool contains(std::span<const Residue> v) const;
  bool contains(const Subspace& other) const;

  // Coordinates of v in the echelon basis; InputError if v is not a member.
  std::vector<Residue> coordinates(std::span<const Residue> v) const;

  // Matrix (ambient - dim) x ambient sending x to its class in the quotient,
  // expressed on the non-pivot coordinates of the echelon basis.
  Matrix quotient_map() const;
  // Matrix ambient x (ambient - dim) embedding quotient coordinates back as
  // the representative supported on non-pivot coordinates.
  Matrix quotient_section() const;

  // Basis as columns (ambient x dim); the inclusion map into the ambient space.
  Matrix inclusion() const { return transpose(basis_); }

  bool operator==(const Subspace& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }

 private:
  Subspace(PrimeField field, std::size_t ambient, Echelon e);

  PrimeField field_;
  std::size_t ambient_;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);

// Right kernel {v : m v = 0}, as a subspace of GF(p)^cols.
Subspace kernel(const PrimeField& f, const Matrix& m);
// Image m(GF(p)^cols) as a subspace of GF(p)^rows.
Subspace image(const PrimeField& f, const Matrix& m);

struct RankKernel {
  std::size_t rank;
  Subspace kernel;
};

RankKernel rank_kernel(const PrimeField& f, const Matrix& m);

// Vandermonde matrix k x n with distinct nonzero nodes taken from a seeded
// shuffle of 1..p-1; every k columns are linearly independent.
Matrix vandermonde_totally_independent(std::size_t k, std::size_t n, const PrimeField& f,
                                       std::uint64_t seed);
Matrix vandermonde_from_nodes(std::size_t k, std::span<const Residue> nodes, const PrimeField& f);

// Exhaustive check that every min(k, cols) columns are independent.
bool is_totally_independent(const PrimeField& f, const Matrix& m);

// Every subspace of GF(q)^d, ordered by dimension then by echelon basis.
// Intended for q in {2, 3} and small d.
std::vector<Subspace> all_subspaces(const PrimeField& f, std::size_t d);
// Number of subspaces of GF(q)^d (sum of Gaussian binomials); saturates.
std::uint64_t count_subspaces(std::uint64_t q, std::size_t d);

std::string format_matrix(const Matrix& m);

}  // namespace sheaflab
