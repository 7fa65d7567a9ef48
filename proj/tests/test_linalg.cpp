#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "sheaflab/error.hpp"
#include "sheaflab/linalg.hpp"

using namespace sheaflab;

namespace {

Matrix from_rows(std::size_t r, std::size_t c, std::vector<Residue> v) {
  return Matrix(r, c, std::move(v));
}

}  // namespace

TEST_CASE("prime field arithmetic") {
  PrimeField f(7);
  CHECK(f.add(5, 4) == 2);
  CHECK(f.sub(2, 5) == 4);
  CHECK(f.mul(3, 5) == 1);
  CHECK(f.inv(3) == 5);
  CHECK(f.reduce(-1) == 6);
  CHECK(f.pow(3, 6) == 1);
  CHECK_THROWS_AS(PrimeField(8), InputError);
  CHECK_THROWS_AS(f.inv(0), InputError);
  PrimeField big;
  CHECK(big.modulus() == 2147483647ULL);
  CHECK(big.mul(big.inv(123456789), 123456789) == 1);
}

TEST_CASE("rank and kernel of identity and zero") {
  PrimeField f;
  for (std::size_t d : {1u, 3u, 6u}) {
    auto rk = rank_kernel(f, Matrix::identity(d));
    CHECK(rk.rank == d);
    CHECK(rk.kernel.dim() == 0);
    auto z = rank_kernel(f, Matrix(d, d + 1));
    CHECK(z.rank == 0);
    CHECK(z.kernel.dim() == d + 1);
  }
}

TEST_CASE("twisted unhappy matrix has a one dimensional kernel at random psi") {
  PrimeField f;
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Residue p1 = f.random(rng);
    const Residue p2 = f.random(rng);
    const Residue m1 = f.neg(p1), m2 = f.neg(p2);
    Matrix d = from_rows(4, 4, {1, 0, 1, 0,  //
                                0, 1, m2, 0,  //
                                m1, 0, 0, 1,  //
                                0, m1, 0, m2});
    auto rk = rank_kernel(f, d);
    CHECK(rk.rank == 3);
    CHECK(rk.kernel.dim() == 1);
    // The relation nu1 - psi2 nu2 - nu3 + psi1 nu4 = 0 spans the kernel.
    std::vector<Residue> rel{1, m2, f.neg(1), p1};
    CHECK(rk.kernel.contains(rel));
  }
}

TEST_CASE("kernel vectors are annihilated") {
  PrimeField f(101);
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 1 + uniform_below(rng, 5);
    const std::size_t c = 1 + uniform_below(rng, 6);
    Matrix m = random_matrix(f, r, c, rng);
    if (trial % 3 == 0) m = multiply(f, random_matrix(f, r, 1, rng), random_matrix(f, 1, c, rng));
    auto rk = rank_kernel(f, m);
    CHECK(rk.rank + rk.kernel.dim() == c);
    CHECK(multiply(f, m, rk.kernel.inclusion()).is_zero());
    CHECK(rk.rank == rank(f, m));
  }
}

TEST_CASE("rank is invariant under row and column permutations") {
  PrimeField f(5);
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix m = random_matrix(f, 4, 5, rng);
    m(0, 0) = 0;
    m.row(1)[2] = 0;
    std::vector<std::size_t> cols(5);
    std::iota(cols.begin(), cols.end(), 0);
    shuffle_in_place(cols, rng);
    Matrix p = select_columns(m, cols);
    Matrix swapped = p;
    for (std::size_t j = 0; j < 5; ++j) std::swap(swapped(0, j), swapped(3, j));
    CHECK(rank(f, swapped) == rank(f, m));
  }
}

TEST_CASE("subspace sum and intersection") {
  PrimeField f;
  Subspace l1 = Subspace::span(f, from_rows(1, 2, {1, 0}));
  Subspace l2 = Subspace::span(f, from_rows(1, 2, {1, 1}));
  CHECK(subspace_sum(l1, l2).dim() == 2);
  CHECK(subspace_intersection(l1, l2).dim() == 0);
  CHECK(subspace_sum(l1, l1) == l1);
  CHECK(subspace_intersection(l1, l1) == l1);
  Subspace other(f, 3);
  CHECK_THROWS_AS(subspace_sum(l1, other), InputError);
  CHECK_THROWS_AS(subspace_intersection(l1, other), InputError);
}

TEST_CASE("modular dimension identity on random pairs in GF(p)^5") {
  PrimeField f(13);
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t ra = uniform_below(rng, 6), rb = uniform_below(rng, 6);
    // A shared block makes nontrivial intersections common.
    const std::size_t shared = uniform_below(rng, 3);
    Matrix common = random_matrix(f, shared, 5, rng);
    Subspace a = Subspace::span(f, vstack(common, random_matrix(f, ra, 5, rng)));
    Subspace b = Subspace::span(f, vstack(common, random_matrix(f, rb, 5, rng)));
    Subspace s = subspace_sum(a, b);
    Subspace i = subspace_intersection(a, b);
    CHECK(a.dim() + b.dim() == s.dim() + i.dim());
    CHECK(a.contains(i));
    CHECK(b.contains(i));
    CHECK(s.contains(a));
    CHECK(s.contains(b));
  }
}

TEST_CASE("quotient map and section") {
  PrimeField f(7);
  Subspace u = Subspace::span(f, from_rows(2, 4, {1, 2, 0, 3, 0, 0, 1, 5}));
  Matrix q = u.quotient_map();
  CHECK(q.rows() == 2);
  CHECK(multiply(f, q, u.inclusion()).is_zero());
  CHECK(multiply(f, q, u.quotient_section()) == Matrix::identity(2));
  auto c = u.coordinates(std::vector<Residue>{2, 4, 1, 4});
  CHECK(c == std::vector<Residue>{2, 1});
  CHECK_THROWS_AS(u.coordinates(std::vector<Residue>{0, 1, 0, 0}), InputError);
}

TEST_CASE("vandermonde total independence") {
  PrimeField f(101);
  // k = 1: a nonzero row.
  Matrix row = vandermonde_totally_independent(1, 6, f, 1);
  for (std::size_t j = 0; j < 6; ++j) CHECK(row(0, j) == 1);
  CHECK(is_totally_independent(f, row));

  // k = 2 over GF(101) with 4 labels: all six 2x2 minors nonzero.
  Matrix m = vandermonde_totally_independent(2, 4, f, 5);
  int pairs = 0;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) {
      const Residue det = f.sub(f.mul(m(0, a), m(1, b)), f.mul(m(0, b), m(1, a)));
      CHECK(det != 0);
      ++pairs;
    }
  CHECK(pairs == 6);

  for (std::size_t n = 1; n <= 8; ++n)
    for (std::size_t k = 1; k <= n; ++k) {
      CHECK(is_totally_independent(f, vandermonde_totally_independent(k, n, f, 77 + n * k)));
    }

  std::vector<Residue> repeated{3, 5, 3};
  CHECK_FALSE(is_totally_independent(f, vandermonde_from_nodes(2, repeated, f)));
  CHECK_THROWS_AS(vandermonde_totally_independent(1, 3, PrimeField(3), 0), InputError);
}

TEST_CASE("subspace enumeration matches Gaussian binomial counts") {
  for (std::uint64_t q : {2u, 3u}) {
    PrimeField f(q);
    for (std::size_t d = 0; d <= 4; ++d) {
      auto all = all_subspaces(f, d);
      CHECK(all.size() == count_subspaces(q, d));
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) CHECK_FALSE(all[i] == all[j]);
    }
  }
  // 1, 2, 5, 16, 67 subspaces of GF(2)^d.
  CHECK(count_subspaces(2, 4) == 67);
  CHECK(count_subspaces(3, 2) == 6);
}

TEST_CASE("matrix formatting") {
  CHECK(format_matrix(from_rows(2, 2, {1, 0, 0, 1})) == "1 0;0 1");
}
