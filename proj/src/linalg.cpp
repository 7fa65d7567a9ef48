#include "sheaflab/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "sheaflab/error.hpp"

namespace sheaflab {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p >= (std::uint64_t{1} << 32) || !is_prime(p)) {
    throw InputError("field modulus " + std::to_string(p) + " is not a prime below 2^32");
  }
}

Residue PrimeField::reduce(std::int64_t x) const {
  const auto p = static_cast<std::int64_t>(p_);
  std::int64_t r = x % p;
  if (r < 0) r += p;
  return static_cast<Residue>(r);
}

Residue PrimeField::pow(Residue a, std::uint64_t e) const {
  std::uint64_t result = 1 % p_;
  std::uint64_t base = a % p_;
  while (e > 0) {
    if (e & 1) result = result * base % p_;
    base = base * base % p_;
    e >>= 1;
  }
  return static_cast<Residue>(result);
}

Residue PrimeField::inv(Residue a) const {
  if (a % p_ == 0) throw InputError("inverse of zero in GF(" + std::to_string(p_) + ")");
  return pow(a, p_ - 2);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Residue> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InputError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                     std::to_string(rows * cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Residue x) { return x == 0; });
}

Matrix multiply(const PrimeField& f, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw InputError("cannot multiply " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  const std::uint64_t p = f.modulus();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::uint64_t aik = a(i, k);
      if (aik == 0) continue;
      auto brow = b.row(k);
      auto orow = out.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) {
        orow[j] = static_cast<Residue>((orow[j] + aik * brow[j]) % p);
      }
    }
  }
  return out;
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

Matrix add(const PrimeField& f, const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.add(a(i, j), b(i, j));
  return out;
}

Matrix subtract(const PrimeField& f, const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "subtract");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.sub(a(i, j), b(i, j));
  return out;
}

Matrix scale(const PrimeField& f, const Matrix& a, Residue s) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.mul(a(i, j), s);
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix kronecker(const PrimeField& f, const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Residue aij = a(i, j);
      if (aij == 0) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = f.mul(aij, b(k, l));
    }
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.rows() == 0) return bottom;
  if (bottom.rows() == 0) return top;
  if (top.cols() != bottom.cols()) throw InputError("vstack: column mismatch");
  Matrix out(top.rows() + bottom.rows(), top.cols());
  place_block(out, 0, 0, top);
  place_block(out, top.rows(), 0, bottom);
  return out;
}

Matrix hstack(const Matrix& left, const Matrix& right) {
  if (left.cols() == 0 && left.rows() == 0) return right;
  if (right.cols() == 0 && right.rows() == 0) return left;
  if (left.rows() != right.rows()) throw InputError("hstack: row mismatch");
  Matrix out(left.rows(), left.cols() + right.cols());
  place_block(out, 0, 0, left);
  place_block(out, 0, left.cols(), right);
  return out;
}

void place_block(Matrix& into, std::size_t r, std::size_t c, const Matrix& block) {
  if (r + block.rows() > into.rows() || c + block.cols() > into.cols()) {
    throw InputError("place_block: block does not fit");
  }
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) into(r + i, c + j) = block(i, j);
}

Matrix select_columns(const Matrix& a, std::span<const std::size_t> cols) {
  Matrix out(a.rows(), cols.size());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(i, cols[j]);
  return out;
}

Matrix random_matrix(const PrimeField& f, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = f.random(rng);
  return out;
}

Echelon row_reduce(const PrimeField& f, Matrix m) {
  const std::uint64_t p = f.modulus();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && m(sel, c) == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r) {
      auto a = m.row(sel);
      auto b = m.row(r);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto prow = m.row(r);
    const std::uint64_t inv = f.inv(prow[c]);
    for (std::size_t j = c; j < cols; ++j) prow[j] = static_cast<Residue>(prow[j] * inv % p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      auto row = m.row(i);
      const std::uint64_t factor = row[c];
      if (factor == 0) continue;
      const std::uint64_t negf = p - factor;
      for (std::size_t j = c; j < cols; ++j) {
        if (prow[j] != 0) row[j] = static_cast<Residue>((row[j] + negf * prow[j]) % p);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  Matrix reduced(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) reduced(i, j) = m(i, j);
  return {std::move(reduced), std::move(pivots)};
}

std::size_t rank(const PrimeField& f, Matrix m) {
  // Forward elimination only; no back substitution needed for the rank.
  const std::uint64_t p = f.modulus();
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && m(sel, c) == 0) ++sel;
    if (sel == rows) continue;
    if (sel != r) {
      auto a = m.row(sel);
      auto b = m.row(r);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto prow = m.row(r);
    const std::uint64_t inv = f.inv(prow[c]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      auto row = m.row(i);
      if (row[c] == 0) continue;
      const std::uint64_t factor = row[c] * inv % p;
      const std::uint64_t negf = p - factor;
      for (std::size_t j = c; j < cols; ++j) {
        if (prow[j] != 0) row[j] = static_cast<Residue>((row[j] + negf * prow[j]) % p);
      }
    }
    ++r;
  }
  return r;
}

Subspace::Subspace(PrimeField field, std::size_t ambient_dim)
    : field_(field), ambient_(ambient_dim), basis_(0, ambient_dim) {}

Subspace::Subspace(PrimeField field, std::size_t ambient, Echelon e)
    : field_(field), ambient_(ambient), basis_(std::move(e.reduced)), pivots_(std::move(e.pivots)) {
  if (basis_.rows() == 0) basis_ = Matrix(0, ambient_);
}

Subspace Subspace::span(const PrimeField& field, const Matrix& spanning) {
  return Subspace(field, spanning.cols(), row_reduce(field, spanning));
}

Subspace Subspace::full(const PrimeField& field, std::size_t ambient_dim) {
  return span(field, Matrix::identity(ambient_dim));
}

bool Subspace::contains(std::span<const Residue> v) const {
  if (v.size() != ambient_) throw InputError("membership: vector has wrong length");
  std::vector<Residue> w(v.begin(), v.end());
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    const Residue c = w[pivots_[i]];
    if (c == 0) continue;
    auto b = basis_.row(i);
    for (std::size_t j = 0; j < ambient_; ++j) w[j] = field_.sub(w[j], field_.mul(c, b[j]));
  }
  return std::all_of(w.begin(), w.end(), [](Residue x) { return x == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw InputError("containment: ambient dimension mismatch");
  for (std::size_t i = 0; i < other.basis_.rows(); ++i) {
    if (!contains(other.basis_.row(i))) return false;
  }
  return true;
}

std::vector<Residue> Subspace::coordinates(std::span<const Residue> v) const {
  if (!contains(v)) throw InputError("coordinates: vector is not in the subspace");
  std::vector<Residue> c(basis_.rows());
  for (std::size_t i = 0; i < basis_.rows(); ++i) c[i] = v[pivots_[i]];
  return c;
}

namespace {

std::vector<std::size_t> non_pivots(const std::vector<std::size_t>& pivots, std::size_t n) {
  std::vector<std::size_t> out;
  std::size_t k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (k < pivots.size() && pivots[k] == j) {
      ++k;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

}  // namespace

Matrix Subspace::quotient_map() const {
  const auto free = non_pivots(pivots_, ambient_);
  Matrix q(free.size(), ambient_);
  for (std::size_t t = 0; t < free.size(); ++t) {
    q(t, free[t]) = 1;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      q(t, pivots_[i]) = field_.neg(basis_(i, free[t]));
    }
  }
  return q;
}

Matrix Subspace::quotient_section() const {
  const auto free = non_pivots(pivots_, ambient_);
  Matrix s(ambient_, free.size());
  for (std::size_t t = 0; t < free.size(); ++t) s(free[t], t) = 1;
  return s;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw InputError("sum: ambient dimension mismatch");
  return Subspace::span(a.field(), vstack(a.basis(), b.basis()));
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw InputError("intersection: ambient dimension mismatch");
  }
  const PrimeField& f = a.field();
  if (a.dim() == 0 || b.dim() == 0) return Subspace(f, a.ambient_dim());
  // (x, y) with x A = y B  <=>  [A; -B]^T (x, y)^T = 0.
  const Matrix stacked = vstack(a.basis(), scale(f, b.basis(), f.neg(1)));
  const Subspace rel = kernel(f, transpose(stacked));
  Matrix vecs(rel.dim(), a.ambient_dim());
  for (std::size_t r = 0; r < rel.dim(); ++r) {
    auto coeff = rel.basis().row(r);
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (coeff[i] == 0) continue;
      auto arow = a.basis().row(i);
      for (std::size_t j = 0; j < a.ambient_dim(); ++j) {
        vecs(r, j) = f.add(vecs(r, j), f.mul(coeff[i], arow[j]));
      }
    }
  }
  return Subspace::span(f, vecs);
}

Subspace kernel(const PrimeField& f, const Matrix& m) {
  const Echelon e = row_reduce(f, m);
  const auto free = non_pivots(e.pivots, m.cols());
  Matrix basis(free.size(), m.cols());
  for (std::size_t t = 0; t < free.size(); ++t) {
    basis(t, free[t]) = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
      basis(t, e.pivots[i]) = f.neg(e.reduced(i, free[t]));
    }
  }
  return Subspace::span(f, basis);
}

Subspace image(const PrimeField& f, const Matrix& m) {
  return Subspace::span(f, transpose(m));
}

RankKernel rank_kernel(const PrimeField& f, const Matrix& m) {
  Subspace k = kernel(f, m);
  return {m.cols() - k.dim(), std::move(k)};
}

Matrix vandermonde_from_nodes(std::size_t k, std::span<const Residue> nodes,
                              const PrimeField& f) {
  Matrix m(k, nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    Residue x = 1;
    for (std::size_t i = 0; i < k; ++i) {
      m(i, j) = x;
      x = f.mul(x, nodes[j]);
    }
  }
  return m;
}

Matrix vandermonde_totally_independent(std::size_t k, std::size_t n, const PrimeField& f,
                                       std::uint64_t seed) {
  const std::uint64_t pool = f.modulus() - 1;
  if (n > pool) {
    throw InputError("GF(" + std::to_string(f.modulus()) + ") has fewer than " +
                     std::to_string(n) + " distinct nonzero nodes");
  }
  // Prefix of a Fisher-Yates shuffle of 1..p-1 over a sparse virtual array.
  Rng rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> moved;
  auto at = [&](std::uint64_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i + 1 : it->second;
  };
  std::vector<Residue> nodes(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t j = i + uniform_below(rng, pool - i);
    const std::uint64_t vi = at(i);
    const std::uint64_t vj = at(j);
    moved[i] = vj;
    moved[j] = vi;
    nodes[i] = static_cast<Residue>(vj);
  }
  return vandermonde_from_nodes(k, nodes, f);
}

bool is_totally_independent(const PrimeField& f, const Matrix& m) {
  const std::size_t n = m.cols();
  const std::size_t k = std::min(m.rows(), n);
  if (k == 0) return true;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    if (rank(f, select_columns(m, pick)) != k) return false;
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return true;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

std::vector<Subspace> all_subspaces(const PrimeField& f, std::size_t d) {
  const std::uint64_t q = f.modulus();
  std::vector<Subspace> out;
  for (std::size_t r = 0; r <= d; ++r) {
    std::vector<std::size_t> piv(r);
    std::iota(piv.begin(), piv.end(), 0);
    for (;;) {
      // Free entries: (i, j) with j > piv[i] and j not a pivot column.
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = piv[i] + 1; j < d; ++j)
          if (std::find(piv.begin(), piv.end(), j) == piv.end()) slots.emplace_back(i, j);
      std::vector<Residue> val(slots.size(), 0);
      for (;;) {
        Matrix b(r, d);
        for (std::size_t i = 0; i < r; ++i) b(i, piv[i]) = 1;
        for (std::size_t s = 0; s < slots.size(); ++s) b(slots[s].first, slots[s].second) = val[s];
        out.push_back(Subspace::span(f, b));
        std::size_t s = 0;
        while (s < val.size() && val[s] == q - 1) val[s++] = 0;
        if (s == val.size()) break;
        ++val[s];
      }
      if (r == 0) break;
      std::size_t i = r;
      while (i > 0 && piv[i - 1] == d - r + (i - 1)) --i;
      if (i == 0) break;
      ++piv[i - 1];
      for (std::size_t j = i; j < r; ++j) piv[j] = piv[j - 1] + 1;
    }
  }
  return out;
}

std::uint64_t count_subspaces(std::uint64_t q, std::size_t d) {
  // Gaussian binomials via the q-Pascal rule, saturating at UINT64_MAX.
  auto sat_add = [](std::uint64_t a, std::uint64_t b) {
    return a > UINT64_MAX - b ? UINT64_MAX : a + b;
  };
  auto sat_mul = [](std::uint64_t a, std::uint64_t b) {
    return (b != 0 && a > UINT64_MAX / b) ? UINT64_MAX : a * b;
  };
  std::vector<std::uint64_t> row{1};
  for (std::size_t n = 1; n <= d; ++n) {
    std::vector<std::uint64_t> next(n + 1, 1);
    std::uint64_t qk = 1;
    for (std::size_t k = 1; k < n; ++k) {
      qk = sat_mul(qk, q);
      next[k] = sat_add(row[k - 1], sat_mul(qk, row[k]));
    }
    row = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto x : row) total = sat_add(total, x);
  return total;
}

std::string format_matrix(const Matrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ';';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j);
    }
  }
  return os.str();
}

}  // namespace sheaflab
