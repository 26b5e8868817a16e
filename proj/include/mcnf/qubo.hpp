#pragma once

// Quadratic binary and Ising energy models over Eigen sparse storage.
//
// A QUBO is kept upper-triangular: the diagonal holds linear coefficients
// (x_p^2 = x_p for binary x) and entry (p, q), p < q, the coupling of x_p x_q.
// Its energy is therefore x^T Q x + offset with no symmetrization factor.

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "mcnf/errors.hpp"

namespace mcnf {

using Bits = std::vector<std::uint8_t>;

template <typename Scalar>
using SparseUpper = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

template <typename Scalar = double>
struct Qubo {
  SparseUpper<Scalar> terms;
  Scalar offset = Scalar(0);

  Eigen::Index size() const { return terms.rows(); }
};

template <typename Scalar = double>
struct Ising {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> h;
  SparseUpper<Scalar> couplings;  // strictly upper triangular
  Scalar offset = Scalar(0);

  Eigen::Index size() const { return h.size(); }
};

// Accumulates linear, quadratic and squared-linear terms, then compresses into a Qubo.
template <typename Scalar = double>
class QuboBuilder {
 public:
  explicit QuboBuilder(Eigen::Index size) : size_(size) {}

  void add_linear(Eigen::Index p, Scalar c) { add(p, p, c); }

  void add_quadratic(Eigen::Index p, Eigen::Index q, Scalar c) {
    if (p > q) std::swap(p, q);
    add(p, q, c);
  }

  void add_offset(Scalar c) { offset_ += c; }

  // weight * (sum_i coef_i x_i + constant)^2, expanded with x_i^2 = x_i.
  void add_squared(std::span<const std::pair<Eigen::Index, Scalar>> expr, Scalar constant,
                   Scalar weight) {
    std::vector<std::pair<Eigen::Index, Scalar>> merged;
    std::unordered_map<Eigen::Index, std::size_t> slot;
    for (const auto& [p, c] : expr) {
      auto [it, inserted] = slot.emplace(p, merged.size());
      if (inserted)
        merged.emplace_back(p, c);
      else
        merged[it->second].second += c;
    }
    for (std::size_t i = 0; i < merged.size(); ++i) {
      const auto [p, a] = merged[i];
      add_linear(p, weight * (a * a + Scalar(2) * constant * a));
      for (std::size_t j = i + 1; j < merged.size(); ++j)
        add_quadratic(p, merged[j].first, weight * Scalar(2) * a * merged[j].second);
    }
    offset_ += weight * constant * constant;
  }

  Qubo<Scalar> build() const {
    Qubo<Scalar> q;
    q.terms.resize(size_, size_);
    q.terms.setFromTriplets(triplets_.begin(), triplets_.end());
    q.terms.prune([](Eigen::Index, Eigen::Index, const Scalar& v) { return v != Scalar(0); });
    q.terms.makeCompressed();
    q.offset = offset_;
    return q;
  }

 private:
  void add(Eigen::Index p, Eigen::Index q, Scalar c) {
    if (c != Scalar(0)) triplets_.emplace_back(p, q, c);
  }

  Eigen::Index size_;
  std::vector<Eigen::Triplet<Scalar>> triplets_;
  Scalar offset_ = Scalar(0);
};

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> as_vector(std::span<const std::uint8_t> bits) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(static_cast<Eigen::Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) v[static_cast<Eigen::Index>(i)] = bits[i] ? 1 : 0;
  return v;
}

// x^T Q x + offset. Throws SizeMismatch.
template <typename Scalar>
Scalar qubo_energy(const Qubo<Scalar>& q, std::span<const std::uint8_t> bits) {
  if (static_cast<Eigen::Index>(bits.size()) != q.size())
    throw SizeMismatch("bit vector has " + std::to_string(bits.size()) + " entries, QUBO has " +
                       std::to_string(q.size()));
  const auto x = as_vector<Scalar>(bits);
  return x.dot(q.terms * x) + q.offset;
}

// h^T s + s^T J s + offset over spins s in {-1, +1}. Throws SizeMismatch.
template <typename Scalar>
Scalar ising_energy(const Ising<Scalar>& model, std::span<const int> spins) {
  if (static_cast<Eigen::Index>(spins.size()) != model.size())
    throw SizeMismatch("spin vector has " + std::to_string(spins.size()) +
                       " entries, Ising model has " + std::to_string(model.size()));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s(model.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = Scalar(spins[static_cast<std::size_t>(i)]);
  return model.h.dot(s) + s.dot(model.couplings * s) + model.offset;
}

// Substitutes x = (1 + s) / 2: diagonal entries feed the biases, off-diagonal
// entries become couplings (and also contribute to both biases and the offset).
template <typename Scalar>
Ising<Scalar> qubo_to_ising(const Qubo<Scalar>& q) {
  const Eigen::Index n = q.size();
  Ising<Scalar> out;
  out.h = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  out.offset = q.offset;
  std::vector<Eigen::Triplet<Scalar>> couplings;
  for (Eigen::Index p = 0; p < q.terms.outerSize(); ++p) {
    for (typename SparseUpper<Scalar>::InnerIterator it(q.terms, p); it; ++it) {
      const Scalar c = it.value();
      if (it.col() == p) {
        out.h[p] += c / Scalar(2);
        out.offset += c / Scalar(2);
      } else {
        const Scalar quarter = c / Scalar(4);
        couplings.emplace_back(p, it.col(), quarter);
        out.h[p] += quarter;
        out.h[it.col()] += quarter;
        out.offset += quarter;
      }
    }
  }
  out.couplings.resize(n, n);
  out.couplings.setFromTriplets(couplings.begin(), couplings.end());
  return out;
}

// Spin image of a bit vector: 0 -> -1, 1 -> +1.
inline std::vector<int> to_spins(std::span<const std::uint8_t> bits) {
  std::vector<int> s(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? 1 : -1;
  return s;
}

}  // namespace mcnf
