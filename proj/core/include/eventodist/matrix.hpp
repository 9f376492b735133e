#pragma once

#include <cstddef>
#include <vector>

namespace eventodist {

/// Minimal dense square matrix, row-major. Sized N x N for N <= 16 here, so
/// no linear-algebra backend is warranted.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), data_(n * n, T{}) {}

  std::size_t size() const noexcept { return n_; }
  T& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

}  // namespace eventodist
