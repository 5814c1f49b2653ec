#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fmcw {

// Dense row-major 2-D container: element (i, j) lives at data[i * cols + j].
template <typename T>
class Array2D {
 public:
  Array2D() = default;
  Array2D(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  T& at(std::size_t i, std::size_t j) {
    check(i, j);
    return data_[i * cols_ + j];
  }
  const T& at(std::size_t i, std::size_t j) const {
    check(i, j);
    return data_[i * cols_ + j];
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

 private:
  void check(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("Array2D index out of range");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Dense row-major 3-D container: element (i, j, k) lives at
// data[(i * dim1 + j) * dim2 + k].
template <typename T>
class Array3D {
 public:
  Array3D() = default;
  Array3D(std::size_t dim0, std::size_t dim1, std::size_t dim2, T fill = T{})
      : dim0_(dim0), dim1_(dim1), dim2_(dim2), data_(dim0 * dim1 * dim2, fill) {}

  T& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * dim1_ + j) * dim2_ + k];
  }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * dim1_ + j) * dim2_ + k];
  }

  T& at(std::size_t i, std::size_t j, std::size_t k) {
    check(i, j, k);
    return (*this)(i, j, k);
  }
  const T& at(std::size_t i, std::size_t j, std::size_t k) const {
    check(i, j, k);
    return (*this)(i, j, k);
  }

  std::size_t dim0() const { return dim0_; }
  std::size_t dim1() const { return dim1_; }
  std::size_t dim2() const { return dim2_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& storage() { return data_; }
  const std::vector<T>& storage() const { return data_; }

 private:
  void check(std::size_t i, std::size_t j, std::size_t k) const {
    if (i >= dim0_ || j >= dim1_ || k >= dim2_) {
      throw std::out_of_range("Array3D index out of range");
    }
  }

  std::size_t dim0_ = 0;
  std::size_t dim1_ = 0;
  std::size_t dim2_ = 0;
  std::vector<T> data_;
};

}  // namespace fmcw
