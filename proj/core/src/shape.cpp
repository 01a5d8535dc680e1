#include "fasttt/shape.hpp"

#include <limits>
#include <sstream>

#include "fasttt/errors.hpp"

namespace fasttt {

Index checked_product(std::span<const Index> values) {
  Index p = 1;
  for (Index v : values) {
    if (v < 0) throw ShapeError("negative dimension");
    if (v != 0 && p > std::numeric_limits<Index>::max() / v) {
      throw ShapeError("tensor size overflows 64-bit index arithmetic");
    }
    p *= v;
  }
  return p;
}

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw ShapeError("tensor order must be at least 1");
  for (Index n : dims_) {
    if (n < 1) throw ShapeError("every dimension must be >= 1, got " + std::to_string(n));
  }
  size_ = checked_product(dims_);
  strides_.assign(dims_.size(), 1);
  for (std::size_t k = dims_.size() - 1; k > 0; --k) strides_[k - 1] = strides_[k] * dims_[k];
}

Index Shape::prefix_size(std::size_t k) const {
  Index p = 1;
  for (std::size_t j = 0; j < k; ++j) p *= dims_[j];
  return p;
}

Index Shape::suffix_size(std::size_t k) const {
  Index p = 1;
  for (std::size_t j = k; j < dims_.size(); ++j) p *= dims_[j];
  return p;
}

Index Shape::linearize(std::span<const Index> idx) const {
  if (idx.size() != dims_.size()) {
    throw IndexError("multi-index has " + std::to_string(idx.size()) + " entries, tensor order is " +
                     std::to_string(dims_.size()));
  }
  Index lin = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims_[k]) {
      throw IndexError("index " + std::to_string(idx[k]) + " out of range for mode " + std::to_string(k) +
                       " of size " + std::to_string(dims_[k]));
    }
    lin += idx[k] * strides_[k];
  }
  return lin;
}

void Shape::delinearize(Index lin, std::span<Index> out) const {
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    out[k] = lin / strides_[k];
    lin -= out[k] * strides_[k];
  }
}

MultiIndex Shape::delinearize(Index lin) const {
  if (lin < 0 || lin >= size_) throw IndexError("linear index out of range");
  MultiIndex out(dims_.size());
  delinearize(lin, out);
  return out;
}

bool Shape::contains(std::span<const Index> idx) const noexcept {
  if (idx.size() != dims_.size()) return false;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims_[k]) return false;
  }
  return true;
}

std::string Shape::to_string() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < dims_.size(); ++k) os << (k ? "x" : "") << dims_[k];
  return os.str();
}

}  // namespace fasttt
