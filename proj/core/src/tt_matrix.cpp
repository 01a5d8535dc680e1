#include "fasttt/tt_matrix.hpp"

#include <string>

#include "fasttt/errors.hpp"

namespace fasttt {

namespace {

void check_factorization(const std::vector<Index>& row_dims, const std::vector<Index>& col_dims) {
  if (row_dims.empty() || row_dims.size() != col_dims.size()) {
    throw ShapeError("row and column factorizations must have the same nonzero length");
  }
}

}  // namespace

std::vector<Index> fused_dims(const std::vector<Index>& row_dims, const std::vector<Index>& col_dims) {
  check_factorization(row_dims, col_dims);
  std::vector<Index> dims(row_dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (row_dims[k] < 1 || col_dims[k] < 1) throw ShapeError("factor dimensions must be >= 1");
    dims[k] = row_dims[k] * col_dims[k];
  }
  return dims;
}

TTMatrix::TTMatrix(std::vector<TTCore> cores, std::vector<Index> row_dims, std::vector<Index> col_dims)
    : cores_(std::move(cores)), row_dims_(std::move(row_dims)), col_dims_(std::move(col_dims)) {
  const auto dims = fused_dims(row_dims_, col_dims_);
  if (dims.size() != cores_.size()) throw ShapeError("MPO core count does not match the factorization");
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    if (cores_[k].n() != dims[k]) {
      throw ShapeError("MPO core " + std::to_string(k) + " has mode size " + std::to_string(cores_[k].n()) +
                       ", expected " + std::to_string(dims[k]));
    }
  }
  TTTensor check(cores_);  // rank agreement
}

std::vector<Index> TTMatrix::ranks() const {
  std::vector<Index> r{1};
  for (const auto& c : cores_) r.push_back(c.r_right());
  return r;
}

Index TTMatrix::rows() const { return checked_product(row_dims_); }
Index TTMatrix::cols() const { return checked_product(col_dims_); }

SparseTensor tensorize_matrix(const SparseMatrix& m, const std::vector<Index>& row_dims,
                              const std::vector<Index>& col_dims) {
  const Shape fused(fused_dims(row_dims, col_dims));
  const Shape rs(row_dims);
  const Shape cs(col_dims);
  if (rs.size() != m.rows() || cs.size() != m.cols()) {
    throw ShapeError("factorization " + rs.to_string() + " by " + cs.to_string() + " does not match a " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
  }
  const std::size_t d = row_dims.size();
  std::vector<Index> lin;
  std::vector<double> val;
  lin.reserve(static_cast<std::size_t>(m.nonZeros()));
  val.reserve(static_cast<std::size_t>(m.nonZeros()));
  MultiIndex ri(d), ci(d), fi(d);
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      rs.delinearize(it.row(), ri);
      cs.delinearize(it.col(), ci);
      for (std::size_t k = 0; k < d; ++k) fi[k] = ri[k] * col_dims[k] + ci[k];
      lin.push_back(fused.linearize(fi));
      val.push_back(it.value());
    }
  }
  return SparseTensor::from_linear(fused, std::move(lin), std::move(val));
}

SparseMatrix untensorize_matrix(const SparseTensor& t, const std::vector<Index>& row_dims,
                                const std::vector<Index>& col_dims) {
  const Shape fused(fused_dims(row_dims, col_dims));
  if (!(fused == t.shape())) {
    throw ShapeError("tensor shape " + t.shape().to_string() + " does not match fused shape " + fused.to_string());
  }
  const Shape rs(row_dims);
  const Shape cs(col_dims);
  const std::size_t d = row_dims.size();
  std::vector<Eigen::Triplet<double, Index>> trips;
  trips.reserve(t.nnz());
  MultiIndex fi(d), ri(d), ci(d);
  auto lin = t.linear_indices();
  auto val = t.values();
  for (std::size_t e = 0; e < lin.size(); ++e) {
    fused.delinearize(lin[e], fi);
    for (std::size_t k = 0; k < d; ++k) {
      ri[k] = fi[k] / col_dims[k];
      ci[k] = fi[k] % col_dims[k];
    }
    trips.emplace_back(rs.linearize(ri), cs.linearize(ci), val[e]);
  }
  SparseMatrix m(rs.size(), cs.size());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

TTMatrix tt_split_mpo(const TTTensor& t, const std::vector<Index>& row_dims, const std::vector<Index>& col_dims) {
  return TTMatrix(t.cores(), row_dims, col_dims);
}

TTTensor mpo_matvec(const TTMatrix& m, const TTTensor& v) {
  if (v.order() != m.order()) throw ShapeError("mpo_matvec: order mismatch");
  for (std::size_t k = 0; k < m.order(); ++k) {
    if (v.core(k).n() != m.col_dims()[k]) {
      throw ShapeError("mpo_matvec: vector mode " + std::to_string(k) + " has size " + std::to_string(v.core(k).n()) +
                       ", operator expects " + std::to_string(m.col_dims()[k]));
    }
  }
  std::vector<TTCore> cores;
  cores.reserve(m.order());
  for (std::size_t k = 0; k < m.order(); ++k) {
    const TTCore& mc = m.core(k);
    const TTCore& vc = v.core(k);
    const Index rows = m.row_dims()[k];
    const Index cols = m.col_dims()[k];
    TTCore out(mc.r_left() * vc.r_left(), rows, mc.r_right() * vc.r_right());
    for (Index a = 0; a < mc.r_left(); ++a)
      for (Index al = 0; al < vc.r_left(); ++al)
        for (Index i = 0; i < rows; ++i)
          for (Index b = 0; b < mc.r_right(); ++b)
            for (Index be = 0; be < vc.r_right(); ++be) {
              double s = 0.0;
              for (Index j = 0; j < cols; ++j) s += m(k, a, i, j, b) * vc(al, j, be);
              out(a * vc.r_left() + al, i, b * vc.r_right() + be) = s;
            }
    cores.push_back(std::move(out));
  }
  return TTTensor(std::move(cores));
}

Matrix mpo_to_dense(const TTMatrix& m, Index max_entries) {
  const DenseTensor full = tt_to_full(TTTensor(m.cores()), max_entries);
  return Matrix(untensorize_matrix(sparsify(full), m.row_dims(), m.col_dims()));
}

}  // namespace fasttt
