#include "fasttt/tt_tensor.hpp"

#include <cmath>
#include <string>

#include "fasttt/errors.hpp"
#include "fasttt/matrix_kernels.hpp"

namespace fasttt {

namespace {

using SliceMap = Eigen::Map<const RowMatrix, 0, Eigen::OuterStride<>>;

SliceMap slice_map(const TTCore& c, Index i) {
  return SliceMap(c.data().data() + i * c.r_right(), c.r_left(), c.r_right(), Eigen::OuterStride<>(c.n() * c.r_right()));
}

}  // namespace

TTCore::TTCore(Index r_left, Index n, Index r_right)
    : r_left_(r_left), n_(n), r_right_(r_right) {
  if (r_left < 1 || n < 1 || r_right < 1) {
    throw ShapeError("TT core dimensions must be >= 1, got " + std::to_string(r_left) + "x" + std::to_string(n) + "x" +
                     std::to_string(r_right));
  }
  Index dims[] = {r_left, n, r_right};
  data_.assign(static_cast<std::size_t>(checked_product(dims)), 0.0);
}

TTCore::TTCore(Index r_left, Index n, Index r_right, std::vector<double> data) : TTCore(r_left, n, r_right) {
  if (data.size() != data_.size()) {
    throw ShapeError("TT core data length " + std::to_string(data.size()) + " does not match " +
                     std::to_string(data_.size()));
  }
  data_ = std::move(data);
}

Matrix TTCore::slice(Index i) const { return slice_map(*this, i); }

TTCore TTCore::from_left_unfolding(const Matrix& m, Index r_left, Index n) {
  if (m.rows() != r_left * n) throw ShapeError("left unfolding has wrong row count");
  TTCore c(r_left, n, m.cols());
  c.left_unfolding() = m;
  return c;
}

TTCore TTCore::from_right_unfolding(const Matrix& m, Index n, Index r_right) {
  if (m.cols() != n * r_right) throw ShapeError("right unfolding has wrong column count");
  TTCore c(m.rows(), n, r_right);
  c.right_unfolding() = m;
  return c;
}

double TTCore::norm() const { return Eigen::Map<const Vector>(data_.data(), static_cast<Index>(data_.size())).norm(); }

TTTensor::TTTensor(std::vector<TTCore> cores) : cores_(std::move(cores)) {
  if (cores_.empty()) throw ShapeError("tensor train needs at least one core");
  if (cores_.front().r_left() != 1) throw ShapeError("first TT rank must be 1");
  if (cores_.back().r_right() != 1) throw ShapeError("last TT rank must be 1");
  for (std::size_t k = 0; k + 1 < cores_.size(); ++k) {
    if (cores_[k].r_right() != cores_[k + 1].r_left()) {
      throw ShapeError("TT rank mismatch between cores " + std::to_string(k) + " and " + std::to_string(k + 1) + ": " +
                       std::to_string(cores_[k].r_right()) + " vs " + std::to_string(cores_[k + 1].r_left()));
    }
  }
}

TTTensor TTTensor::zeros(const Shape& shape) {
  std::vector<TTCore> cores;
  cores.reserve(shape.order());
  for (std::size_t k = 0; k < shape.order(); ++k) cores.emplace_back(1, shape[k], 1);
  return TTTensor(std::move(cores));
}

Shape TTTensor::shape() const {
  std::vector<Index> dims;
  dims.reserve(cores_.size());
  for (const auto& c : cores_) dims.push_back(c.n());
  return Shape(std::move(dims));
}

std::vector<Index> TTTensor::ranks() const {
  std::vector<Index> r{1};
  for (const auto& c : cores_) r.push_back(c.r_right());
  return r;
}

std::vector<Index> TTTensor::interior_ranks() const {
  std::vector<Index> r;
  for (std::size_t k = 0; k + 1 < cores_.size(); ++k) r.push_back(cores_[k].r_right());
  return r;
}

Index TTTensor::max_rank() const {
  Index m = 1;
  for (const auto& c : cores_) m = std::max(m, c.r_right());
  return m;
}

Index TTTensor::parameter_count() const {
  Index s = 0;
  for (const auto& c : cores_) s += c.size();
  return s;
}

double tt_entry(const TTTensor& t, std::span<const Index> idx) {
  if (idx.size() != t.order()) throw IndexError("multi-index order does not match tensor order");
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Ones(1);
  for (std::size_t k = 0; k < t.order(); ++k) {
    const TTCore& c = t.core(k);
    if (idx[k] < 0 || idx[k] >= c.n()) {
      throw IndexError("index " + std::to_string(idx[k]) + " out of range for mode " + std::to_string(k));
    }
    w = w * slice_map(c, idx[k]);
  }
  return w(0);
}

TTTensor tt_rank1(const std::vector<Vector>& vectors) {
  if (vectors.empty()) throw ShapeError("rank-1 tensor train needs at least one vector");
  std::vector<TTCore> cores;
  for (const auto& v : vectors) {
    if (v.size() == 0) throw ShapeError("rank-1 tensor train factor is empty");
    TTCore c(1, v.size(), 1);
    for (Index i = 0; i < v.size(); ++i) c(0, i, 0) = v(i);
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

TTTensor tt_add(const TTTensor& a, const TTTensor& b) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError("tt_add: shapes " + a.shape().to_string() + " and " + b.shape().to_string() + " differ");
  }
  const std::size_t d = a.order();
  std::vector<TTCore> cores;
  cores.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    const TTCore& ca = a.core(k);
    const TTCore& cb = b.core(k);
    const Index n = ca.n();
    const bool first = k == 0;
    const bool last = k + 1 == d;
    const Index rl = first ? 1 : ca.r_left() + cb.r_left();
    const Index rr = last ? 1 : ca.r_right() + cb.r_right();
    TTCore c(rl, n, rr);
    // a occupies the leading block, b the trailing one; the boundary cores
    // share their size-1 rank instead of stacking it.
    const Index bl = first ? 0 : ca.r_left();
    const Index br = last ? 0 : ca.r_right();
    for (Index x = 0; x < ca.r_left(); ++x)
      for (Index i = 0; i < n; ++i)
        for (Index y = 0; y < ca.r_right(); ++y) c(x, i, y) += ca(x, i, y);
    for (Index x = 0; x < cb.r_left(); ++x)
      for (Index i = 0; i < n; ++i)
        for (Index y = 0; y < cb.r_right(); ++y) c(bl + x, i, br + y) += cb(x, i, y);
    cores.push_back(std::move(c));
  }
  return TTTensor(std::move(cores));
}

TTTensor tt_scale(const TTTensor& t, double alpha) {
  TTTensor out = t;
  for (double& v : out.core(0).data()) v *= alpha;
  return out;
}

DenseTensor tt_to_full(const TTTensor& t, Index max_entries) {
  const Shape shape = t.shape();
  if (shape.size() > max_entries) {
    throw SizeLimitError("tt_to_full: dense size " + std::to_string(shape.size()) + " exceeds cap " +
                         std::to_string(max_entries));
  }
  // acc holds the prefix contraction as a (prod n_<k) x r_k row-major matrix.
  RowMatrix acc = RowMatrix::Ones(1, 1);
  for (const auto& c : t.cores()) {
    RowMatrix next = acc * c.right_unfolding();
    acc = Eigen::Map<RowMatrix>(next.data(), acc.rows() * c.n(), c.r_right());
  }
  return DenseTensor(shape, std::vector<double>(acc.data(), acc.data() + acc.size()));
}

double tt_inner(const TTTensor& a, const TTTensor& b) {
  if (!(a.shape() == b.shape())) throw ShapeError("tt_inner: shapes differ");
  RowMatrix w = RowMatrix::Ones(1, 1);
  for (std::size_t k = 0; k < a.order(); ++k) {
    const TTCore& ca = a.core(k);
    const TTCore& cb = b.core(k);
    RowMatrix x = w * cb.right_unfolding();
    Eigen::Map<const RowMatrix> xl(x.data(), ca.r_left() * ca.n(), cb.r_right());
    w = ca.left_unfolding().transpose() * xl;
  }
  return w(0, 0);
}

double tt_inner(const SparseTensor& a, const TTTensor& t) {
  if (!(a.shape() == t.shape())) throw ShapeError("tt_inner: shapes differ");
  MultiIndex idx(a.order());
  double s = 0.0;
  auto lin = a.linear_indices();
  auto val = a.values();
  for (std::size_t e = 0; e < lin.size(); ++e) {
    a.shape().delinearize(lin[e], idx);
    s += val[e] * tt_entry(t, idx);
  }
  return s;
}

TTTensor left_orthogonalize(const TTTensor& t) {
  std::vector<TTCore> cores = t.cores();
  for (std::size_t k = 0; k + 1 < cores.size(); ++k) {
    QRResult qr = qr_economic(cores[k].left_unfolding());
    cores[k] = TTCore::from_left_unfolding(qr.Q, cores[k].r_left(), cores[k].n());
    cores[k + 1] = multiply_left(qr.R, cores[k + 1]);
  }
  return TTTensor(std::move(cores));
}

TTTensor right_orthogonalize(const TTTensor& t) {
  std::vector<TTCore> cores = t.cores();
  for (std::size_t k = cores.size() - 1; k > 0; --k) {
    QRResult qr = qr_economic(cores[k].right_unfolding().transpose());
    cores[k] = TTCore::from_right_unfolding(qr.Q.transpose(), cores[k].n(), cores[k].r_right());
    cores[k - 1] = multiply_right(cores[k - 1], qr.R.transpose());
  }
  return TTTensor(std::move(cores));
}

double tt_norm(const TTTensor& t) {
  const TTTensor o = left_orthogonalize(t);
  return o.core(o.order() - 1).norm();
}

double left_orthogonality_defect(const TTCore& c) {
  const auto l = c.left_unfolding();
  Matrix g = l.transpose() * l;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

double right_orthogonality_defect(const TTCore& c) {
  const auto r = c.right_unfolding();
  Matrix g = r * r.transpose();
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

TTCore multiply_left(const Matrix& m, const TTCore& g) {
  if (m.cols() != g.r_left()) throw ShapeError("multiply_left: inner dimension mismatch");
  Matrix r = m * g.right_unfolding();
  return TTCore::from_right_unfolding(r, g.n(), g.r_right());
}

TTCore multiply_right(const TTCore& g, const Matrix& m) {
  if (m.rows() != g.r_right()) throw ShapeError("multiply_right: inner dimension mismatch");
  Matrix l = g.left_unfolding() * m;
  return TTCore::from_left_unfolding(l, g.r_left(), g.n());
}

}  // namespace fasttt
