#include "fasttt/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "fasttt/errors.hpp"
#include "fasttt/tt_matrix.hpp"

namespace fasttt {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t j = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > j) out.push_back(line.substr(j, i - j));
  }
  return out;
}

bool parse_int(std::string_view s, Index& v) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& v) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out.exceptions(std::ios::failbit | std::ios::badbit);
  return out;
}

// Sorts (key, line) pairs and reports the first repeated key.
void reject_duplicates(std::vector<std::pair<Index, std::size_t>>& keyed, const std::string& source,
                       const std::string& what) {
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t e = 1; e < keyed.size(); ++e) {
    if (keyed[e].first == keyed[e - 1].first) {
      throw InputError(source, std::max(keyed[e].second, keyed[e - 1].second),
                       "duplicate " + what + " (first seen on line " +
                           std::to_string(std::min(keyed[e].second, keyed[e - 1].second)) + ")");
    }
  }
}

}  // namespace

SparseTensor read_coo(std::istream& in, const std::string& source) {
  std::optional<Shape> shape;
  std::vector<Index> lin;
  std::vector<double> val;
  std::vector<std::pair<Index, std::size_t>> keyed;
  std::string line;
  std::size_t lineno = 0;
  MultiIndex idx;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0].front() == '#') {
      std::vector<std::string_view> rest = tok;
      if (rest[0] == "#") rest.erase(rest.begin());
      else rest[0].remove_prefix(1);
      if (rest.empty() || lower(rest[0]) != "shape") continue;
      if (shape) throw InputError(source, lineno, "second shape header");
      if (!lin.empty()) throw InputError(source, lineno, "shape header after data");
      std::vector<Index> dims;
      for (std::size_t k = 1; k < rest.size(); ++k) {
        Index n = 0;
        if (!parse_int(rest[k], n) || n < 1) {
          throw InputError(source, lineno, "bad dimension '" + std::string(rest[k]) + "'");
        }
        dims.push_back(n);
      }
      if (dims.empty()) throw InputError(source, lineno, "shape header lists no dimensions");
      try {
        shape.emplace(std::move(dims));
      } catch (const ShapeError& e) {
        throw InputError(source, lineno, e.what());
      }
      idx.resize(shape->order());
      continue;
    }
    if (!shape) throw InputError(source, lineno, "data before the '# shape' header");
    const std::size_t d = shape->order();
    if (tok.size() != d + 1) {
      throw InputError(source, lineno,
                       "expected " + std::to_string(d) + " indices and a value, got " + std::to_string(tok.size()) +
                           " fields");
    }
    for (std::size_t k = 0; k < d; ++k) {
      Index i = 0;
      if (!parse_int(tok[k], i)) throw InputError(source, lineno, "bad index '" + std::string(tok[k]) + "'");
      if (i < 1 || i > (*shape)[k]) {
        throw InputError(source, lineno,
                         "index " + std::to_string(i) + " outside 1.." + std::to_string((*shape)[k]) + " in mode " +
                             std::to_string(k + 1));
      }
      idx[k] = i - 1;
    }
    double v = 0.0;
    if (!parse_double(tok[d], v)) throw InputError(source, lineno, "bad value '" + std::string(tok[d]) + "'");
    if (!std::isfinite(v)) throw InputError(source, lineno, "non-finite value");
    const Index l = shape->linearize(idx);
    keyed.emplace_back(l, lineno);
    lin.push_back(l);
    val.push_back(v);
  }
  if (!shape) throw InputError(source, lineno, "missing '# shape' header");
  reject_duplicates(keyed, source, "coordinate");
  return SparseTensor::from_linear(*shape, std::move(lin), std::move(val));
}

SparseTensor read_coo_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_coo(in, path.string());
}

void write_coo(std::ostream& out, const SparseTensor& t) {
  out << "# shape";
  for (Index n : t.shape().dims()) out << ' ' << n;
  out << '\n';
  MultiIndex idx(t.order());
  auto lin = t.linear_indices();
  auto val = t.values();
  std::string buf;
  for (std::size_t e = 0; e < lin.size(); ++e) {
    t.shape().delinearize(lin[e], idx);
    buf.clear();
    for (Index i : idx) {
      buf += std::to_string(i + 1);
      buf += ' ';
    }
    buf += format_value(val[e]);
    buf += '\n';
    out << buf;
  }
}

void write_coo_file(const std::filesystem::path& path, const SparseTensor& t) {
  auto out = open_out(path);
  write_coo(out, t);
}

SparseMatrix read_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw InputError(source, 1, "empty Matrix Market file");
  ++lineno;
  auto banner = split_ws(line);
  if (banner.size() != 5 || lower(banner[0]) != "%%matrixmarket") {
    throw InputError(source, lineno, "missing '%%MatrixMarket' banner");
  }
  const std::string object = lower(banner[1]);
  const std::string format = lower(banner[2]);
  const std::string field = lower(banner[3]);
  const std::string symmetry = lower(banner[4]);
  if (object != "matrix") throw InputError(source, lineno, "unsupported Matrix Market object '" + object + "'");
  if (format != "coordinate") throw InputError(source, lineno, "unsupported Matrix Market format '" + format + "'");
  if (field != "real" && field != "integer" && field != "pattern") {
    throw InputError(source, lineno, "unsupported Matrix Market field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric") {
    throw InputError(source, lineno, "unsupported Matrix Market symmetry '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";

  Index rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '%') continue;
    if (tok.size() != 3 || !parse_int(tok[0], rows) || !parse_int(tok[1], cols) || !parse_int(tok[2], nnz) ||
        rows < 1 || cols < 1 || nnz < 0) {
      throw InputError(source, lineno, "bad size line");
    }
    break;
  }
  if (rows < 0) throw InputError(source, lineno, "missing size line");
  if (symmetry != "general" && rows != cols) throw InputError(source, lineno, "symmetric storage needs a square matrix");

  std::vector<Eigen::Triplet<double, Index>> trips;
  std::vector<std::pair<Index, std::size_t>> keyed;
  Index seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '%') continue;
    const std::size_t want = pattern ? 2 : 3;
    if (tok.size() != want) {
      throw InputError(source, lineno, "expected " + std::to_string(want) + " fields, got " + std::to_string(tok.size()));
    }
    Index i = 0, j = 0;
    if (!parse_int(tok[0], i) || !parse_int(tok[1], j)) throw InputError(source, lineno, "bad index");
    if (i < 1 || i > rows || j < 1 || j > cols) throw InputError(source, lineno, "entry outside the matrix");
    double v = 1.0;
    if (!pattern && (!parse_double(tok[2], v) || !std::isfinite(v))) {
      throw InputError(source, lineno, "bad value '" + std::string(tok[2]) + "'");
    }
    --i;
    --j;
    if (symmetry != "general" && j > i) throw InputError(source, lineno, "entry above the diagonal in symmetric storage");
    if (symmetry == "skew-symmetric" && i == j) throw InputError(source, lineno, "diagonal entry in skew-symmetric storage");
    ++seen;
    keyed.emplace_back(i * cols + j, lineno);
    trips.emplace_back(i, j, v);
    if (symmetry != "general" && i != j) trips.emplace_back(j, i, symmetry == "symmetric" ? v : -v);
  }
  if (seen != nnz) {
    throw InputError(source, lineno, "size line promises " + std::to_string(nnz) + " entries, found " + std::to_string(seen));
  }
  reject_duplicates(keyed, source, "entry");
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune(0.0);
  m.makeCompressed();
  return m;
}

SparseMatrix read_matrix_market_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix_market(in, path.string());
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_value(it.value()) << '\n';
    }
  }
}

void write_matrix_market_file(const std::filesystem::path& path, const SparseMatrix& m) {
  auto out = open_out(path);
  write_matrix_market(out, m);
}

SparseTensor ingest_matrix_market(const std::filesystem::path& path, const std::vector<Index>& row_dims,
                                  const std::vector<Index>& col_dims) {
  const SparseMatrix m = read_matrix_market_file(path);
  try {
    return tensorize_matrix(m, row_dims, col_dims);
  } catch (const ShapeError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_tt_json(std::ostream& out, const TTTensor& t) {
  nlohmann::json j;
  j["format"] = "fasttt.tt";
  j["dims"] = t.shape().dims();
  j["ranks"] = t.ranks();
  auto& cores = j["cores"] = nlohmann::json::array();
  for (const auto& c : t.cores()) cores.push_back(std::vector<double>(c.data().begin(), c.data().end()));
  out << j.dump() << '\n';
}

void write_tt_json_file(const std::filesystem::path& path, const TTTensor& t) {
  auto out = open_out(path);
  write_tt_json(out, t);
}

TTTensor read_tt_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("format") != "fasttt.tt") throw InputError("not a fasttt.tt document");
    const auto dims = j.at("dims").get<std::vector<Index>>();
    const auto ranks = j.at("ranks").get<std::vector<Index>>();
    const auto& cores = j.at("cores");
    if (ranks.size() != dims.size() + 1 || cores.size() != dims.size()) throw InputError("inconsistent TT document");
    std::vector<TTCore> out;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      out.emplace_back(ranks[k], dims[k], ranks[k + 1], cores[k].get<std::vector<double>>());
    }
    return TTTensor(std::move(out));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed TT document: ") + e.what());
  } catch (const ShapeError& e) {
    throw InputError(std::string("malformed TT document: ") + e.what());
  }
}

}  // namespace fasttt
