#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fasttt/matrix_types.hpp"
#include "fasttt/tensor.hpp"
#include "fasttt/tt_tensor.hpp"

namespace fasttt {

/// COO text: a `# shape n1 ... nd` header, then one nonzero per line as d
/// 1-based indices and a value. Other `#` lines and blank lines are ignored.
/// Errors carry the offending line number.
SparseTensor read_coo(std::istream& in, const std::string& source = "<stream>");
SparseTensor read_coo_file(const std::filesystem::path& path);

/// Values are written with 17 significant digits, so reading back is exact.
void write_coo(std::ostream& out, const SparseTensor& t);
void write_coo_file(const std::filesystem::path& path, const SparseTensor& t);

/// Matrix Market coordinate files with real, integer or pattern fields and
/// general, symmetric or skew-symmetric storage. Symmetric storage is
/// expanded. Array, complex and hermitian files are rejected by name.
SparseMatrix read_matrix_market(std::istream& in, const std::string& source = "<stream>");
SparseMatrix read_matrix_market_file(const std::filesystem::path& path);

/// General real coordinate output.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market_file(const std::filesystem::path& path, const SparseMatrix& m);

/// Reads a Matrix Market file and tensorizes it with the given factors.
SparseTensor ingest_matrix_market(const std::filesystem::path& path, const std::vector<Index>& row_dims,
                                  const std::vector<Index>& col_dims);

/// TT cores as JSON: {"format": "fasttt.tt", "ranks": [...], "dims": [...],
/// "cores": [[row-major values], ...]}.
void write_tt_json(std::ostream& out, const TTTensor& t);
void write_tt_json_file(const std::filesystem::path& path, const TTTensor& t);
TTTensor read_tt_json(std::istream& in);

}  // namespace fasttt
