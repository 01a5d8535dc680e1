#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fasttt/tensor.hpp"

namespace fasttt::cli {

enum ExitCode : int { kOk = 0, kContractViolation = 1, kInputError = 2 };

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// COO tensor, or a Matrix Market matrix tensorized with row/col factors
/// when they are given or the file ends in .mtx.
SparseTensor load_input(const std::string& path, const std::vector<Index>& row_dims,
                        const std::vector<Index>& col_dims);

struct DecomposeRequest {
  std::string input;
  std::vector<Index> row_dims;
  std::vector<Index> col_dims;
  std::string method = "fasttt";
  double eps = 1e-14;
  std::string p = "auto";  // 1-based or "auto"
  std::string mode = "static";
  std::vector<Index> ranks;
  bool precise_p = false;
  Index dense_cap = kDefaultDenseCap;
  int threads = 1;
};

/// Runs one decomposition and returns its report document.
nlohmann::json decompose(const DecomposeRequest& req, const SparseTensor& a, const std::string& input_name,
                         std::string* tt_json = nullptr);

/// Runs every case of a bench manifest; failures are recorded per case.
nlohmann::json bench(const nlohmann::json& manifest, int threads);

/// Fixed-width summary table of a bench document.
std::string bench_table(const nlohmann::json& doc);

}  // namespace fasttt::cli
