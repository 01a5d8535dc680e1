#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "fasttt/fasttt.hpp"

namespace fasttt {

inline constexpr int kReportSchemaVersion = 1;

struct InputInfo {
  std::string file;
  Shape shape{1};
  Index nnz = 0;
};

/// Report document (schema "fasttt.report", version 1). Ranks are the
/// interior ranks r_1..r_{d-1}; p is 1-based.
nlohmann::json make_report(const DecompositionReport& rep, const InputInfo& input, int threads);

/// Throws InputError naming the first field that violates the schema.
void validate_report(const nlohmann::json& doc);

}  // namespace fasttt
