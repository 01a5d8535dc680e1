#include "fasttt/report.hpp"

#include <cmath>

#include "fasttt/errors.hpp"

namespace fasttt {

namespace {

std::vector<Index> interior(const std::vector<Index>& r) {
  if (r.size() < 2) return {};
  return {r.begin() + 1, r.end() - 1};
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json make_report(const DecompositionReport& rep, const InputInfo& input, int threads) {
  nlohmann::json j;
  j["schema"] = "fasttt.report";
  j["schema_version"] = kReportSchemaVersion;
  j["method"] = rep.method;
  j["input"] = {{"file", input.file},
                {"shape", input.shape.dims()},
                {"nnz", input.nnz},
                {"density", static_cast<double>(input.nnz) / static_cast<double>(input.shape.size())}};
  j["tolerance"] = rep.eps;
  j["mode"] = to_string(rep.mode);
  j["threads"] = threads;
  j["p"] = rep.p ? nlohmann::json(*rep.p + 1) : nlohmann::json(nullptr);
  j["R"] = rep.R ? nlohmann::json(*rep.R) : nlohmann::json(nullptr);
  j["ranks_tilde"] = rep.ranks_tilde.empty() ? nlohmann::json(nullptr) : nlohmann::json(interior(rep.ranks_tilde));
  j["ranks"] = interior(rep.ranks);
  if (rep.error) {
    j["eps_actual"] = finite_or_null(rep.error->relative);
    j["eps_actual_identity"] = finite_or_null(rep.error->relative_identity);
  } else {
    j["eps_actual"] = nullptr;
    j["eps_actual_identity"] = nullptr;
  }
  j["flops"] = {{"ttsvd", rep.flops_ttsvd}, {"fasttt", rep.method == "fasttt" ? nlohmann::json(rep.flops_fasttt) : nlohmann::json(nullptr)}};
  j["time"] = {{"wall_s", rep.wall_seconds}, {"cpu_s", rep.cpu_seconds}};
  j["warnings"] = rep.warnings;
  j["contract_ok"] = rep.contract_ok();
  return j;
}

void validate_report(const nlohmann::json& doc) {
  auto fail = [](const std::string& what) { throw InputError("invalid report: " + what); };
  auto need = [&](const nlohmann::json& obj, const char* key) -> const nlohmann::json& {
    if (!obj.is_object() || !obj.contains(key)) fail(std::string("missing field '") + key + "'");
    return obj.at(key);
  };
  auto number = [&](const nlohmann::json& v, const std::string& name, bool nullable) {
    if (nullable && v.is_null()) return;
    if (!v.is_number() || !std::isfinite(v.get<double>())) fail("field '" + name + "' must be a finite number");
  };
  auto int_array = [&](const nlohmann::json& v, const std::string& name, bool nullable) {
    if (nullable && v.is_null()) return;
    if (!v.is_array()) fail("field '" + name + "' must be an array");
    for (const auto& x : v) {
      if (!x.is_number_integer() || x.get<Index>() < 0) fail("field '" + name + "' must hold nonnegative integers");
    }
  };

  if (need(doc, "schema") != "fasttt.report") fail("schema must be 'fasttt.report'");
  if (need(doc, "schema_version") != kReportSchemaVersion) fail("unsupported schema_version");
  const auto& method = need(doc, "method");
  if (method != "fasttt" && method != "ttsvd") fail("method must be 'fasttt' or 'ttsvd'");
  const auto& input = need(doc, "input");
  if (!need(input, "file").is_string()) fail("input.file must be a string");
  int_array(need(input, "shape"), "input.shape", false);
  if (need(input, "shape").empty()) fail("input.shape must be nonempty");
  number(need(input, "nnz"), "input.nnz", false);
  number(need(input, "density"), "input.density", false);
  number(need(doc, "tolerance"), "tolerance", false);
  const auto& mode = need(doc, "mode");
  if (mode != "static" && mode != "dynamic" && mode != "fixed") fail("mode must be static, dynamic or fixed");
  if (!need(doc, "threads").is_number_integer()) fail("threads must be an integer");
  number(need(doc, "p"), "p", true);
  number(need(doc, "R"), "R", true);
  int_array(need(doc, "ranks_tilde"), "ranks_tilde", true);
  int_array(need(doc, "ranks"), "ranks", false);
  number(need(doc, "eps_actual"), "eps_actual", true);
  number(need(doc, "eps_actual_identity"), "eps_actual_identity", true);
  const auto& flops = need(doc, "flops");
  number(need(flops, "ttsvd"), "flops.ttsvd", false);
  number(need(flops, "fasttt"), "flops.fasttt", true);
  const auto& time = need(doc, "time");
  number(need(time, "wall_s"), "time.wall_s", false);
  number(need(time, "cpu_s"), "time.cpu_s", false);
  if (!need(doc, "warnings").is_array()) fail("warnings must be an array");
  if (!need(doc, "contract_ok").is_boolean()) fail("contract_ok must be a boolean");
  if (method == "fasttt" && (doc.at("p").is_null() || doc.at("R").is_null())) fail("fasttt reports need p and R");
}

}  // namespace fasttt
