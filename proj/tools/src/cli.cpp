#include "fasttt_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "fasttt/errors.hpp"
#include "fasttt/fasttt.hpp"
#include "fasttt/generators.hpp"
#include "fasttt/io.hpp"
#include "fasttt/report.hpp"
#include "fasttt/tt_matrix.hpp"

namespace fasttt::cli {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::optional<std::size_t> parse_pivot(const std::string& p, std::size_t d) {
  if (p == "auto") return std::nullopt;
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(p, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != p.size() || v < 1 || static_cast<std::size_t>(v) > d) {
    throw InputError("--p must be 'auto' or an integer in 1.." + std::to_string(d) + ", got '" + p + "'");
  }
  return static_cast<std::size_t>(v - 1);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_ranks(const nlohmann::json& r) {
  if (!r.is_array()) return "-";
  std::string s = "(";
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i].get<Index>());
  return s + ")";
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

SparseTensor load_input(const std::string& path, const std::vector<Index>& row_dims,
                        const std::vector<Index>& col_dims) {
  if (!row_dims.empty() || !col_dims.empty() || ends_with(path, ".mtx")) {
    if (row_dims.empty() || col_dims.empty()) {
      throw InputError("Matrix Market input needs both --row-dims and --col-dims");
    }
    return ingest_matrix_market(path, row_dims, col_dims);
  }
  return read_coo_file(path);
}

nlohmann::json decompose(const DecomposeRequest& req, const SparseTensor& a, const std::string& input_name,
                         std::string* tt_json) {
  const RoundingMode mode = parse_rounding_mode(req.mode);
  if (mode == RoundingMode::FixedRank && req.ranks.empty()) throw InputError("--mode fixed needs --ranks");
  if (!req.ranks.empty() && req.ranks.size() != 1 && req.ranks.size() + 1 != a.order()) {
    throw InputError("--ranks takes one value or d-1 = " + std::to_string(a.order() - 1) + " values");
  }
  for (Index r : req.ranks) {
    if (r < 1) throw InputError("--ranks values must be >= 1");
  }
  if (!(req.eps >= 0.0) || !std::isfinite(req.eps)) throw InputError("--eps must be a finite value >= 0");

  Decomposition result = [&] {
    if (req.method == "fasttt") {
      FastTTOptions opt;
      opt.eps = req.eps;
      opt.p = parse_pivot(req.p, a.order());
      opt.mode = mode;
      opt.fixed_ranks = req.ranks;
      opt.precise_p = req.precise_p;
      return fasttt(a, opt);
    }
    if (req.method == "ttsvd") {
      if (mode != RoundingMode::Static) throw InputError("--method ttsvd supports only --mode static");
      return ttsvd_decompose(a, req.eps, true, req.dense_cap);
    }
    throw InputError("unknown method '" + req.method + "' (expected fasttt or ttsvd)");
  }();

  if (tt_json) {
    std::ostringstream os;
    write_tt_json(os, result.tt);
    *tt_json = os.str();
  }
  return make_report(result.report, {input_name, a.shape(), static_cast<Index>(a.nnz())}, req.threads);
}

namespace {

struct CaseInput {
  SparseTensor tensor{Shape{1}};
  std::string name;
};

std::vector<Index> dims_field(const nlohmann::json& j, const char* key) {
  return j.contains(key) ? j.at(key).get<std::vector<Index>>() : std::vector<Index>{};
}

CaseInput case_input(const nlohmann::json& c) {
  if (c.contains("input")) {
    const std::string path = c.at("input").get<std::string>();
    return {load_input(path, dims_field(c, "row_dims"), dims_field(c, "col_dims")), path};
  }
  if (!c.contains("generator")) throw InputError("case needs 'input' or 'generator'");
  const auto& g = c.at("generator");
  const std::string type = g.at("type").get<std::string>();
  const std::uint64_t seed = g.value("seed", std::uint64_t{0});
  auto matrix_case = [&](const SparseMatrix& m) {
    auto rd = dims_field(c, "row_dims");
    auto cd = dims_field(c, "col_dims");
    if (rd.empty() || cd.empty()) throw InputError("matrix generators need row_dims and col_dims");
    return tensorize_matrix(m, rd, cd);
  };
  if (type == "fdm") {
    const auto grid = g.at("grid").get<std::vector<Index>>();
    if (grid.size() != 3) throw InputError("fdm grid needs three sizes");
    const std::string coeffs = g.value("coeffs", std::string("laplacian"));
    if (coeffs != "laplacian" && coeffs != "random") throw InputError("fdm coeffs must be laplacian or random");
    const auto kind = coeffs == "random" ? FdmCoefficients::Random : FdmCoefficients::Laplacian;
    return {matrix_case(gen_fdm(grid[0], grid[1], grid[2], kind, seed)), "fdm:" + coeffs};
  }
  if (type == "banded") {
    return {matrix_case(gen_banded_symmetric(g.at("n").get<Index>(), g.at("bandwidth").get<Index>(),
                                             g.at("density").get<double>(), seed)),
            "banded"};
  }
  if (type == "random") {
    const Shape shape(g.at("shape").get<std::vector<Index>>());
    const double density = g.at("density").get<double>();
    if (g.contains("fiber_mode")) {
      const auto mode = g.at("fiber_mode").get<std::size_t>();
      if (mode < 1) throw InputError("fiber_mode is 1-based");
      return {gen_random_fibers(shape, density, mode - 1, seed), "random-fibers"};
    }
    return {gen_random_sparse(shape, density, seed), "random"};
  }
  throw InputError("unknown generator type '" + type + "'");
}

nlohmann::json run_case(const nlohmann::json& c) {
  nlohmann::json out;
  out["name"] = c.value("name", std::string("case"));
  out["reports"] = nlohmann::json::array();
  out["error"] = nullptr;
  try {
    const CaseInput in = case_input(c);
    DecomposeRequest req;
    req.eps = c.value("eps", 1e-14);
    req.mode = c.value("mode", std::string("static"));
    req.p = c.contains("p") ? (c.at("p").is_string() ? c.at("p").get<std::string>() : std::to_string(c.at("p").get<int>()))
                            : std::string("auto");
    req.ranks = dims_field(c, "ranks");
    req.dense_cap = c.value("dense_cap", kDefaultDenseCap);
    const auto methods = c.value("methods", std::vector<std::string>{"fasttt", "ttsvd"});
    for (const auto& m : methods) {
      req.method = m;
      DecomposeRequest r = req;
      if (m == "ttsvd") r.mode = "static";
      out["reports"].push_back(decompose(r, in.tensor, in.name));
    }
  } catch (const std::exception& e) {
    out["error"] = e.what();
  }

  const nlohmann::json* fast = nullptr;
  const nlohmann::json* base = nullptr;
  for (const auto& r : out["reports"]) {
    if (r["method"] == "fasttt") fast = &r;
    if (r["method"] == "ttsvd") base = &r;
  }
  out["speedup_cpu"] = nullptr;
  out["speedup_wall"] = nullptr;
  out["flop_ratio"] = nullptr;
  if (fast && base) {
    const double fc = (*fast)["time"]["cpu_s"].get<double>();
    const double fw = (*fast)["time"]["wall_s"].get<double>();
    if (fc > 0.0) out["speedup_cpu"] = (*base)["time"]["cpu_s"].get<double>() / fc;
    if (fw > 0.0) out["speedup_wall"] = (*base)["time"]["wall_s"].get<double>() / fw;
  }
  if (fast) {
    const double ff = (*fast)["flops"]["fasttt"].get<double>();
    if (ff > 0.0) out["flop_ratio"] = (*fast)["flops"]["ttsvd"].get<double>() / ff;
  }
  return out;
}

}  // namespace

nlohmann::json bench(const nlohmann::json& manifest, int threads) {
  if (!manifest.is_object() || !manifest.contains("cases") || !manifest.at("cases").is_array()) {
    throw InputError("bench manifest must be an object with a 'cases' array");
  }
  const auto& cases = manifest.at("cases");
  std::vector<nlohmann::json> results(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) results[i] = run_case(cases[i]);
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(cases.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  nlohmann::json doc;
  doc["schema"] = "fasttt.bench";
  doc["schema_version"] = kReportSchemaVersion;
  doc["threads"] = threads;
  doc["cases"] = results;
  return doc;
}

std::string bench_table(const nlohmann::json& doc) {
  std::ostringstream os;
  char line[512];
  std::snprintf(line, sizeof line, "%-20s %-7s %3s %8s %-16s %-16s %10s %10s %9s %9s\n", "case", "method", "p", "R",
                "r~", "r", "eps_actual", "cpu_s", "speedup", "flop_x");
  os << line;
  for (const auto& c : doc.at("cases")) {
    const std::string name = c.at("name").get<std::string>();
    if (!c.at("error").is_null()) {
      os << name << "  FAILED: " << c.at("error").get<std::string>() << '\n';
      continue;
    }
    for (const auto& r : c.at("reports")) {
      const bool fast = r.at("method") == "fasttt";
      std::snprintf(line, sizeof line, "%-20s %-7s %3s %8s %-16s %-16s %10s %10s %9s %9s\n", name.c_str(),
                    r.at("method").get<std::string>().c_str(),
                    r.at("p").is_null() ? "-" : std::to_string(r.at("p").get<int>()).c_str(),
                    r.at("R").is_null() ? "-" : std::to_string(r.at("R").get<Index>()).c_str(),
                    format_ranks(r.at("ranks_tilde")).c_str(), format_ranks(r.at("ranks")).c_str(),
                    r.at("eps_actual").is_null() ? "-" : fmt("%.2e", r.at("eps_actual").get<double>()).c_str(),
                    fmt("%.3f", r.at("time").at("cpu_s").get<double>()).c_str(),
                    fast && !c.at("speedup_cpu").is_null() ? fmt("%.2f", c.at("speedup_cpu").get<double>()).c_str() : "",
                    fast && !c.at("flop_ratio").is_null() ? fmt("%.2f", c.at("flop_ratio").get<double>()).c_str() : "");
      os << line;
    }
  }
  return os.str();
}

namespace {

int cmd_decompose(const DecomposeRequest& req, const std::string& report_path, const std::string& out_path,
                  std::ostream& out) {
  const SparseTensor a = load_input(req.input, req.row_dims, req.col_dims);
  std::string tt_json;
  const nlohmann::json rep = decompose(req, a, req.input, out_path.empty() ? nullptr : &tt_json);
  validate_report(rep);
  if (!report_path.empty()) write_text(report_path, rep.dump(2) + "\n");
  if (!out_path.empty()) write_text(out_path, tt_json);
  if (report_path.empty()) out << rep.dump(2) << '\n';
  for (const auto& w : rep.at("warnings")) out << "warning: " << w.get<std::string>() << '\n';
  return rep.at("contract_ok").get<bool>() ? kOk : kContractViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse tensor to tensor-train decomposition", "fasttt"};
  app.require_subcommand(1);

  DecomposeRequest dreq;
  std::string report_path, tt_out;
  auto* dec = app.add_subcommand("decompose", "Decompose a sparse tensor or matrix");
  dec->add_option("--in", dreq.input, "COO tensor or Matrix Market file")->required();
  dec->add_option("--row-dims", dreq.row_dims, "Row factorization for Matrix Market input");
  dec->add_option("--col-dims", dreq.col_dims, "Column factorization for Matrix Market input");
  dec->add_option("--method", dreq.method, "fasttt or ttsvd")->check(CLI::IsMember({"fasttt", "ttsvd"}));
  dec->add_option("--eps", dreq.eps, "Relative accuracy");
  dec->add_option("--p", dreq.p, "Pivot mode (1-based) or auto");
  dec->add_option("--mode", dreq.mode, "static, dynamic or fixed")->check(CLI::IsMember({"static", "dynamic", "fixed"}));
  dec->add_option("--ranks", dreq.ranks, "Target ranks for fixed mode (one value or d-1)");
  dec->add_flag("--precise-p", dreq.precise_p, "Select p from actual deparallelised ranks");
  dec->add_option("--dense-cap", dreq.dense_cap, "Largest dense tensor ttsvd may form");
  dec->add_option("--threads", dreq.threads, "Recorded in the report")->check(CLI::PositiveNumber);
  dec->add_option("--report", report_path, "Write the JSON report here instead of stdout");
  dec->add_option("--out", tt_out, "Write the TT cores as JSON");

  std::string manifest_path, bench_out;
  int bench_threads = 1;
  auto* ben = app.add_subcommand("bench", "Run a manifest of decomposition cases");
  ben->add_option("--manifest", manifest_path, "JSON manifest")->required();
  ben->add_option("--out", bench_out, "Write all reports as JSON");
  ben->add_option("--threads", bench_threads, "Cases run concurrently")->check(CLI::PositiveNumber);

  std::vector<Index> grid{20, 20, 20};
  std::string coeffs = "laplacian";
  std::uint64_t fdm_seed = 0;
  std::string fdm_out;
  std::vector<Index> fdm_rows, fdm_cols;
  auto* fdm = app.add_subcommand("gen-fdm", "7-point finite-difference matrix");
  fdm->add_option("--grid", grid, "Grid sizes n m k")->expected(3);
  fdm->add_option("--coeffs", coeffs, "laplacian or random")->check(CLI::IsMember({"laplacian", "random"}));
  fdm->add_option("--seed", fdm_seed);
  fdm->add_option("--row-dims", fdm_rows, "Write a tensorized COO file with these row factors");
  fdm->add_option("--col-dims", fdm_cols, "Column factors for the tensorized COO file");
  fdm->add_option("--out", fdm_out, "Output file (.mtx, or .coo with --row-dims/--col-dims)")->required();

  std::vector<Index> shape;
  double density = 0.01;
  std::uint64_t rnd_seed = 0;
  std::size_t fiber_mode = 0;
  std::string rnd_out;
  auto* rnd = app.add_subcommand("gen-random", "Random sparse tensor");
  rnd->add_option("--shape", shape, "Dimensions")->required();
  rnd->add_option("--density", density, "Fraction of nonzeros in (0, 1]");
  rnd->add_option("--seed", rnd_seed);
  rnd->add_option("--fiber-mode", fiber_mode, "Make whole fibers along this 1-based mode nonzero");
  rnd->add_option("--out", rnd_out, "COO output file")->required();

  Index band_n = 8000, bandwidth = 20;
  double band_density = 0.15;
  std::uint64_t band_seed = 0;
  std::string band_out;
  auto* ban = app.add_subcommand("gen-banded", "Random banded symmetric 0/1 matrix");
  ban->add_option("--n", band_n);
  ban->add_option("--bandwidth", bandwidth);
  ban->add_option("--density", band_density);
  ban->add_option("--seed", band_seed);
  ban->add_option("--out", band_out, "Matrix Market output file")->required();

  std::string sel_in;
  std::vector<Index> sel_rows, sel_cols, sel_ranks;
  bool sel_precise = false;
  auto* sel = app.add_subcommand("select-p", "Print the FLOP estimate for every pivot");
  sel->add_option("--in", sel_in)->required();
  sel->add_option("--row-dims", sel_rows);
  sel->add_option("--col-dims", sel_cols);
  sel->add_option("--ranks", sel_ranks, "Target ranks");
  sel->add_flag("--precise", sel_precise, "Use actual deparallelised ranks");

  std::vector<std::string> argv_store{"fasttt"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (dec->parsed()) return cmd_decompose(dreq, report_path, tt_out, out);
    if (ben->parsed()) {
      const nlohmann::json doc = bench(read_json_file(manifest_path), bench_threads);
      if (!bench_out.empty()) write_text(bench_out, doc.dump(2) + "\n");
      out << bench_table(doc);
      bool ok = true;
      for (const auto& c : doc.at("cases")) {
        if (!c.at("error").is_null()) ok = false;
        for (const auto& r : c.at("reports")) ok = ok && r.at("contract_ok").get<bool>();
      }
      return ok ? kOk : kContractViolation;
    }
    if (fdm->parsed()) {
      const auto kind = coeffs == "random" ? FdmCoefficients::Random : FdmCoefficients::Laplacian;
      const SparseMatrix m = gen_fdm(grid[0], grid[1], grid[2], kind, fdm_seed);
      if (!fdm_rows.empty() || !fdm_cols.empty()) {
        write_coo_file(fdm_out, tensorize_matrix(m, fdm_rows, fdm_cols));
      } else {
        write_matrix_market_file(fdm_out, m);
      }
      return kOk;
    }
    if (rnd->parsed()) {
      const Shape s(shape);
      const SparseTensor t = fiber_mode > 0 ? gen_random_fibers(s, density, fiber_mode - 1, rnd_seed)
                                            : gen_random_sparse(s, density, rnd_seed);
      write_coo_file(rnd_out, t);
      return kOk;
    }
    if (ban->parsed()) {
      write_matrix_market_file(band_out, gen_banded_symmetric(band_n, bandwidth, band_density, band_seed));
      return kOk;
    }
    if (sel->parsed()) {
      const SparseTensor a = load_input(sel_in, sel_rows, sel_cols);
      const PSelection ps = select_p(a, sel_ranks, sel_precise);
      nlohmann::json j;
      j["p"] = ps.p + 1;
      j["estimates"] = ps.estimates;
      j["fiber_counts"] = ps.fiber_counts;
      out << j.dump(2) << '\n';
      return kOk;
    }
  } catch (const ContractViolation& e) {
    err << "contract violation: " << e.what() << '\n';
    return kContractViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace fasttt::cli
