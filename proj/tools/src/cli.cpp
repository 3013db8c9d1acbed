#include "toric_hk_cli/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/LU>

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "toric_hk/catalog.hpp"
#include "toric_hk/error.hpp"
#include "toric_hk/io.hpp"
#include "toric_hk/potential.hpp"
#include "toric_hk/verify.hpp"

namespace toric_hk::cli {
namespace {

using nlohmann::json;

struct Target {
  std::string label;
  ArrangementData data;
  const CatalogEntry* entry = nullptr;
};

// A catalog name, or else a path to an arrangement file.
Target resolve(const std::string& name) {
  if (const auto* e = find_catalog_entry(name)) return {name, {e->arrangement, e->b}, e};
  return {name, load_arrangement(name), nullptr};
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_validate(const Target& t, std::ostream& out) {
  const auto verdict = smoothness_check(t.data.arrangement);
  json j = {{"target", t.label},
            {"n", t.data.arrangement.dim()},
            {"flats", t.data.arrangement.size()},
            {"taub_nut_order", t.data.b.order()},
            {"smooth", verdict.smooth},
            {"failing_stratum", nullptr}};
  if (verdict.failing_stratum) j["failing_stratum"] = to_json(*verdict.failing_stratum);
  out << j.dump(2) << "\n";
  return verdict.smooth ? kExitPass : kExitCheckFailed;
}

int cmd_classify(const Target& t, std::ostream& out) {
  const auto report = classify(t.data.arrangement, t.data.b);
  json j = to_json(report);
  j["strata"] = json::array();
  for (const auto& s : intersection_strata(t.data.arrangement)) j["strata"].push_back(to_json(s));
  out << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_eval(const Target& t, const std::string& point_text, std::ostream& out) {
  const auto& arr = t.data.arrangement;
  const auto& b = t.data.b;
  const Point3n p = parse_point(point_text, arr.dim());
  json j = {{"point", to_json(p)}};
  try {
    j["F"] = eval_F(arr, b, p);
  } catch (const BranchLocusError&) {
    j["F"] = nullptr;  // on the branch locus of the logarithm
  }
  const Mat phi = eval_Phi(arr, b, p).value;
  j["Phi"] = matrix_json(phi);
  j["det_Phi"] = phi.determinant();
  try {
    const Mat g = eval_metric(arr, b, p).value;
    j["metric"] = matrix_json(g);
    j["det_g"] = g.determinant();
  } catch (const BranchLocusError&) {
    // the connection is singular along the string in this gauge
    j["metric"] = nullptr;
    j["det_g"] = nullptr;
  }
  j["quotient_metric"] = matrix_json(quotient_metric(arr, b, p));
  const Vec mu = moment_map(p);
  j["moment_map"] = std::vector<double>(mu.data(), mu.data() + mu.size());
  out << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_verify(const Target& t, const std::string& checks, std::uint64_t seed, std::size_t points,
               bool local_models, std::ostream& out) {
  VerifyOptions opts;
  opts.checks = split_names(checks);
  opts.seed = seed;
  if (points > 0) opts.points = points;
  opts.local_models = local_models;
  opts.growth.seed = seed;

  json j = {{"target", t.label}, {"seed", seed}};
  bool pass = true;
  const auto verdict = smoothness_check(t.data.arrangement);
  if (!verdict.smooth) {
    json fs = to_json(*verdict.failing_stratum);
    j["smooth"] = false;
    j["failing_stratum"] = fs;
  }
  j["reports"] = json::array();
  if (verdict.smooth) {
    for (const auto& r : run_verification(t.data.arrangement, t.data.b, opts)) {
      j["reports"].push_back(to_json(r));
      pass = pass && r.pass;
    }
  }
  if (t.entry) {
    const auto mismatches = golden_mismatches(*t.entry, classify(t.data.arrangement, t.data.b));
    j["golden"] = {{"pass", mismatches.empty()}, {"mismatches", mismatches}};
    pass = pass && mismatches.empty();
  } else if (!verdict.smooth) {
    pass = false;
  }
  j["pass"] = pass;
  out << j.dump(2) << "\n";
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_growth(const Target& t, const std::string& radii, std::size_t samples, std::uint64_t seed,
               std::ostream& out) {
  GrowthOptions opts;
  if (!radii.empty()) opts.radii = parse_list(radii, "--radii");
  if (samples > 0) opts.samples = samples;
  opts.seed = seed;
  const auto& arr = t.data.arrangement;
  const double expected = 4.0 * arr.dim() - t.data.b.order();
  const auto tol = default_tolerances();
  json j = {{"target", t.label}, {"expected", expected}, {"tolerance", tol.growth_exponent}};
  bool pass = false;
  try {
    const auto est = volume_growth_exponent(arr, t.data.b, arrangement_center(arr), opts, tol);
    j["estimate"] = to_json(est);
    pass = std::abs(est.exponent - expected) <= tol.growth_exponent;
  } catch (const InsufficientSamplesError& e) {
    j["error"] = e.what();
  }
  j["pass"] = pass;
  out << j.dump(2) << "\n";
  return pass ? kExitPass : kExitCheckFailed;
}

int cmd_export_grid(const Target& t, const std::vector<int>& axes,
                    const std::vector<std::string>& ranges, const std::string& base_text,
                    const std::string& path, std::ostream& out) {
  if (axes.size() != ranges.size()) throw InputError("each --axis needs one --range");
  if (axes.empty()) throw InputError("at least one --axis is required");
  std::vector<GridAxis> grid;
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const auto r = parse_list(ranges[i], "--range");
    if (r.size() != 3 || r[2] < 1 || std::floor(r[2]) != r[2]) {
      throw InputError("--range expects lo,hi,count");
    }
    grid.push_back({axes[i], r[0], r[1], static_cast<int>(r[2])});
  }
  const auto& arr = t.data.arrangement;
  const Point3n base = base_text.empty() ? Point3n::zero(arr.dim()) : parse_point(base_text, arr.dim());
  if (path.empty() || path == "-") {
    write_grid_csv(out, arr, t.data.b, base, grid);
  } else {
    std::ofstream file(path);
    if (!file) throw InputError(path + ": cannot open for writing");
    write_grid_csv(file, arr, t.data.b, base, grid);
  }
  return kExitPass;
}

int cmd_catalog(std::ostream& out) {
  json j = json::array();
  for (const auto& e : catalog()) {
    json item = {{"name", e.name},
                 {"description", e.description},
                 {"arrangement", arrangement_to_json(e.arrangement, e.b)}};
    json expected = json::object();
    const auto& x = e.expected;
    const auto put = [&](const char* key, const auto& field) {
      if (field) expected[key] = {{"value", field->value}, {"source", to_string(field->source)}};
    };
    put("smooth", x.smooth);
    put("failing_stratum", x.failing_stratum);
    put("simply_connected", x.simply_connected);
    put("flat_factor_l", x.flat_factor_l);
    put("taub_nut_order", x.taub_nut_order);
    put("volume_growth_exponent", x.volume_growth_exponent);
    if (x.ale_label) {
      expected["ale_label"] = {{"value", x.ale_label->value ? json(*x.ale_label->value) : json(nullptr)},
                               {"source", to_string(x.ale_label->source)}};
    }
    put("cone_over_3sasakian", x.cone_over_3sasakian);
    item["expected"] = expected;
    j.push_back(item);
  }
  out << j.dump(2) << "\n";
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toric hyperkahler metrics from flat arrangements"};
  app.require_subcommand(1);

  std::string target, checks, point, radii, base, grid_out;
  std::uint64_t seed = 1;
  std::size_t samples = 0, points = 0;
  bool local_models = false;
  std::vector<int> axes;
  std::vector<std::string> ranges;
  const char* target_help = "arrangement JSON file or catalog entry name";

  auto* validate = app.add_subcommand("validate", "parse an arrangement and check smoothness");
  validate->add_option("target", target, target_help)->required();
  auto* classify_cmd = app.add_subcommand("classify", "classification report as JSON");
  classify_cmd->add_option("target", target, target_help)->required();
  auto* eval = app.add_subcommand("eval", "F, Phi, metric and quotient metric at a point");
  eval->add_option("target", target, target_help)->required();
  eval->add_option("--point", point, "x1..xn,Re z1..Re zn,Im z1..Im zn")->required();
  auto* verify = app.add_subcommand("verify", "run residual checks");
  verify->add_option("target", target, target_help)->required();
  verify->add_option("--checks", checks, "comma-separated subset of the checks");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--points", points, "sample points per check");
  verify->add_flag("--local-models", local_models, "include the flat local-model checks");
  auto* growth = app.add_subcommand("growth", "fit the volume growth exponent");
  growth->add_option("target", target, target_help)->required();
  growth->add_option("--radii", radii, "comma-separated increasing radii");
  growth->add_option("--samples", samples, "Monte-Carlo draws");
  growth->add_option("--seed", seed, "random seed");
  auto* grid = app.add_subcommand("export-grid", "sample Phi and det g on a lattice as CSV");
  grid->add_option("target", target, target_help)->required();
  grid->add_option("--axis", axes, "coordinate index in (x, Re z, Im z), repeatable")->required();
  grid->add_option("--range", ranges, "lo,hi,count for the matching --axis, repeatable")
      ->required();
  grid->add_option("--base", base, "fixed values of the other coordinates");
  grid->add_option("--out", grid_out, "output CSV path ('-' for stdout)");
  auto* list = app.add_subcommand("catalog", "list the built-in catalog");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  try {
    if (list->parsed()) return cmd_catalog(out);
    const Target t = resolve(target);
    if (validate->parsed()) return cmd_validate(t, out);
    if (classify_cmd->parsed()) return cmd_classify(t, out);
    if (eval->parsed()) return cmd_eval(t, point, out);
    if (verify->parsed()) return cmd_verify(t, checks, seed, points, local_models, out);
    if (growth->parsed()) return cmd_growth(t, radii, samples, seed, out);
    if (grid->parsed()) return cmd_export_grid(t, axes, ranges, base, grid_out, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const OnFlatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitInputError;
}

}  // namespace toric_hk::cli
