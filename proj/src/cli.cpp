#include "bh/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bh/propagate.hpp"

namespace bh {
namespace cli {

namespace {

using io::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
  }
}

cdouble parse_complex(const json& j, const std::string& ctx) {
  if (j.is_number()) return cdouble(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return cdouble(j[0].get<double>(), j[1].get<double>());
  throw ConfigError(ctx + ": expected a number or [re, im]");
}

MatrixXcd parse_cmatrix(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) throw ConfigError(ctx + ": expected a nonempty row array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw ConfigError(ctx + ": ragged matrix rows");
    for (int k = 0; k < cols; ++k) m(i, k) = parse_complex(j[i][k], ctx);
  }
  return m;
}

Eigen::VectorXi parse_ivector(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ConfigError(ctx + ": expected an integer array");
  Eigen::VectorXi v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (!j[i].is_number_integer()) throw ConfigError(ctx + ": expected integers");
    v[i] = j[i].get<int>();
  }
  return v;
}

Eigen::VectorXd parse_dvector(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw ConfigError(ctx + ": expected a number array");
  Eigen::VectorXd v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(ctx + ": expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

PeriodicField parse_field(const json& j, const std::string& ctx) {
  check_keys(j, {"rows", "cols", "grid_shape", "fourier"}, ctx);
  for (const char* key : {"rows", "cols", "grid_shape", "fourier"})
    if (!j.contains(key)) throw ConfigError(ctx + ": missing key '" + key + "'");
  const int rows = j["rows"].get<int>(), cols = j["cols"].get<int>();
  Eigen::VectorXi grid = parse_ivector(j["grid_shape"], ctx + ".grid_shape");
  std::vector<std::pair<Eigen::VectorXi, MatrixXcd>> coeffs;
  for (const auto& entry : j["fourier"]) {
    check_keys(entry, {"kappa", "coeff"}, ctx + ".fourier[]");
    coeffs.emplace_back(parse_ivector(entry["kappa"], ctx + ".fourier[].kappa"),
                        parse_cmatrix(entry["coeff"], ctx + ".fourier[].coeff"));
  }
  return PeriodicField::from_fourier(rows, cols, grid, coeffs);
}

Eigen::VectorXd default_direction(int dim) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  theta[dim - 1] = 1.0;
  return theta;
}

std::vector<double> parse_ladder(const json& params, const char* key, double top_exp,
                                 double bot_exp) {
  if (params.contains(key)) {
    auto v = params[key].get<std::vector<double>>();
    if (v.empty()) throw ConfigError(std::string("params.") + key + ": empty ladder");
    return v;
  }
  std::vector<double> out;
  for (double e = top_exp; e >= bot_exp - 0.5; e -= 1.0) out.push_back(std::pow(2.0, -e));
  return out;
}

}  // namespace

GalleryEntry entry_from_config(const json& model_section) {
  check_keys(model_section, {"gallery", "c", "alpha", "lattice", "symbol", "fields"}, "model");
  if (model_section.contains("gallery")) {
    const std::string name = model_section["gallery"].get<std::string>();
    if (name == "example_15_1" && model_section.contains("c"))
      return example_15_1(model_section["c"].get<double>());
    if (name == "pauli" && model_section.contains("alpha"))
      return pauli_example_16_2(model_section["alpha"].get<double>());
    return make_gallery(name);
  }
  for (const char* key : {"lattice", "symbol", "fields"})
    if (!model_section.contains(key))
      throw ConfigError(std::string("model: missing key '") + key + "'");
  check_keys(model_section["lattice"], {"basis"}, "model.lattice");
  check_keys(model_section["symbol"], {"coeff"}, "model.symbol");
  check_keys(model_section["fields"], {"g", "f"}, "model.fields");

  MatrixXcd basis_c = parse_cmatrix(model_section["lattice"]["basis"], "model.lattice.basis");
  Lattice lat = Lattice::from_basis(basis_c.real());

  MatrixSymbol b;
  for (const auto& cj : model_section["symbol"]["coeff"])
    b.coeff.push_back(parse_cmatrix(cj, "model.symbol.coeff[]"));
  if (b.dim() != lat.dim) throw ConfigError("model.symbol: coefficient count != dimension");

  PeriodicField g = parse_field(model_section["fields"]["g"], "model.fields.g");
  std::optional<PeriodicField> f;
  if (model_section["fields"].contains("f"))
    f = parse_field(model_section["fields"]["f"], "model.fields.f");

  GalleryEntry e;
  e.name = "custom";
  e.model = OperatorModel::build(lat, b, g, f);
  return e;
}

namespace {

struct TaskContext {
  GalleryEntry entry;
  json params;
  std::string out_dir;
  bool want_csv = true;
  bool want_svg = false;
  json* summary = nullptr;
};

Eigen::VectorXi resolve_cutoff(const TaskContext& ctx) {
  if (ctx.params.contains("cutoff")) {
    Eigen::VectorXi cut = parse_ivector(ctx.params["cutoff"], "params.cutoff");
    if (cut.size() != ctx.entry.model.lattice.dim)
      throw ConfigError("params.cutoff: expected " +
                        std::to_string(ctx.entry.model.lattice.dim) + " entries, got " +
                        std::to_string(cut.size()));
    return cut;
  }
  if (ctx.params.contains("K"))
    return Eigen::VectorXi::Constant(ctx.entry.model.lattice.dim, ctx.params["K"].get<int>());
  if (ctx.entry.cell_cutoff.size() == ctx.entry.model.lattice.dim) return ctx.entry.cell_cutoff;
  return Eigen::VectorXi::Constant(ctx.entry.model.lattice.dim, 8);
}

int quality_gate(const TaskContext& ctx, const EffectiveData& eff) {
  double max_cell = 1e-8, max_weak = 1e-8;
  if (ctx.params.contains("quality")) {
    check_keys(ctx.params["quality"], {"max_cell_residual", "max_weak_residual"},
               "params.quality");
    if (ctx.params["quality"].contains("max_cell_residual"))
      max_cell = ctx.params["quality"]["max_cell_residual"].get<double>();
    if (ctx.params["quality"].contains("max_weak_residual"))
      max_weak = ctx.params["quality"]["max_weak_residual"].get<double>();
  }
  (*ctx.summary)["quality"] = {{"cell_residual", eff.cell_residual},
                               {"weak_form_residual", eff.weak_form_residual},
                               {"condition_estimate", eff.condition_estimate},
                               {"max_cell_residual", max_cell},
                               {"max_weak_residual", max_weak}};
  if (eff.cell_residual > max_cell || eff.weak_form_residual > max_weak) {
    (*ctx.summary)["quality"]["ok"] = false;
    return kQualityFailure;
  }
  (*ctx.summary)["quality"]["ok"] = true;
  return kOk;
}

int task_validate(const TaskContext& ctx) {
  ValidationReport rep = validate(ctx.entry.model);
  json issues = json::array();
  for (const auto& issue : rep.issues)
    issues.push_back({{"what", issue.what}, {"witness", issue.witness}});
  (*ctx.summary)["validation"] = {{"ok", rep.ok}, {"issues", issues}};
  if (rep.ok) {
    ThresholdParams tp = threshold_params(ctx.entry.model);
    (*ctx.summary)["thresholds"] = {{"c_star", tp.c_star},         {"delta", tp.delta},
                                    {"t0", tp.t0},                 {"c_star_hat", tp.c_star_hat},
                                    {"delta_hat", tp.delta_hat},   {"t0_hat", tp.t0_hat}};
  }
  return rep.ok ? kOk : kValidationFailure;
}

int task_effective(const TaskContext& ctx) {
  EffectiveData eff = compute_effective(ctx.entry.model, resolve_cutoff(ctx));
  (*ctx.summary)["g0"] = io::to_json(eff.g0);
  VoigtReussReport vr = voigt_reuss_check(eff.g0, ctx.entry.model.g);
  (*ctx.summary)["bounds"] = {{"g_upper", io::to_json(vr.g_upper)},
                              {"g_lower", io::to_json(vr.g_lower)},
                              {"min_eig_upper_gap", vr.min_eig_upper_gap},
                              {"min_eig_lower_gap", vr.min_eig_lower_gap},
                              {"ok", vr.ok}};
  DegenerateCases dc = classify_degenerate_cases(ctx.entry.model);
  (*ctx.summary)["degenerate"] = {{"g0_equals_upper", dc.g0_equals_upper},
                                  {"g0_equals_lower", dc.g0_equals_lower},
                                  {"upper_defect", dc.upper_defect},
                                  {"lower_defect", dc.lower_defect}};
  if (!ctx.entry.model.f_is_identity)
    (*ctx.summary)["Lambda_Q_shift"] = io::to_json(eff.Lambda_Q0);
  return quality_gate(ctx, eff);
}

int task_germ_sweep(const TaskContext& ctx) {
  const OperatorModel& model = ctx.entry.model;
  EffectiveData eff = compute_effective(model, resolve_cutoff(ctx));
  int rc = quality_gate(ctx, eff);
  int n_theta = ctx.params.value("n_theta", 0);
  double cluster_tol = ctx.params.value("cluster_tol", 1e-8);
  double zero_tol = ctx.params.value("zero_tol", 1e-10);
  ConditionReport rep = condition_check(model, eff, n_theta, cluster_tol, zero_tol);

  if (ctx.want_csv) {
    io::CsvTable table;
    table.header = {"theta_index"};
    for (int ax = 0; ax < model.lattice.dim; ++ax)
      table.header.push_back("theta_" + std::to_string(ax + 1));
    table.header.insert(table.header.end(), {"branch", "gamma", "mu"});
    for (size_t ti = 0; ti < rep.sweep.size(); ++ti) {
      const GermData& gd = rep.sweep[ti];
      const CorrectorData& cd = rep.sweep_correctors[ti];
      for (int l = 0; l < gd.gamma.size(); ++l) {
        std::vector<std::string> row = {std::to_string(ti)};
        for (int ax = 0; ax < model.lattice.dim; ++ax)
          row.push_back(io::format_double(gd.theta[ax]));
        row.push_back(std::to_string(l));
        row.push_back(io::format_double(gd.gamma[l]));
        row.push_back(io::format_double(cd.mu[l]));
        table.rows.push_back(std::move(row));
      }
    }
    io::write_csv(ctx.out_dir + "/germ_sweep.csv", table);
  }

  json pairs = json::array();
  for (auto& pr : rep.nonzero_block_pairs) pairs.push_back({pr.first, pr.second});
  json crossings = json::array();
  for (auto& pr : rep.crossing_pairs) crossings.push_back({pr.first, pr.second});
  (*ctx.summary)["germ"] = {{"N_identically_zero", rep.N_identically_zero},
                            {"N0_identically_zero", rep.N0_identically_zero},
                            {"condition_A", rep.condition_A},
                            {"condition_B", rep.condition_B},
                            {"max_N_norm", rep.max_N_norm},
                            {"max_N0_norm", rep.max_N0_norm},
                            {"c_circ", rep.c_circ},
                            {"t_circ", rep.t_circ},
                            {"nonzero_block_pairs", pairs},
                            {"crossing_pairs", crossings}};
  return rc;
}

int task_bands(const TaskContext& ctx) {
  const OperatorModel& model = ctx.entry.model;
  ThresholdParams tp = threshold_params(model);
  Eigen::VectorXd theta = ctx.params.contains("theta")
                              ? parse_dvector(ctx.params["theta"], "params.theta").normalized()
                              : default_direction(model.lattice.dim);
  const int N = ctx.params.value("N_k", 16);
  const double t_max =
      ctx.params.value("t_max", model.f_is_identity ? tp.t0_hat : tp.t0);
  const int count = ctx.params.value("count", 2 * model.b.n());
  Eigen::VectorXi cutoff = resolve_cutoff(ctx).cwiseMax(1);

  std::vector<Eigen::VectorXd> ks;
  for (int j = 1; j <= N; ++j) ks.push_back((t_max * j / N) * theta);
  auto table = band_functions(model, ks, cutoff, count);

  io::CsvTable csv;
  csv.header = {"t"};
  for (int l = 0; l < count; ++l) csv.header.push_back("lambda_" + std::to_string(l + 1));
  io::SvgSeries series;
  series.label = "lowest band";
  for (int j = 0; j < N; ++j) {
    std::vector<std::string> row = {io::format_double(t_max * (j + 1) / N)};
    for (int l = 0; l < table[j].second.size(); ++l)
      row.push_back(io::format_double(table[j].second[l]));
    csv.rows.push_back(std::move(row));
    series.x.push_back(t_max * (j + 1) / N);
    series.y.push_back(std::max(table[j].second[0], 1e-300));
  }
  if (ctx.want_csv) io::write_csv(ctx.out_dir + "/bands.csv", csv);
  if (ctx.want_svg)
    io::write_text(ctx.out_dir + "/bands.svg", io::loglog_svg("band functions", {series}));
  (*ctx.summary)["bands"] = {{"t_max", t_max}, {"count", count}, {"points", N}};
  return kOk;
}

SweepOptions sweep_options(const TaskContext& ctx) {
  SweepOptions opts;
  opts.N_k = ctx.params.value("N_k", 16);
  opts.eps_ladder = parse_ladder(ctx.params, "eps", 3, 8);
  opts.enrich_dirs = ctx.params.value("enrich_dirs", 16);
  opts.threads = ctx.params.value("threads", 0);
  return opts;
}

int task_error_sweep(const TaskContext& ctx) {
  const OperatorModel& model = ctx.entry.model;
  Eigen::VectorXi cutoff = resolve_cutoff(ctx).cwiseMax(1);
  EffectiveData eff = compute_effective(model, cutoff);
  int rc = quality_gate(ctx, eff);
  const double tau = ctx.params.value("tau", 1.0);
  const double s = ctx.params.value("s", 3.0);
  const bool sandwiched = ctx.params.value("sandwiched", !model.f_is_identity);
  ErrorSweep sweep = error_sweep(model, eff, cutoff, tau, s, sweep_options(ctx), sandwiched);

  io::CsvTable csv;
  csv.header = {"eps", "eta"};
  io::SvgSeries series{"eta(eps)", sweep.eps, sweep.eta};
  for (size_t i = 0; i < sweep.eps.size(); ++i)
    csv.rows.push_back({io::format_double(sweep.eps[i]), io::format_double(sweep.eta[i])});
  if (ctx.want_csv) io::write_csv(ctx.out_dir + "/error_sweep.csv", csv);
  if (ctx.want_svg)
    io::write_text(ctx.out_dir + "/error_sweep.svg",
                   io::loglog_svg("smoothed exponential error", {series}));
  (*ctx.summary)["error_sweep"] = {{"tau", tau},
                                   {"s", s},
                                   {"sandwiched", sandwiched},
                                   {"slope", sweep.fit.slope},
                                   {"degenerate", sweep.fit.degenerate}};
  return rc;
}

int task_sharpness(const TaskContext& ctx) {
  const OperatorModel& model = ctx.entry.model;
  Eigen::VectorXi cutoff = resolve_cutoff(ctx).cwiseMax(1);
  EffectiveData eff = compute_effective(model, cutoff);
  int rc = quality_gate(ctx, eff);
  Eigen::VectorXd theta = ctx.params.contains("theta")
                              ? parse_dvector(ctx.params["theta"], "params.theta").normalized()
                              : default_direction(model.lattice.dim);
  double mu;
  if (ctx.params.contains("mu")) {
    mu = ctx.params["mu"].get<double>();
  } else {
    GermData germ = germ_eigen(germ_matrix(eff.g0, model.b, theta), model.Q_bar, theta);
    CorrectorData cd = corrector_data(model, eff, germ);
    int best = 0;
    cd.mu.cwiseAbs().maxCoeff(&best);
    mu = cd.mu[best];
  }
  const double tau = ctx.params.value("tau", 1.0);
  const double s = ctx.params.value("s", 2.0);
  std::vector<double> ladder = parse_ladder(ctx.params, "eps", 9, 14);
  SharpnessReport rep = sharpness_probe(model, eff, theta, mu, tau, s, ladder, cutoff);

  io::CsvTable csv;
  csv.header = {"eps", "ratio"};
  for (size_t i = 0; i < rep.eps.size(); ++i)
    csv.rows.push_back({io::format_double(rep.eps[i]), io::format_double(rep.ratio[i])});
  if (ctx.want_csv) io::write_csv(ctx.out_dir + "/sharpness.csv", csv);
  if (ctx.want_svg)
    io::write_text(ctx.out_dir + "/sharpness.svg",
                   io::loglog_svg("resonant error ratio", {{"eta/eps", rep.eps, rep.ratio}}));
  (*ctx.summary)["sharpness"] = {{"s", s},
                                 {"tau", tau},
                                 {"mu", mu},
                                 {"ratio_exponent", rep.fit.slope},
                                 {"degenerate", rep.fit.degenerate}};
  return rc;
}

int task_cauchy(const TaskContext& ctx) {
  const OperatorModel& model = ctx.entry.model;
  Eigen::VectorXi cutoff = resolve_cutoff(ctx).cwiseMax(1);
  EffectiveData eff = compute_effective(model, cutoff);
  int rc = quality_gate(ctx, eff);
  const double tau = ctx.params.value("tau", 1.0);
  const double s = ctx.params.value("s", 3.0);
  const double rate = ctx.params.value("rate", s / 3.0);
  CauchyErrorReport rep = cauchy_error(model, eff, cutoff, tau, s, rate, sweep_options(ctx));

  io::CsvTable csv;
  csv.header = {"eps", "error", "normalized"};
  for (size_t i = 0; i < rep.eps.size(); ++i)
    csv.rows.push_back({io::format_double(rep.eps[i]), io::format_double(rep.error[i]),
                        io::format_double(rep.normalized[i])});
  if (ctx.want_csv) io::write_csv(ctx.out_dir + "/cauchy.csv", csv);
  if (ctx.want_svg)
    io::write_text(ctx.out_dir + "/cauchy.svg",
                   io::loglog_svg("Cauchy-data error", {{"error", rep.eps, rep.error}}));
  (*ctx.summary)["cauchy"] = {{"tau", tau},
                              {"s", s},
                              {"rate", rate},
                              {"phi_sobolev_norm", rep.phi_sobolev_norm},
                              {"slope", rep.fit.slope},
                              {"degenerate", rep.fit.degenerate}};
  return rc;
}

int task_gallery(const TaskContext& ctx) {
  const GalleryEntry& entry = ctx.entry;
  json refs;
  for (const auto& [key, value] : entry.ref_scalars) refs[key] = value;
  for (const auto& [key, value] : entry.ref_matrices) refs[key] = io::to_json(value);
  (*ctx.summary)["name"] = entry.name;
  (*ctx.summary)["references"] = refs;
  (*ctx.summary)["notes"] = entry.notes;

  EffectiveData eff = compute_effective(entry.model, resolve_cutoff(ctx));
  (*ctx.summary)["g0"] = io::to_json(eff.g0);
  auto it = entry.ref_matrices.find("g0");
  if (it != entry.ref_matrices.end())
    (*ctx.summary)["g0_deviation"] = (eff.g0 - it->second).cwiseAbs().maxCoeff();
  if (entry.pauli_forms) {
    const PauliClosedForm& cf = *entry.pauli_forms;
    (*ctx.summary)["closed_form"] = {
        {"g0_plus", cf.g0_plus},
        {"g0_minus", cf.g0_minus},
        {"gamma", cf.gamma},
        {"mean_w2v_plus", io::to_json(cf.mean_w2v_plus)},
        {"mean_w2v_minus", io::to_json(cf.mean_w2v_minus)}};
  }
  return quality_gate(ctx, eff);
}

json gallery_config(const std::string& name) {
  GalleryEntry entry = make_gallery(name);
  json cfg;
  cfg["task"] = "gallery";
  cfg["model"] = {{"gallery", name}};
  json params;
  if (entry.cell_cutoff.size() > 0) params["cutoff"] = io::to_json(entry.cell_cutoff);
  cfg["params"] = params;
  cfg["output"] = {{"dir", "out"}, {"csv", true}, {"svg", false}};
  return cfg;
}

}  // namespace

RunResult run_config(json config) {
  RunResult rr;
  rr.summary = json::object();
  try {
    check_keys(config, {"task", "model", "params", "output"}, "config");
    if (!config.contains("task")) throw ConfigError("config: missing 'task'");
    if (!config.contains("model")) throw ConfigError("config: missing 'model'");
    const std::string task = config["task"].get<std::string>();
    if (!config.contains("params")) config["params"] = json::object();
    if (!config.contains("output")) config["output"] = json::object();
    check_keys(config["output"], {"dir", "csv", "svg", "summary"}, "output");
    check_keys(config["params"],
               {"cutoff", "K", "N_k", "n_theta", "eps", "tau", "s", "theta", "mu", "count",
                "t_max", "rate", "sandwiched", "threads", "enrich_dirs", "cluster_tol",
                "zero_tol", "quality"},
               "params");

    TaskContext ctx;
    try {
      ctx.entry = entry_from_config(config["model"]);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      // construction failures (unknown gallery name, bad parameter, malformed
      // coefficient data) are configuration problems, not numerical ones
      throw ConfigError(std::string("model: ") + e.what());
    }
    ctx.params = config["params"];
    ctx.out_dir = config["output"].value("dir", "out");
    ctx.want_csv = config["output"].value("csv", true);
    ctx.want_svg = config["output"].value("svg", false);
    ctx.summary = &rr.summary;
    std::filesystem::create_directories(ctx.out_dir);

    rr.summary["task"] = task;
    rr.summary["config"] = config;  // resolved configuration, audit trail

    // every task starts from a validated model
    ValidationReport vrep = validate(ctx.entry.model);
    if (!vrep.ok && task != "validate") {
      json issues = json::array();
      for (const auto& issue : vrep.issues)
        issues.push_back({{"what", issue.what}, {"witness", issue.witness}});
      rr.summary["validation"] = {{"ok", false}, {"issues", issues}};
      rr.exit_code = kValidationFailure;
    } else if (task == "validate") {
      rr.exit_code = task_validate(ctx);
    } else if (task == "effective") {
      rr.exit_code = task_effective(ctx);
    } else if (task == "germ-sweep") {
      rr.exit_code = task_germ_sweep(ctx);
    } else if (task == "bands") {
      rr.exit_code = task_bands(ctx);
    } else if (task == "error-sweep") {
      rr.exit_code = task_error_sweep(ctx);
    } else if (task == "sharpness") {
      rr.exit_code = task_sharpness(ctx);
    } else if (task == "cauchy") {
      rr.exit_code = task_cauchy(ctx);
    } else if (task == "gallery") {
      rr.exit_code = task_gallery(ctx);
    } else {
      throw ConfigError("config: unknown task '" + task + "'");
    }

    const std::string summary_name = config["output"].value("summary", "summary.json");
    io::write_text(ctx.out_dir + "/" + summary_name, rr.summary.dump(2) + "\n");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    rr.exit_code = kValidationFailure;
  } catch (const json::exception& e) {
    // wrong value types for known keys surface as JSON access errors
    std::cerr << "config error: " << e.what() << "\n";
    rr.exit_code = kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    rr.exit_code = kQualityFailure;
  }
  return rr;
}

}  // namespace cli
}  // namespace bh

#include <CLI11.hpp>

namespace bh {
namespace cli {

namespace {

using io::json;

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::runtime_error(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                             ": " + e.what());
  }
}

void apply_override(json& config, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos) throw std::runtime_error("--set expects key=value: " + spec);
  std::string path = spec.substr(0, eq), value = spec.substr(eq + 1);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (...) {
    parsed = value;  // plain string
  }
  json* node = &config;
  size_t start = 0;
  while (true) {
    auto dot = path.find('.', start);
    std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (dot == std::string::npos) {
      (*node)[key] = parsed;
      break;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"effective characteristics of periodic factorized elliptic operators"};
  app.require_subcommand(1);

  std::string config_path, task, name, out_dir;
  std::vector<std::string> overrides;
  auto* run_cmd = app.add_subcommand("run", "execute a JSON run configuration");
  run_cmd->add_option("config", config_path, "configuration file")->required();
  run_cmd->add_option("--task", task, "override the task");
  run_cmd->add_option("--name", name, "override the gallery model name");
  run_cmd->add_option("--out", out_dir, "override the output directory");
  run_cmd->add_option("--set", overrides, "override a config key (dotted.path=json)");

  std::string gallery_name;
  std::string emit_path;
  auto* gal_cmd = app.add_subcommand("gallery", "bundled models");
  gal_cmd->add_option("name", gallery_name, "entry name, or 'list'");
  auto* emit_opt =
      gal_cmd->add_option("--emit-config", emit_path, "write a standalone config file")
          ->expected(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kValidationFailure : kOk;
  }

  try {
    if (run_cmd->parsed()) {
      json config = load_config(config_path);
      if (!task.empty()) config["task"] = task;
      if (!name.empty()) config["model"] = {{"gallery", name}};
      if (!out_dir.empty()) config["output"]["dir"] = out_dir;
      for (const auto& spec : overrides) apply_override(config, spec);
      return run_config(std::move(config)).exit_code;
    }
    if (gal_cmd->parsed()) {
      if (gallery_name.empty() || gallery_name == "list") {
        for (const auto& n : gallery_names()) std::cout << n << "\n";
        return kOk;
      }
      json cfg = gallery_config(gallery_name);
      if (*emit_opt) {
        std::string path = emit_path.empty() ? gallery_name + ".json" : emit_path;
        io::write_text(path, cfg.dump(2) + "\n");
        std::cout << path << "\n";
      } else {
        std::cout << cfg.dump(2) << "\n";
      }
      return kOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kOk;
}

}  // namespace cli
}  // namespace bh
