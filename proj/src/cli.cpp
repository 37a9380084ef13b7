#include "esslab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "esslab/comparison.hpp"
#include "esslab/errors.hpp"
#include "esslab/model_io.hpp"
#include "esslab/smoothing.hpp"
#include "esslab/spectrum_oracle.hpp"
#include "esslab/volume.hpp"
#include "esslab/weyl.hpp"
#include "json.hpp"

namespace esslab::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::string> kSubcommands{"model", "ode", "smooth", "weyl", "sweep", "volume", "oracle"};

bool needs_model(const std::string& sub) { return sub != "ode"; }

const WarpedModel& require_warped(const AnyModel& model, const std::string& what) {
  if (const auto* w = std::get_if<WarpedModel>(&model)) return *w;
  throw NotApplicable(what + " needs a warped model, got soliton '" + model_name(model) + "'");
}

const SolitonModel& require_soliton(const AnyModel& model, const std::string& what) {
  if (const auto* s = std::get_if<SolitonModel>(&model)) return *s;
  throw NotApplicable(what + " needs a soliton model, got '" + model_name(model) + "'");
}

std::vector<double> geometric(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1)));
  }
  return out;
}

SmoothedDistance smooth_model(const WarpedModel& model) {
  return mollify_distance(model, standard_delta(model));
}

const std::vector<std::string> kWeylColumns{"lambda", "p", "quotient", "defect_norm", "phi_norm",
                                            "R_or_l", "x_or_b", "y_or_a", "certified"};

std::vector<Cell> weyl_row(const DefectReport& rep, bool certified) {
  const auto pc = rep.param_columns();
  return {rep.lambda, static_cast<std::int64_t>(rep.p), rep.quotient, rep.defect_norm, rep.phi_norm,
          pc[0], pc[1], pc[2], certified};
}

std::vector<Cell> certification_row(const Certification& c) {
  if (c.certificate) return weyl_row(*c.certificate, true);
  const auto best = std::min_element(c.attempts.begin(), c.attempts.end(), [](const auto& a, const auto& b) {
    return a.report.quotient < b.report.quotient;
  });
  if (best != c.attempts.end()) return weyl_row(best->report, false);
  return {c.lambda, static_cast<std::int64_t>(c.p), kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, false};
}

RunResult run_model(const AnyModel& model) {
  RunResult res;
  res.table.columns = {"field", "value"};
  const auto j = nlohmann::json::parse(describe_model_json(model));
  for (const auto& [key, v] : j.items()) {
    Cell c;
    if (v.is_boolean()) {
      c = v.get<bool>();
    } else if (v.is_number_integer()) {
      c = v.get<std::int64_t>();
    } else if (v.is_number()) {
      c = v.get<double>();
    } else if (v.is_string()) {
      c = v.get<std::string>();
    } else {
      c = v.dump();
    }
    res.table.add_row({key, c});
  }
  return res;
}

RunResult run_ode(const RunConfig& cfg) {
  RunResult res;
  const DeltaProfile delta = parse_delta_spec(cfg.delta);
  const ComparisonSolution sol = solve_comparison_ode(delta, cfg.r_max);
  res.table.columns = {"r", "u", "g_log"};
  for (std::size_t i = 0; i < sol.r.size(); ++i) {
    res.table.add_row({sol.r[i], sol.u_values[i], sol.log_g_values[i]});
  }
  const DecayReport decay = verify_decay(sol, cfg.tol);
  res.table.set_meta("limit_estimate", decay.limit_estimate);
  res.table.set_meta("tail_slope", decay.tail_slope);
  res.table.set_meta("decay", to_string(decay.status));
  res.table.set_meta("max_residual", sol.stats.max_residual);
  res.code = decay.status == DecayStatus::pass ? ExitCode::ok : ExitCode::negative;
  return res;
}

RunResult run_smooth(const AnyModel& model) {
  RunResult res;
  const SmoothedDistance sm = smooth_model(require_warped(model, "smooth"));
  res.table.columns = {"r", "rho_tilde", "d_rho_tilde", "laplacian_rho_tilde", "bound_a_margin", "bound_b_margin"};
  for (const auto& row : sm.rows()) {
    res.table.add_row({row.r, row.rho_tilde, row.d_rho_tilde, row.laplacian, row.bound_a_margin,
                       row.bound_b_margin});
  }
  const auto& rep = sm.report();
  res.table.set_meta("pass", rep.pass);
  res.table.set_meta("min_margin_a", rep.min_margin_a);
  res.table.set_meta("min_margin_b", rep.min_margin_b);
  res.table.set_meta("worst_radius", rep.worst_radius);
  res.table.set_meta("refinements", static_cast<std::int64_t>(rep.refinements));
  res.code = rep.pass ? ExitCode::ok : ExitCode::negative;
  return res;
}

RunResult run_weyl_params(const AnyModel& model, const RunConfig& cfg) {
  RunResult res;
  res.table.columns = kWeylColumns;
  const auto& prm = *cfg.params;
  bool all = true;
  for (double lambda : cfg.lambdas) {
    DefectReport rep;
    if (const auto* w = std::get_if<WarpedModel>(&model)) {
      WeylParamsNonCompact p{prm[0], prm[1], prm[2], cfg.mu, lambda, cfg.p};
      p.validate();
      rep = eval_defect(build_weyl_noncompact(smooth_model(*w), p));
    } else {
      SolitonWeylParams p{prm[2], prm[0], prm[1], cfg.mu, lambda, cfg.p};
      p.validate();
      rep = eval_defect(build_weyl_soliton(std::get<SolitonModel>(model), p));
    }
    const bool ok = rep.quotient < cfg.eps;
    all = all && ok;
    res.table.add_row(weyl_row(rep, ok));
  }
  res.code = all ? ExitCode::ok : ExitCode::negative;
  return res;
}

RunResult run_sweep(const AnyModel& model, const RunConfig& cfg) {
  if (cfg.params) return run_weyl_params(model, cfg);
  RunResult res;
  res.table.columns = kWeylColumns;
  const auto certs = sweep_spectrum(model, cfg.lambdas, cfg.eps, cfg.mu, cfg.p, cfg.threads);
  bool all = true;
  std::int64_t violations = 0;
  for (const auto& c : certs) {
    all = all && c.certified;
    violations += static_cast<std::int64_t>(c.dominance_violations);
    res.table.add_row(certification_row(c));
    if (!c.certified) {
      res.table.set_meta("failure_lambda_" + format_cell(c.lambda),
                         c.failure_reason + (c.binding_term.empty() ? "" : " (binding: " + c.binding_term + ")"));
    }
  }
  res.table.set_meta("all_certified", all);
  res.table.set_meta("dominance_violations", violations);
  res.code = all ? ExitCode::ok : ExitCode::negative;
  return res;
}

RunResult run_volume_growth(const WarpedModel& model, const RunConfig& cfg) {
  RunResult res;
  std::vector<double> ds;
  if (model.has_pole()) ds.push_back(0.0);
  for (double d = std::max(1.0, model.r_lo()); d <= model.r_max() / 4.0; d *= 2.0) ds.push_back(d);
  std::vector<double> rs = cfg.radii;
  if (rs.empty()) {
    for (double r = 1.0; r <= model.r_max() / 2.0; r *= 1.25) rs.push_back(r);
  }
  const GrowthReport rep = check_subexp_growth(model, cfg.eps, ds, rs);
  res.table.columns = {"family", "d", "r", "log_ratio_upper", "log_ratio_lower"};
  for (const auto& w : rep.witnesses) res.table.add_row({w.family, w.d, w.r, w.log_ratio_upper, w.log_ratio_lower});
  res.table.set_meta("verdict", to_string(rep.verdict));
  res.table.set_meta("eps", rep.eps);
  res.table.set_meta("best_constant", rep.best_constant);
  res.table.set_meta("violations", static_cast<std::int64_t>(rep.violations.size()));
  res.code = rep.verdict == GrowthVerdict::satisfied_on_surrogate ? ExitCode::ok : ExitCode::negative;
  return res;
}

RunResult run_volume_lemma1(const WarpedModel& model, const RunConfig& cfg) {
  RunResult res;
  const SmoothedDistance sm = smooth_model(model);
  const bool finite = warped_total_volume(model).finite;
  std::vector<double> rs = cfg.radii;
  if (rs.empty()) {
    for (double f : {2.0, 5.0, 10.0, 50.0}) {
      if (cfg.R1 * f <= sm.domain().hi) rs.push_back(cfg.R1 * f);
    }
  }
  res.table.columns = {"R1", "r", "finite_case", "eps", "lhs", "rhs", "pass"};
  bool all = true;
  for (double r : rs) {
    const Lemma1Report rep = check_lemma1(sm, cfg.R1, r, finite);
    all = all && rep.pass;
    res.table.add_row({cfg.R1, r, rep.finite_case, rep.eps, rep.lhs, rep.rhs, rep.pass});
  }
  res.table.set_meta("pass", all);
  res.code = all ? ExitCode::ok : ExitCode::negative;
  return res;
}

RunResult run_volume_lemma3(const SolitonModel& model, const RunConfig& cfg) {
  RunResult res;
  std::vector<std::pair<double, double>> pairs;
  if (!cfg.radii.empty()) {
    if (cfg.radii.size() != cfg.x_values.size()) throw InvalidInput("volume lemma3: --r and --x need equal lengths");
    for (std::size_t i = 0; i < cfg.radii.size(); ++i) pairs.emplace_back(cfg.radii[i], cfg.x_values[i]);
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double span = std::min(500.0, (model.rho_max() - model.rho_min() - 1.0) / 2.0);
    for (int i = 0; i < 100; ++i) {
      const double r = model.rho_min() + 1.0 + span * U(rng);
      pairs.emplace_back(r, r + span * U(rng));
    }
  }
  res.table.columns = {"r", "x", "l1_lhs", "l1_rhs", "l2_lhs", "l2_rhs", "pass"};
  bool all = true;
  for (const auto& [r, x] : pairs) {
    const Lemma3Report rep = check_lemma3(model, r, x);
    all = all && rep.pass;
    res.table.add_row({r, x, rep.l1_lhs, rep.l1_rhs, rep.l2_lhs, rep.l2_rhs, rep.pass});
  }
  res.table.set_meta("pass", all);
  res.code = all ? ExitCode::ok : ExitCode::negative;
  return res;
}

RunResult run_volume_identity(const SolitonModel& model, const RunConfig& cfg) {
  RunResult res;
  std::vector<double> grid = cfg.radii;
  if (grid.empty()) grid = geometric(model.rho_min() + 0.1, std::min(1e3, model.rho_max()), 400);
  const SolitonIdentityReport rep = check_soliton_volume_identities(model, grid);
  res.table.columns = {"r", "lhs", "rhs", "rel_residual"};
  for (const auto& row : rep.rows) res.table.add_row({row.r, row.lhs, row.rhs, row.rel_residual});
  res.table.set_meta("pass", rep.pass);
  res.table.set_meta("max_rel_residual", rep.max_rel_residual);
  res.table.set_meta("chi_over_V_max", rep.chi_over_V_max);
  res.table.set_meta("growth_constant", rep.growth_constant);
  const InfiniteVolumeReport inf = check_infinite_volume(model);
  res.table.set_meta("volume_exponent", inf.exponent);
  res.table.set_meta("infinite_volume", inf.infinite);
  res.code = rep.pass ? ExitCode::ok : ExitCode::negative;
  return res;
}

RunResult run_volume(const AnyModel& model, const RunConfig& cfg) {
  if (cfg.check == "growth") return run_volume_growth(require_warped(model, "volume growth"), cfg);
  if (cfg.check == "lemma1") return run_volume_lemma1(require_warped(model, "volume lemma1"), cfg);
  if (cfg.check == "lemma3") return run_volume_lemma3(require_soliton(model, "volume lemma3"), cfg);
  return run_volume_identity(require_soliton(model, "volume soliton-id"), cfg);
}

RunResult run_oracle(const AnyModel& model, const RunConfig& cfg) {
  RunResult res;
  const WarpedModel& wm = require_warped(model, "oracle");
  const FillInReport rep = estimate_essential_spectrum(wm, cfg.cap, cfg.L_list, cfg.N, cfg.threads);
  res.table.columns = {"L", "bc", "index", "eigenvalue"};
  const bool dir = cfg.bc != "neumann";
  const bool neu = cfg.bc != "dirichlet";
  for (const auto& lv : rep.levels) {
    auto emit = [&](const std::vector<double>& ev, const char* name) {
      for (std::size_t i = 0; i < ev.size(); ++i) {
        res.table.add_row({lv.L, std::string(name), static_cast<std::int64_t>(i), ev[i]});
      }
    };
    if (dir) emit(lv.dirichlet, "dirichlet");
    if (neu) emit(lv.neumann, "neumann");
  }
  res.table.set_meta("cap", rep.cap);
  res.table.set_meta("fills", rep.fills);
  res.table.set_meta("interlacing", rep.interlacing);
  for (const auto& lv : rep.levels) {
    const std::string key = format_cell(lv.L);
    res.table.set_meta("max_gap_L" + key, lv.max_gap);
    if (!lv.dirichlet.empty()) res.table.set_meta("bottom_L" + key, lv.dirichlet.front());
  }
  res.code = rep.fills ? ExitCode::ok : ExitCode::negative;
  return res;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidInput("not a number: '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<std::string> parts;
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
  if (sep == ':') {
    if (parts.size() != 3) throw InvalidInput("range must be start:stop:count, got '" + text + "'");
    const double a = number(parts[0]), b = number(parts[1]);
    const double c = number(parts[2]);
    if (!(c >= 1.0) || c != std::floor(c)) throw InvalidInput("range count must be a positive integer");
    const auto count = static_cast<std::size_t>(c);
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(number(p));
  if (out.empty()) throw InvalidInput("empty number list");
  return out;
}

void validate(const RunConfig& c) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), c.subcommand) == kSubcommands.end()) {
    throw InvalidInput("unknown subcommand '" + c.subcommand + "'");
  }
  if (needs_model(c.subcommand) && c.model_path.empty()) throw InvalidInput("--model is required");
  if (c.format != "csv" && c.format != "json") throw InvalidInput("--format must be csv or json");
  if (c.threads < 1) throw InvalidInput("--threads must be >= 1");
  if (c.subcommand == "weyl" || c.subcommand == "sweep") {
    if (c.lambdas.empty()) throw InvalidInput("--lambda needs at least one value");
    for (double l : c.lambdas) {
      if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidInput("--lambda values must be finite and >= 0");
    }
    if (c.p != 1 && c.p != 2) throw InvalidInput("--p must be 1 or 2");
    if (!(c.eps > 0.0)) throw InvalidInput("--eps must be positive");
    if (!(c.mu >= 0.0)) throw InvalidInput("--mu must be >= 0");
    if (c.params && c.params->size() != 3) throw InvalidInput("--params takes three numbers");
    if (c.subcommand == "weyl" && c.lambdas.size() != 1) throw InvalidInput("weyl takes one --lambda; use sweep for grids");
  }
  if (c.subcommand == "ode") {
    if (!(c.r_max > 0.0)) throw InvalidInput("--rmax must be positive");
    if (!(c.tol > 0.0)) throw InvalidInput("--tol must be positive");
  }
  if (c.subcommand == "volume") {
    static const std::vector<std::string> checks{"growth", "lemma1", "lemma3", "soliton-id"};
    if (std::find(checks.begin(), checks.end(), c.check) == checks.end()) {
      throw InvalidInput("--check must be one of growth, lemma1, lemma3, soliton-id");
    }
    if (!(c.eps > 0.0)) throw InvalidInput("--eps must be positive");
    if (!(c.R1 > 0.0)) throw InvalidInput("--R1 must be positive");
  }
  if (c.subcommand == "oracle") {
    if (!(c.cap > 0.0)) throw InvalidInput("--cap must be positive");
    if (c.N < 16) throw InvalidInput("--N must be >= 16");
    if (c.bc != "both") parse_boundary_condition(c.bc);
    if (c.L_list.empty()) throw InvalidInput("--L needs at least one value");
  }
}

RunResult execute(const RunConfig& cfg) {
  if (cfg.subcommand == "ode") return run_ode(cfg);
  const AnyModel model = load_model_file(cfg.model_path);
  if (cfg.subcommand == "model") return run_model(model);
  if (cfg.subcommand == "smooth") return run_smooth(model);
  if (cfg.subcommand == "weyl" || cfg.subcommand == "sweep") return run_sweep(model, cfg);
  if (cfg.subcommand == "volume") return run_volume(model, cfg);
  return run_oracle(model, cfg);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    const RunResult res = execute(config);
    const std::string text = config.format == "json" ? to_json(res.table) : to_csv(res.table);
    if (config.out.empty()) {
      out << text;
    } else {
      std::ofstream f(config.out, std::ios::binary);
      if (!f) throw InvalidInput("cannot open --out file '" + config.out + "'");
      f << text;
    }
    return static_cast<int>(res.code);
  } catch (const FileFormatError& e) {
    err << "esslab: " << e.where() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "esslab: " << e.what() << "\n";
  }
  return static_cast<int>(ExitCode::error);
}

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Numerical checks for the essential spectrum of the Laplacian on radial models"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", cfg.out, "Write the report here instead of stdout");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Seed for randomized sweeps");

  std::string lambda_text, params_text, radii_text, x_text, L_text;
  auto add_model = [&](CLI::App* s) { s->add_option("--model", cfg.model_path, "Model JSON file")->required(); };
  auto add_weyl = [&](CLI::App* s) {
    add_model(s);
    s->add_option("--lambda", lambda_text, "Value, list a,b,c, or range start:stop:count")->required();
    s->add_option("--p", cfg.p, "Exponent (1 or 2)");
    s->add_option("--eps", cfg.eps, "Target defect quotient");
    s->add_option("--mu", cfg.mu, "Minimum inner radius of the test function support");
    s->add_option("--params", params_text, "Fixed parameters R,x,y (warped) or b,l,a (soliton)");
  };

  add_model(app.add_subcommand("model", "Validate and describe a model file"));
  auto* ode = app.add_subcommand("ode", "Solve the comparison Riccati equation");
  ode->add_option("--delta", cfg.delta, "zero | const:c | inv:c | inv-sq:c | exp:c");
  ode->add_option("--rmax", cfg.r_max, "Outer radius");
  ode->add_option("--tol", cfg.tol, "Decay tolerance for u(r_max)");
  add_model(app.add_subcommand("smooth", "Mollify the distance function"));
  add_weyl(app.add_subcommand("weyl", "Certify or evaluate one spectral value"));
  add_weyl(app.add_subcommand("sweep", "Certify a grid of spectral values"));
  auto* vol = app.add_subcommand("volume", "Volume growth and integral estimates");
  add_model(vol);
  vol->add_option("--check", cfg.check, "growth | lemma1 | lemma3 | soliton-id");
  vol->add_option("--eps", cfg.eps, "Growth exponent");
  vol->add_option("--R1", cfg.R1, "Inner radius for the Laplacian integral check");
  vol->add_option("--r", radii_text, "Radii list");
  vol->add_option("--x", x_text, "Outer radii for lemma3 (paired with --r)");
  auto* orc = app.add_subcommand("oracle", "Truncated-domain eigenvalue oracle");
  add_model(orc);
  orc->add_option("--cap", cfg.cap, "Spectral window [0, cap]");
  orc->add_option("--L", L_text, "Truncation radii");
  orc->add_option("--N", cfg.N, "Cells per truncation");
  orc->add_option("--bc", cfg.bc, "dirichlet | neumann | both");

  try {
    app.parse(argc, argv);
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!lambda_text.empty()) cfg.lambdas = parse_number_list(lambda_text);
    if (!params_text.empty()) cfg.params = parse_number_list(params_text);
    if (!radii_text.empty()) cfg.radii = parse_number_list(radii_text);
    if (!x_text.empty()) cfg.x_values = parse_number_list(x_text);
    if (!L_text.empty()) cfg.L_list = parse_number_list(L_text);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::error);
  } catch (const std::exception& e) {
    std::cerr << "esslab: " << e.what() << "\n";
    return static_cast<int>(ExitCode::error);
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace esslab::cli
