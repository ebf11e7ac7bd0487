// Turns a parsed configuration into evaluated checks and the three report
// artifacts: a CSV table, a JSON summary and plottable .dat blocks. Every
// number in the artifacts is printed through format_double or the JSON
// serializer, so two runs with the same config produce identical bytes.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "choquet/common.hpp"
#include "choquet/config.hpp"
#include "choquet/content.hpp"
#include "choquet/domains.hpp"
#include "choquet/functions.hpp"
#include "choquet/grid.hpp"
#include "choquet/inequalities.hpp"
#include "choquet/integral.hpp"
#include "choquet/operators.hpp"
#include "choquet/presets.hpp"

namespace choquet {

// One CSV row. Columns that a given check does not use stay 0; sweep rows
// carry the swept parameter in the t column.
struct CheckRow {
  std::string theorem;
  std::string domain;
  std::string family;
  double delta = 0.0, kappa = 0.0, p = 0.0, q = 0.0, s = 0.0, epsilon = 0.0, t = 0.0;
  int level = 0;
  double lhs = 0.0, rhs = 0.0, ratio = 0.0, stable = 1.0;
  bool finite = true;
};

struct DatBlock {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct RunResult {
  int exit_code = 0;
  std::vector<CheckRow> rows;
  nlohmann::ordered_json summary;
  std::vector<DatBlock> blocks;
  std::vector<std::string> log;
};

namespace detail {

// Ratio of the refined constant to the base one; 1 when the check was not
// refined or both constants vanish.
inline double stability(double base, double refine) {
  if (base == 0.0 && refine == 0.0) return 1.0;
  if (base == 0.0) return std::numeric_limits<double>::infinity();
  return refine / base;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += '"';
  return quoted;
}

inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Base and refinement levels after applying config overrides to the preset
// plan. refine == 0 means single-level evaluation.
struct LevelPlan {
  int base = 6;
  int refine = 0;
};

inline LevelPlan plan_levels(const ExperimentConfig& cfg, const Preset* preset) {
  LevelPlan lp;
  lp.base = preset ? preset->level : cfg.level;
  lp.refine = preset ? preset->refine_level : cfg.refine_level;
  if (cfg.level_set) {
    lp.base = cfg.level;
    lp.refine = 0;
  }
  if (cfg.refine_level > 0) lp.refine = cfg.refine_level;
  if (cfg.refine_flag) lp.refine = lp.base + 1;
  if (lp.refine == lp.base) lp.refine = 0;
  return lp;
}

// Rasterizations are shared across checks on the same domain and level.
class RasterCache {
 public:
  const RasterizedDomain& get(const DomainSpec& spec, int dim, int level) {
    std::string key = spec.name() + "|" + std::to_string(dim) + "|" + std::to_string(level);
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(std::move(key), rasterize(spec, GridGeometry(dim, level))).first;
    return it->second;
  }

 private:
  std::map<std::string, RasterizedDomain> cache_;
};

inline nlohmann::ordered_json params_json(const InequalityParams& prm) {
  nlohmann::ordered_json j;
  j["delta"] = prm.delta;
  j["kappa"] = prm.kappa;
  j["p"] = prm.p;
  j["q"] = prm.q;
  j["s"] = prm.s;
  j["epsilon"] = prm.epsilon;
  j["k"] = prm.k;
  return j;
}

inline nlohmann::ordered_json report_json(const InequalityReport& rep) {
  nlohmann::ordered_json j;
  j["level"] = rep.level;
  j["lhs"] = rep.lhs;
  j["rhs"] = rep.rhs;
  j["ratio"] = rep.ratio;
  j["finite"] = rep.finite;
  j["b"] = rep.b_used;
  j["b_is_infimum"] = rep.b_is_infimum;
  if (!rep.curve.empty()) {
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const auto& [t, c] : rep.curve) curve.push_back({t, c});
    j["curve"] = std::move(curve);
    j["rearranged_sup"] = rep.rearranged_sup;
    j["t_worst"] = rep.params.t;
  }
  return j;
}

inline CheckRow row_from_report(const InequalityReport& rep, const std::string& domain,
                                const std::string& family) {
  CheckRow row;
  row.theorem = theorem_name(rep.theorem);
  row.domain = domain;
  row.family = family;
  row.delta = rep.params.delta;
  row.kappa = rep.params.kappa;
  row.p = rep.params.p;
  row.q = rep.params.q;
  row.s = rep.params.s;
  row.epsilon = rep.params.epsilon;
  row.t = rep.params.t;
  row.level = rep.level;
  row.lhs = rep.lhs;
  row.rhs = rep.rhs;
  row.ratio = rep.ratio;
  row.finite = rep.finite;
  return row;
}

}  // namespace detail

inline std::string csv_text(const std::vector<CheckRow>& rows) {
  std::ostringstream os;
  os << "theorem,domain,family,delta,kappa,p,q,s,epsilon,t,level,lhs,rhs,ratio,stable\n";
  for (const CheckRow& r : rows) {
    os << detail::csv_field(r.theorem) << ',' << detail::csv_field(r.domain) << ','
       << detail::csv_field(r.family) << ',' << format_double(r.delta) << ','
       << format_double(r.kappa) << ',' << format_double(r.p) << ',' << format_double(r.q) << ','
       << format_double(r.s) << ',' << format_double(r.epsilon) << ',' << format_double(r.t) << ','
       << r.level << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
       << format_double(r.ratio) << ',' << format_double(r.stable) << '\n';
  }
  return os.str();
}

inline std::string dat_text(const std::vector<DatBlock>& blocks) {
  std::ostringstream os;
  bool first = true;
  for (const DatBlock& b : blocks) {
    if (!first) os << '\n';
    first = false;
    os << "# " << b.label << '\n';
    for (const auto& [x, y] : b.points) os << format_double(x) << ' ' << format_double(y) << '\n';
  }
  return os.str();
}

namespace detail {

inline void eval_inequality_check(const PresetCheck& chk, const LevelPlan& lp, int quantize,
                                  RasterCache& cache, RunResult& res, nlohmann::ordered_json& jcheck) {
  const RasterizedDomain& base = cache.get(chk.domain, chk.dim, lp.base);
  const RasterizedDomain* fine = lp.refine > 0 ? &cache.get(chk.domain, chk.dim, lp.refine) : nullptr;
  const std::string dom_name = chk.domain.name();

  nlohmann::ordered_json jfuncs = nlohmann::ordered_json::array();
  DatBlock ratios;
  ratios.label = std::string(theorem_name(chk.theorem)) + " " + dom_name + " ratio by function, L" +
                 std::to_string(lp.base);
  for (std::size_t fi = 0; fi < chk.functions.size(); ++fi) {
    const TestFunction& u = chk.functions[fi];
    InequalityReport rb = run_check(chk.theorem, base, u, chk.params, chk.b_mode, quantize);
    double stable = 1.0;
    nlohmann::ordered_json jlevels = nlohmann::ordered_json::array();
    jlevels.push_back(report_json(rb));
    CheckRow row_base = row_from_report(rb, dom_name, u.name());
    if (!rb.finite) res.exit_code = 2;

    if (fine) {
      InequalityReport rf = run_check(chk.theorem, *fine, u, chk.params, chk.b_mode, quantize);
      stable = stability(rb.ratio, rf.ratio);
      if (!rf.finite) res.exit_code = 2;
      jlevels.push_back(report_json(rf));
      CheckRow row_fine = row_from_report(rf, dom_name, u.name());
      row_fine.stable = stable;
      row_base.stable = stable;
      res.rows.push_back(row_base);
      res.rows.push_back(row_fine);
      if (chk.theorem == TheoremId::WeakType) {
        DatBlock blk;
        blk.label = "weak-type " + dom_name + " " + u.name() + " c(t), L" + std::to_string(lp.refine);
        blk.points = rf.curve;
        res.blocks.push_back(std::move(blk));
      }
      res.log.push_back("  " + std::string(theorem_name(chk.theorem)) + " " + dom_name + " " +
                        u.name() + ": ratio L" + std::to_string(lp.base) + "=" + short_num(rb.ratio) +
                        " L" + std::to_string(lp.refine) + "=" + short_num(rf.ratio) +
                        " stable=" + short_num(stable) + (rb.finite && rf.finite ? "" : " [not finite]"));
    } else {
      res.rows.push_back(row_base);
      res.log.push_back("  " + std::string(theorem_name(chk.theorem)) + " " + dom_name + " " +
                        u.name() + ": ratio L" + std::to_string(lp.base) + "=" + short_num(rb.ratio) +
                        (rb.finite ? "" : " [not finite]"));
    }
    if (chk.theorem == TheoremId::WeakType) {
      DatBlock blk;
      blk.label = "weak-type " + dom_name + " " + u.name() + " c(t), L" + std::to_string(lp.base);
      blk.points = rb.curve;
      res.blocks.push_back(std::move(blk));
    }
    ratios.points.push_back({static_cast<double>(fi), rb.ratio});

    nlohmann::ordered_json jf;
    jf["family"] = u.name();
    jf["levels"] = std::move(jlevels);
    jf["stable"] = stable;
    jfuncs.push_back(std::move(jf));
  }
  if (chk.theorem != TheoremId::WeakType) res.blocks.push_back(std::move(ratios));

  jcheck["kind"] = "inequality";
  jcheck["theorem"] = theorem_name(chk.theorem);
  jcheck["domain"] = dom_name;
  jcheck["b_mode"] = chk.b_mode == BMode::Infimum ? "infimum" : "john-average";
  jcheck["params"] = params_json(chk.params);
  jcheck["functions"] = std::move(jfuncs);
}

inline void eval_adams_check(const PresetCheck& chk, const LevelPlan& lp, int quantize,
                             RasterCache& cache, RunResult& res, nlohmann::ordered_json& jcheck) {
  const std::string dom_name = chk.domain.name();
  nlohmann::ordered_json jlevels = nlohmann::ordered_json::array();
  std::vector<double> base_ratio, fine_ratio;
  std::vector<CheckRow> base_rows;

  auto run_level = [&](int level, std::vector<double>& ratios, std::vector<CheckRow>& rows_out) {
    const RasterizedDomain& dom = cache.get(chk.domain, chk.dim, level);
    std::vector<GridFunction> family;
    family.reserve(chk.functions.size());
    for (const TestFunction& fn : chk.functions) family.push_back(sample_function(fn, dom));
    AdamsReport rep =
        check_adams_bound(family, chk.params.delta, chk.params.kappa, chk.params.p, quantize);
    if (!rep.finite) res.exit_code = 2;
    nlohmann::ordered_json jper = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < chk.functions.size(); ++i) {
      CheckRow row;
      row.theorem = "adams";
      row.domain = dom_name;
      row.family = chk.functions[i].name();
      row.delta = chk.params.delta;
      row.kappa = chk.params.kappa;
      row.p = chk.params.p;
      row.level = level;
      row.lhs = rep.lhs[i];
      row.rhs = rep.rhs[i];
      row.ratio = rep.ratio[i];
      row.finite = std::isfinite(rep.ratio[i]);
      rows_out.push_back(row);
      ratios.push_back(rep.ratio[i]);
      jper.push_back({{"family", chk.functions[i].name()},
                      {"lhs", rep.lhs[i]},
                      {"rhs", rep.rhs[i]},
                      {"ratio", rep.ratio[i]}});
    }
    nlohmann::ordered_json jl;
    jl["level"] = level;
    jl["sup_ratio"] = rep.sup_ratio;
    jl["finite"] = rep.finite;
    jl["per_function"] = std::move(jper);
    jlevels.push_back(std::move(jl));
    res.log.push_back("  adams " + dom_name + " L" + std::to_string(level) +
                      ": sup ratio=" + short_num(rep.sup_ratio) +
                      (rep.finite ? "" : " [not finite]"));
    return rep.sup_ratio;
  };

  double sup_base = run_level(lp.base, base_ratio, base_rows);
  double stable = 1.0;
  if (lp.refine > 0) {
    std::vector<CheckRow> fine_rows;
    double sup_fine = run_level(lp.refine, fine_ratio, fine_rows);
    stable = stability(sup_base, sup_fine);
    for (std::size_t i = 0; i < base_rows.size(); ++i) {
      base_rows[i].stable = stability(base_ratio[i], fine_ratio[i]);
      fine_rows[i].stable = base_rows[i].stable;
    }
    for (CheckRow& r : base_rows) res.rows.push_back(std::move(r));
    for (CheckRow& r : fine_rows) res.rows.push_back(std::move(r));
  } else {
    for (CheckRow& r : base_rows) res.rows.push_back(std::move(r));
  }

  DatBlock blk;
  blk.label = "adams " + dom_name + " ratio by function, L" + std::to_string(lp.base);
  for (std::size_t i = 0; i < base_ratio.size(); ++i)
    blk.points.push_back({static_cast<double>(i), base_ratio[i]});
  res.blocks.push_back(std::move(blk));

  jcheck["kind"] = "adams";
  jcheck["domain"] = dom_name;
  jcheck["params"] = params_json(chk.params);
  jcheck["levels"] = std::move(jlevels);
  jcheck["stable"] = stable;
}

inline void eval_hedberg_check(const PresetCheck& chk, const LevelPlan& lp, RasterCache& cache,
                               RunResult& res, nlohmann::ordered_json& jcheck) {
  const std::string dom_name = chk.domain.name();
  nlohmann::ordered_json jfuncs = nlohmann::ordered_json::array();
  DatBlock blk;
  blk.label = "hedberg " + dom_name + " ratio by function, L" + std::to_string(lp.base);

  for (std::size_t fi = 0; fi < chk.functions.size(); ++fi) {
    const TestFunction& fn = chk.functions[fi];
    auto run_level = [&](int level) {
      const RasterizedDomain& dom = cache.get(chk.domain, chk.dim, level);
      return check_hedberg_split(sample_function(fn, dom), chk.params.delta, chk.params.s,
                                 chk.params.p, chk.params.kappa);
    };
    HedbergReport rb = run_level(lp.base);
    if (!rb.finite) res.exit_code = 2;
    double stable = 1.0;
    nlohmann::ordered_json jlevels = nlohmann::ordered_json::array();
    auto level_json = [](int level, const HedbergReport& r) {
      nlohmann::ordered_json j;
      j["level"] = level;
      j["max_ratio"] = r.max_ratio;
      j["norm"] = r.norm;
      j["beta"] = r.beta;
      j["exponent_maximal"] = r.exponent_maximal;
      j["exponent_norm"] = r.exponent_norm;
      j["finite"] = r.finite;
      return j;
    };
    jlevels.push_back(level_json(lp.base, rb));

    auto make_row = [&](int level, const HedbergReport& r) {
      CheckRow row;
      row.theorem = "hedberg";
      row.domain = dom_name;
      row.family = fn.name();
      row.delta = chk.params.delta;
      row.kappa = chk.params.kappa;
      row.p = chk.params.p;
      row.s = chk.params.s;
      row.level = level;
      row.rhs = r.norm;
      row.ratio = r.max_ratio;
      row.finite = r.finite;
      return row;
    };
    CheckRow row_base = make_row(lp.base, rb);
    if (lp.refine > 0) {
      HedbergReport rf = run_level(lp.refine);
      if (!rf.finite) res.exit_code = 2;
      stable = stability(rb.max_ratio, rf.max_ratio);
      jlevels.push_back(level_json(lp.refine, rf));
      CheckRow row_fine = make_row(lp.refine, rf);
      row_base.stable = stable;
      row_fine.stable = stable;
      res.rows.push_back(row_base);
      res.rows.push_back(row_fine);
    } else {
      res.rows.push_back(row_base);
    }
    res.log.push_back("  hedberg " + dom_name + " " + fn.name() + ": max ratio=" +
                      short_num(rb.max_ratio) + " stable=" + short_num(stable) +
                      (rb.finite ? "" : " [not finite]"));
    blk.points.push_back({static_cast<double>(fi), rb.max_ratio});

    nlohmann::ordered_json jf;
    jf["family"] = fn.name();
    jf["levels"] = std::move(jlevels);
    jf["stable"] = stable;
    jfuncs.push_back(std::move(jf));
  }
  res.blocks.push_back(std::move(blk));

  jcheck["kind"] = "hedberg";
  jcheck["domain"] = dom_name;
  jcheck["params"] = params_json(chk.params);
  jcheck["functions"] = std::move(jfuncs);
}

inline void eval_check(const PresetCheck& chk, const LevelPlan& lp, int quantize, RasterCache& cache,
                       RunResult& res, nlohmann::ordered_json& jcheck) {
  switch (chk.kind) {
    case PresetKind::Inequality:
      eval_inequality_check(chk, lp, quantize, cache, res, jcheck);
      return;
    case PresetKind::Adams:
      eval_adams_check(chk, lp, quantize, cache, res, jcheck);
      return;
    case PresetKind::Hedberg:
      eval_hedberg_check(chk, lp, cache, res, jcheck);
      return;
  }
}

// Resolves the checks a run operates on: the named preset's bundle, or the
// single custom check described by the config fields.
struct ResolvedRun {
  std::vector<PresetCheck> checks;
  const Preset* preset = nullptr;
  std::vector<Preset> catalog;
  LevelPlan levels;
  int quantize = 0;
};

inline ResolvedRun resolve_run(const ExperimentConfig& cfg) {
  ResolvedRun run;
  if (!cfg.preset.empty()) {
    run.catalog = preset_catalog(cfg.seed);
    run.preset = find_preset(run.catalog, cfg.preset);
    if (!run.preset) throw ConfigError("config field 'preset': unknown preset '" + cfg.preset + "'");
    run.checks = run.preset->checks;
    run.quantize = cfg.quantize > 0 ? cfg.quantize : run.preset->quantize_levels;
  } else {
    PresetCheck chk;
    chk.theorem = theorem_from_name(cfg.theorem);
    chk.domain = domain_from_config(cfg);
    chk.dim = cfg.dim;
    chk.functions = {function_from_config(cfg)};
    chk.params = params_from_config(cfg);
    chk.b_mode = b_mode_from_config(cfg);
    run.checks = {std::move(chk)};
    run.quantize = cfg.quantize;
  }
  run.levels = plan_levels(cfg, run.preset);
  return run;
}

inline nlohmann::ordered_json run_header(const ExperimentConfig& cfg, const ResolvedRun& run) {
  nlohmann::ordered_json j;
  j["command"] = command_name(cfg.command);
  if (run.preset) {
    j["preset"] = run.preset->name;
    j["statement"] = run.preset->statement;
  }
  j["seed"] = cfg.seed;
  j["level"] = run.levels.base;
  j["refine_level"] = run.levels.refine;
  j["quantize"] = run.quantize;
  return j;
}

inline void log_header(const ExperimentConfig& cfg, const ResolvedRun& run, RunResult& res) {
  if (run.preset) {
    res.log.push_back("preset " + run.preset->name + ": " + run.preset->statement);
  } else {
    res.log.push_back(std::string(command_name(cfg.command)) + ": custom run");
  }
}

}  // namespace detail

inline RunResult run_check_command(const ExperimentConfig& cfg) {
  RunResult res;
  detail::ResolvedRun run = detail::resolve_run(cfg);
  detail::log_header(cfg, run, res);
  res.summary = detail::run_header(cfg, run);

  detail::RasterCache cache;
  nlohmann::ordered_json jchecks = nlohmann::ordered_json::array();
  for (const PresetCheck& chk : run.checks) {
    nlohmann::ordered_json jcheck;
    detail::eval_check(chk, run.levels, run.quantize, cache, res, jcheck);
    jchecks.push_back(std::move(jcheck));
  }
  res.summary["checks"] = std::move(jchecks);
  res.summary["exit_code"] = res.exit_code;
  res.log.push_back(res.exit_code == 0 ? "all checks finite" : "one or more checks failed");
  return res;
}

inline RunResult run_sweep_command(const ExperimentConfig& cfg) {
  RunResult res;
  detail::ResolvedRun run = detail::resolve_run(cfg);
  detail::log_header(cfg, run, res);
  res.summary = detail::run_header(cfg, run);

  std::vector<double> grid = cfg.sweep_grid;
  std::function<TestFunction(double)> family;
  std::size_t check_index = 0;
  if (run.preset) {
    if (grid.empty()) grid = run.preset->sweep_grid;
    family = run.preset->sweep_family;
    check_index = static_cast<std::size_t>(run.preset->sweep_check);
  }
  if (!family) family = sweep_family_from_config(cfg);
  if (grid.empty())
    throw ConfigError("config field 'sweep_grid': a sweep needs a nonempty parameter grid");
  const PresetCheck& chk = run.checks.at(check_index);
  if (chk.kind != PresetKind::Inequality)
    throw ConfigError("config field 'preset': this preset's sweep target is not an inequality check");

  int refine = run.levels.refine > 0 ? run.levels.refine : run.levels.base;
  ConstantEstimate est =
      estimate_constant(chk.theorem, chk.domain, chk.dim, grid, family, chk.params, run.levels.base,
                        refine, chk.b_mode, run.quantize);
  if (!est.finite) res.exit_code = 2;

  const std::string dom_name = chk.domain.name();
  double stable = detail::stability(est.ratio_base_level, est.ratio_refine_level);
  DatBlock blk;
  blk.label = std::string(theorem_name(chk.theorem)) + " " + dom_name + " sweep, L" +
              std::to_string(run.levels.base);
  for (const auto& [param, ratio] : est.sweep) {
    CheckRow row;
    row.theorem = theorem_name(chk.theorem);
    row.domain = dom_name;
    row.family = family(param).name();
    row.delta = chk.params.delta;
    row.kappa = chk.params.kappa;
    row.p = chk.params.p;
    row.q = chk.params.q;
    row.s = chk.params.s;
    row.epsilon = chk.params.epsilon;
    row.t = param;
    row.level = run.levels.base;
    row.ratio = ratio;
    row.stable = stable;
    row.finite = std::isfinite(ratio);
    res.rows.push_back(std::move(row));
    blk.points.push_back({param, ratio});
  }
  res.blocks.push_back(std::move(blk));

  nlohmann::ordered_json jsweep;
  jsweep["theorem"] = theorem_name(chk.theorem);
  jsweep["domain"] = dom_name;
  jsweep["params"] = detail::params_json(chk.params);
  jsweep["grid"] = grid;
  nlohmann::ordered_json jratios = nlohmann::ordered_json::array();
  for (const auto& [param, ratio] : est.sweep) jratios.push_back({param, ratio});
  jsweep["sweep"] = std::move(jratios);
  jsweep["sup_ratio"] = est.sup_ratio;
  jsweep["argmax_parameter"] = est.argmax_parameter;
  jsweep["ratio_base_level"] = est.ratio_base_level;
  jsweep["ratio_refine_level"] = est.ratio_refine_level;
  jsweep["stable"] = stable;
  jsweep["finite"] = est.finite;
  res.summary["sweep"] = std::move(jsweep);
  res.summary["exit_code"] = res.exit_code;
  res.log.push_back("  sweep " + std::string(theorem_name(chk.theorem)) + " " + dom_name +
                    ": sup ratio=" + detail::short_num(est.sup_ratio) + " at parameter=" +
                    detail::short_num(est.argmax_parameter) + " stable=" + detail::short_num(stable) +
                    (est.finite ? "" : " [not finite]"));
  return res;
}

// content, integrate and maximal: single-quantity evaluations on the
// configured (or preset) domain and function.
inline RunResult run_value_command(const ExperimentConfig& cfg) {
  RunResult res;
  detail::ResolvedRun run = detail::resolve_run(cfg);
  detail::log_header(cfg, run, res);
  res.summary = detail::run_header(cfg, run);

  const PresetCheck& chk = run.checks.at(0);
  const std::string dom_name = chk.domain.name();
  const double delta = chk.params.delta;
  detail::RasterCache cache;

  struct LevelValue {
    int level;
    double lhs, rhs, ratio;
    double extra = 0.0;
  };
  std::vector<LevelValue> vals;
  auto eval_at = [&](int level) {
    const RasterizedDomain& dom = cache.get(chk.domain, chk.dim, level);
    LevelValue v{level, 0.0, 0.0, 0.0};
    if (cfg.command == Command::Content) {
      v.lhs = v.rhs = dyadic_content_value(dom.set, delta);
      v.ratio = 1.0;
    } else if (cfg.command == Command::Integrate) {
      GridFunction f = sample_function(chk.functions.at(0), dom);
      PowerIntegral pi = choquet_integral_power(f, chk.params.p, delta);
      v.lhs = v.rhs = pi.integral.value;
      v.ratio = 1.0;
      v.extra = pi.residual;
    } else {
      GridFunction f = sample_function(chk.functions.at(0), dom);
      GridFunction mf =
          fractional_maximal(f, OperatorParams::with_default_radii(dom.geometry(), chk.params.kappa));
      double sup_m = 0.0, sup_f = 0.0;
      for (std::uint64_t idx : dom.set.indices()) {
        sup_m = std::max(sup_m, mf.value(idx));
        sup_f = std::max(sup_f, f.value(idx));
      }
      v.lhs = sup_m;
      v.rhs = sup_f;
      v.ratio = sup_f > 0.0 ? sup_m / sup_f : (sup_m > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
    return v;
  };

  vals.push_back(eval_at(run.levels.base));
  if (run.levels.refine > 0) vals.push_back(eval_at(run.levels.refine));
  double stable = vals.size() > 1 ? detail::stability(vals[0].lhs, vals[1].lhs) : 1.0;

  nlohmann::ordered_json jlevels = nlohmann::ordered_json::array();
  DatBlock blk;
  blk.label = std::string(command_name(cfg.command)) + " " + dom_name + " by level";
  for (const LevelValue& v : vals) {
    CheckRow row;
    row.theorem = command_name(cfg.command);
    row.domain = dom_name;
    row.family = cfg.command == Command::Content ? "indicator" : chk.functions.at(0).name();
    row.delta = delta;
    row.kappa = cfg.command == Command::Maximal ? chk.params.kappa : 0.0;
    row.p = cfg.command == Command::Integrate ? chk.params.p : 0.0;
    row.level = v.level;
    row.lhs = v.lhs;
    row.rhs = v.rhs;
    row.ratio = v.ratio;
    row.stable = stable;
    row.finite = std::isfinite(v.ratio);
    if (!row.finite) res.exit_code = 2;
    res.rows.push_back(std::move(row));
    blk.points.push_back({static_cast<double>(v.level), v.lhs});

    nlohmann::ordered_json jl;
    jl["level"] = v.level;
    jl["value"] = v.lhs;
    if (cfg.command == Command::Integrate) jl["residual"] = v.extra;
    if (cfg.command == Command::Maximal) {
      jl["sup_maximal"] = v.lhs;
      jl["sup_function"] = v.rhs;
      jl["ratio"] = v.ratio;
    }
    jlevels.push_back(std::move(jl));
    res.log.push_back("  " + std::string(command_name(cfg.command)) + " " + dom_name + " L" +
                      std::to_string(v.level) + ": " + detail::short_num(v.lhs));
  }
  res.blocks.push_back(std::move(blk));

  nlohmann::ordered_json jval;
  jval["domain"] = dom_name;
  jval["delta"] = delta;
  if (cfg.command != Command::Content) jval["family"] = chk.functions.at(0).name();
  jval["levels"] = std::move(jlevels);
  jval["stable"] = stable;
  res.summary["values"] = std::move(jval);
  res.summary["exit_code"] = res.exit_code;
  return res;
}

inline RunResult run_axioms_command(const ExperimentConfig& cfg) {
  RunResult res;
  const int level = cfg.level_set ? cfg.level : 5;
  const GridGeometry g(cfg.dim, level);
  if (cfg.sets < 1) throw ConfigError("config field 'sets': need at least one random set");

  res.log.push_back("axioms: delta=" + detail::short_num(cfg.delta) + " level=" +
                    std::to_string(level) + " sets=" + std::to_string(cfg.sets));
  res.summary["command"] = command_name(cfg.command);
  res.summary["seed"] = cfg.seed;
  res.summary["level"] = level;
  res.summary["delta"] = cfg.delta;
  res.summary["sets"] = cfg.sets;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::uint64_t> cell_dist(0, g.cell_count() - 1);
  const std::uint64_t max_cells = std::min<std::uint64_t>(64, g.cell_count());
  std::uniform_int_distribution<std::uint64_t> size_dist(1, max_cells);
  std::uniform_real_distribution<double> value_dist(0.125, 1.0);

  auto random_set = [&] {
    GridSet e(g);
    std::uint64_t target = size_dist(rng);
    for (std::uint64_t i = 0; i < target; ++i) e.insert(cell_dist(rng));
    return e;
  };
  auto random_function = [&](const GridSet& e) {
    std::vector<double> v(g.cell_count(), 0.0);
    for (std::uint64_t idx : e.indices()) v[idx] = value_dist(rng);
    return GridFunction(g, e, std::move(v));
  };

  // Batches keep the pairwise union/intersection work inside each axiom call
  // bounded while still covering the requested number of sets.
  const int batch_size = 6;
  int remaining = cfg.sets;
  int content_checks = 0, integral_checks = 0;
  bool content_pass = true, integral_pass = true;
  double worst = 0.0;
  const double hoelder_p = cfg.p > 1.0 ? cfg.p : 2.0;
  while (remaining > 0) {
    int take = std::min(batch_size, remaining);
    remaining -= take;
    std::vector<GridSet> batch;
    batch.reserve(take);
    for (int i = 0; i < take; ++i) batch.push_back(random_set());
    ContentAxiomReport crep = check_content_axioms(batch, cfg.delta);
    content_pass = content_pass && crep.pass();
    content_checks += crep.checks;
    worst = std::max(worst, crep.worst_violation);

    GridFunction f = random_function(batch.front());
    GridFunction h = random_function(batch.back());
    ChoquetAxiomReport irep = check_choquet_axioms(f, h, cfg.delta, hoelder_p);
    integral_pass = integral_pass && irep.pass();
    integral_checks += irep.checks;
  }
  if (!content_pass || !integral_pass) res.exit_code = 2;

  auto suite_row = [&](const char* suite, bool pass, int checks) {
    CheckRow row;
    row.theorem = "axioms";
    row.domain = "random-sets";
    row.family = suite;
    row.delta = cfg.delta;
    row.level = level;
    row.lhs = pass ? 0.0 : 1.0;
    row.rhs = checks;
    row.ratio = pass ? 0.0 : 1.0;
    row.finite = pass;
    res.rows.push_back(std::move(row));
  };
  suite_row("content-suite", content_pass, content_checks);
  suite_row("integral-suite", integral_pass, integral_checks);

  nlohmann::ordered_json jax;
  jax["content_suite"] = {{"pass", content_pass},
                          {"checks", content_checks},
                          {"worst_violation", worst}};
  jax["integral_suite"] = {{"pass", integral_pass}, {"checks", integral_checks}};
  res.summary["axioms"] = std::move(jax);
  res.summary["exit_code"] = res.exit_code;
  res.log.push_back(std::string("  content suite: ") + (content_pass ? "pass" : "FAIL") +
                    " (worst violation " + detail::short_num(worst) + ")");
  res.log.push_back(std::string("  integral suite: ") + (integral_pass ? "pass" : "FAIL"));
  return res;
}

inline RunResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.command) {
    case Command::Check:
      return run_check_command(cfg);
    case Command::Sweep:
      return run_sweep_command(cfg);
    case Command::Content:
    case Command::Integrate:
    case Command::Maximal:
      return run_value_command(cfg);
    case Command::Axioms:
      return run_axioms_command(cfg);
  }
  throw std::logic_error("unknown command");
}

inline void write_outputs(const RunResult& res, const std::string& prefix) {
  auto write = [&](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    out << text;
  };
  write(prefix + ".csv", csv_text(res.rows));
  write(prefix + ".json", res.summary.dump(2) + "\n");
  write(prefix + ".dat", dat_text(res.blocks));
}

inline int run_and_write(const ExperimentConfig& cfg) {
  RunResult res = run_experiment(cfg);
  write_outputs(res, cfg.out);
  if (!cfg.quiet) {
    for (const std::string& line : res.log) std::cout << line << '\n';
    std::cout << "wrote " << cfg.out << ".csv " << cfg.out << ".json " << cfg.out << ".dat\n";
  }
  return res.exit_code;
}

}  // namespace choquet
