#include "medest/experiments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "medest/errors.hpp"
#include "medest/numeric.hpp"
#include "medest/parallel.hpp"

namespace medest {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string scheme_name(BlockScheme s) {
  switch (s) {
    case BlockScheme::Partition: return "partition";
    case BlockScheme::SWoR: return "swor";
    case BlockScheme::WithReplacement: return "mc";
  }
  return "unknown";
}

std::string pair_scheme_name(PairScheme s) {
  return s == PairScheme::WithReplacement ? "mc" : "swor";
}

bool kind_is_pairwise(EstimatorKind kind) {
  return kind != EstimatorKind::MoM && kind != EstimatorKind::MoRM;
}

EstimatorKind kind_by_name(const std::string& raw) {
  if (raw == "mom") return EstimatorKind::MoM;
  if (raw == "morm") return EstimatorKind::MoRM;
  if (raw == "mou") return EstimatorKind::MoU;
  if (raw == "moru") return EstimatorKind::MoRU;
  if (raw == "mom-split-pairs") return EstimatorKind::MoMSplitPairs;
  if (raw == "moiu") return EstimatorKind::MoIU;
  throw std::invalid_argument("unknown estimator kind '" + raw +
                              "' (expected mom, morm, mou, moru, mom-split-pairs, moiu)");
}

void require_keys(const ConfigSection& section,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : section.entries) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::invalid_argument("config: unknown key '" + key + "' in [" +
                                  section.name + "]");
    }
  }
}

// The estimator target under the variance kernel is the law's variance.
double target_of(TargetKind target, const LawSpec& law) {
  return target == TargetKind::Mean ? law.true_mean : law.true_variance;
}

struct CellPlan {
  bool feasible = false;
  std::string reason;
  EstimatorPlan plan;
};

CellPlan plan_cell(const EstimatorTemplate& tmpl, TargetKind target,
                   std::size_t n, double delta, const LawSpec& law,
                   bool need_radius) {
  CellPlan out;
  try {
    const bool pairwise = kind_is_pairwise(tmpl.kind);
    if (pairwise != (target == TargetKind::Pairwise)) {
      throw std::invalid_argument("estimator '" + tmpl.name +
                                  "' does not match the experiment target");
    }
    const double s1 = law.kernel_sigma1_sq();
    const double s2 = law.kernel_sigma2_sq();
    if (need_radius && pairwise && tmpl.kind != EstimatorKind::MoIU &&
        !(std::isfinite(s1) && std::isfinite(s2))) {
      throw infeasible_plan("variance-kernel Hoeffding components are infinite under " +
                            law.name);
    }
    switch (tmpl.kind) {
      case EstimatorKind::MoM:
        out.plan = plan_mom(n, delta, std::sqrt(law.true_variance));
        break;
      case EstimatorKind::MoRM:
        if (!tmpl.tau) throw std::invalid_argument("morm needs tau");
        out.plan = plan_morm(n, delta, *tmpl.tau, std::sqrt(law.true_variance),
                             tmpl.scheme);
        break;
      case EstimatorKind::MoU:
        out.plan = plan_mou(n, delta, std::isfinite(s1) ? s1 : 0.0,
                            std::isfinite(s2) ? s2 : 0.0);
        if (!std::isfinite(s1) || !std::isfinite(s2)) out.plan.radius = kNan;
        break;
      case EstimatorKind::MoRU:
        if (!tmpl.tau) throw std::invalid_argument("moru needs tau");
        out.plan = plan_moru(n, delta, *tmpl.tau, std::isfinite(s1) ? s1 : 0.0,
                             std::isfinite(s2) ? s2 : 0.0);
        if (!std::isfinite(s1) || !std::isfinite(s2)) out.plan.radius = kNan;
        break;
      case EstimatorKind::MoMSplitPairs: {
        const double sig_h = law.kernel_sigma_sq();
        out.plan = plan_mom_split_pairs(
            n, delta, std::isfinite(sig_h) ? std::sqrt(sig_h) : 0.0);
        if (!std::isfinite(sig_h)) out.plan.radius = kNan;
        break;
      }
      case EstimatorKind::MoIU:
        if (!tmpl.tau) throw std::invalid_argument("moiu needs tau");
        out.plan = plan_moiu(n, delta, *tmpl.tau, tmpl.pair_scheme);
        if (need_radius) {
          throw infeasible_plan("moiu carries no concentration bound");
        }
        break;
      default:
        throw std::invalid_argument("estimator kind not supported in experiments");
    }
    if (tmpl.K_override) {
      out.plan.K = *tmpl.K_override;
      out.plan.radius = kNan;
    }
    if (tmpl.B_override) {
      out.plan.B = *tmpl.B_override;
      out.plan.radius = kNan;
    }
    if (out.plan.estimator == EstimatorKind::MoM ||
        out.plan.estimator == EstimatorKind::MoMSplitPairs ||
        out.plan.estimator == EstimatorKind::MoU) {
      // Partition block size follows K.
      const std::size_t base =
          out.plan.estimator == EstimatorKind::MoMSplitPairs ? n / 2 : n;
      if (out.plan.K == 0 || out.plan.K > base) {
        throw infeasible_plan("K override leaves no usable blocks");
      }
      out.plan.B = base / out.plan.K;
    }
    if (out.plan.K < 1) throw infeasible_plan("need at least one block");
    const std::size_t B = out.plan.B;
    switch (out.plan.estimator) {
      case EstimatorKind::MoRM:
        if (B < 1 || B > n) throw infeasible_plan("block size outside [1, n]");
        break;
      case EstimatorKind::MoU:
        if (B < 2) throw infeasible_plan("partition blocks need >= 2 points");
        break;
      case EstimatorKind::MoRU:
        if (B < 2 || B > n) throw infeasible_plan("block size outside [2, n]");
        break;
      case EstimatorKind::MoIU:
        if (B < 1 || (tmpl.pair_scheme == PairScheme::WithoutReplacement &&
                      B > n * (n - 1) / 2)) {
          throw infeasible_plan("pair subsample size outside [1, n(n-1)/2]");
        }
        break;
      default:
        if (B < 1) throw infeasible_plan("blocks would be empty");
        break;
    }
    out.feasible = true;
  } catch (const infeasible_plan& e) {
    out.reason = e.what();
  } catch (const std::invalid_argument& e) {
    throw;  // configuration errors are fatal, not per-cell
  }
  return out;
}

ReportRow base_row(const ExperimentConfig& config, const LawSpec& law,
                   const EstimatorTemplate& tmpl, double delta,
                   const CellPlan& cell) {
  ReportRow row;
  row.law = law.name;
  row.estimator = tmpl.name;
  row.delta = delta;
  row.tau = tmpl.tau;
  row.K = cell.feasible ? cell.plan.K : 0;
  row.B = cell.feasible ? cell.plan.B : 0;
  row.seed = config.seed;
  return row;
}

struct EnsembleStats {
  double mean = 0.0;
  double variance = 0.0;
  double quadratic_risk = 0.0;
  double risk_sd = 0.0;
  double bias_sq = 0.0;
};

EnsembleStats ensemble_stats(const std::vector<double>& estimates, double target) {
  EnsembleStats s;
  s.mean = mean_of(estimates);
  s.variance = variance_about(estimates, s.mean);
  const double bias = s.mean - target;
  s.bias_sq = bias * bias;
  std::vector<double> sq(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const double err = estimates[i] - target;
    sq[i] = err * err;
  }
  s.quadratic_risk = mean_of(sq);
  s.risk_sd = std::sqrt(variance_about(sq, s.quadratic_risk));
  return s;
}

std::vector<double> run_cell(const ExperimentConfig& config, const LawSpec& law,
                             const EstimatorPlan& plan, const Kernel& h,
                             RngSeed cell_seed) {
  std::vector<double> estimates(config.replications);
  parallel_for(config.replications, config.threads, [&](std::size_t r) {
    const RngSeed rep = cell_seed.child(r);
    Rng g = rep.child(0).stream();
    const Sample sample = draw(law, config.n, g);
    estimates[r] = estimate_with_plan(plan, sample, h, rep.child(1));
  });
  return estimates;
}

void validate(const ExperimentConfig& config) {
  if (config.replications < 1) {
    throw std::invalid_argument("config: replications must be >= 1");
  }
  if (config.n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (config.laws.empty()) throw std::invalid_argument("config: no laws");
  if (config.estimators.empty()) throw std::invalid_argument("config: no estimators");
  if (!(config.delta > 0.0 && config.delta < 1.0)) {
    throw std::invalid_argument("config: delta must lie in (0, 1)");
  }
  if (config.kernel_name != "variance") {
    throw std::invalid_argument("config: only the variance kernel is supported");
  }
  if (config.kind == ExperimentKind::QuantileCurves) {
    if (config.delta_grid.size() < 1) {
      throw std::invalid_argument("config: quantile curves need a delta_grid");
    }
    for (std::size_t i = 0; i < config.delta_grid.size(); ++i) {
      const double d = config.delta_grid[i];
      if (!(d > 0.0 && d < 1.0)) {
        throw std::invalid_argument("config: delta_grid values must lie in (0, 1)");
      }
      if (i > 0 && !(d < config.delta_grid[i - 1])) {
        throw std::invalid_argument("config: delta_grid must be strictly decreasing");
      }
    }
  }
  for (const auto& tmpl : config.estimators) {
    if (tmpl.name.find_first_of(",\"\n") != std::string::npos) {
      throw std::invalid_argument("config: estimator name '" + tmpl.name +
                                  "' contains characters unsafe for CSV");
    }
  }
}

ExperimentReport finish_report(const ExperimentConfig& config,
                               std::vector<ReportRow> rows) {
  ExperimentReport report;
  report.rows = std::move(rows);
  report.seed = config.seed;
  report.resolved_config = resolved_experiment_config(config);
  report.config_hash = hash_hex(fnv1a64(report.resolved_config));
  return report;
}

}  // namespace

std::vector<double> geometric_grid(double hi, double lo, std::size_t points) {
  if (!(lo > 0.0 && hi < 1.0 && lo < hi)) {
    throw std::invalid_argument("geometric_grid: require 0 < lo < hi < 1");
  }
  if (points < 2) throw std::invalid_argument("geometric_grid: require points >= 2");
  std::vector<double> grid(points);
  const double ratio = std::log(lo / hi) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = hi * std::exp(ratio * static_cast<double>(i));
  }
  grid.front() = hi;
  grid.back() = lo;
  return grid;
}

ExperimentConfig experiment_config_from_file(const ConfigFile& file,
                                             ExperimentKind expected_kind) {
  const ConfigSection* exp = file.find("experiment");
  if (exp == nullptr) {
    throw std::invalid_argument("config: missing [experiment] section");
  }
  require_keys(*exp, {"kind", "target", "kernel", "n", "replications", "delta",
                      "delta_grid", "seed", "threads", "laws"});

  ExperimentConfig config;
  config.kind = expected_kind;
  if (const std::string* raw = exp->find("kind")) {
    ExperimentKind stated;
    if (*raw == "risk-table") {
      stated = ExperimentKind::RiskTable;
    } else if (*raw == "quantile-curves") {
      stated = ExperimentKind::QuantileCurves;
    } else if (*raw == "coverage") {
      stated = ExperimentKind::Coverage;
    } else {
      throw std::invalid_argument("config: unknown kind '" + *raw + "'");
    }
    if (stated != expected_kind) {
      throw std::invalid_argument("config: kind '" + *raw +
                                  "' does not match the requested command");
    }
  }
  if (const std::string* raw = exp->find("target")) {
    if (*raw == "mean") {
      config.target = TargetKind::Mean;
    } else if (*raw == "pairwise") {
      config.target = TargetKind::Pairwise;
    } else {
      throw std::invalid_argument("config: target must be mean or pairwise");
    }
  }
  if (const std::string* raw = exp->find("kernel")) config.kernel_name = *raw;
  if (const std::string* raw = exp->find("n")) {
    config.n = static_cast<std::size_t>(parse_u64(*raw, "config n"));
  }
  if (const std::string* raw = exp->find("replications")) {
    config.replications = static_cast<std::size_t>(parse_u64(*raw, "config replications"));
  }
  if (const std::string* raw = exp->find("delta")) {
    config.delta = parse_double(*raw, "config delta");
  }
  if (const std::string* raw = exp->find("seed")) {
    config.seed = parse_u64(*raw, "config seed");
  }
  if (const std::string* raw = exp->find("threads")) {
    config.threads = static_cast<unsigned>(parse_u64(*raw, "config threads"));
    if (config.threads == 0) config.threads = 1;
  }
  if (const std::string* raw = exp->find("delta_grid")) {
    const std::string s = *raw;
    if (s.rfind("geometric(", 0) == 0 && s.back() == ')') {
      const auto args = split_list(s.substr(10, s.size() - 11));
      if (args.size() != 3) {
        throw std::invalid_argument(
            "config: delta_grid geometric form needs (hi, lo, points)");
      }
      config.delta_grid = geometric_grid(
          parse_double(args[0], "delta_grid hi"),
          parse_double(args[1], "delta_grid lo"),
          static_cast<std::size_t>(parse_u64(args[2], "delta_grid points")));
    } else {
      for (const auto& item : split_list(s)) {
        config.delta_grid.push_back(parse_double(item, "delta_grid value"));
      }
    }
  } else if (expected_kind == ExperimentKind::QuantileCurves) {
    config.delta_grid = geometric_grid(0.5, 0.001, 20);
  }
  const std::string* laws_raw = exp->find("laws");
  if (laws_raw == nullptr) throw std::invalid_argument("config: missing laws key");
  for (const auto& name : split_list(*laws_raw)) {
    config.laws.push_back(LawSpec::by_name(name));
  }

  for (const auto& section : file.sections) {
    if (section.name.rfind("estimator ", 0) != 0) {
      if (section.name != "experiment") {
        throw std::invalid_argument("config: unexpected section [" + section.name + "]");
      }
      continue;
    }
    require_keys(section, {"kind", "tau", "scheme", "K", "B", "M"});
    EstimatorTemplate tmpl;
    tmpl.name = section.name.substr(10);
    if (tmpl.name.empty()) {
      throw std::invalid_argument("config: estimator section needs a name");
    }
    const std::string* kind_raw = section.find("kind");
    if (kind_raw == nullptr) {
      throw std::invalid_argument("config: estimator '" + tmpl.name +
                                  "' needs a kind");
    }
    tmpl.kind = kind_by_name(*kind_raw);
    if (const std::string* raw = section.find("tau")) {
      tmpl.tau = parse_fraction(*raw, "estimator tau");
    }
    if (const std::string* raw = section.find("scheme")) {
      if (*raw == "swor") {
        tmpl.scheme = BlockScheme::SWoR;
        tmpl.pair_scheme = PairScheme::WithoutReplacement;
      } else if (*raw == "mc") {
        tmpl.scheme = BlockScheme::WithReplacement;
        tmpl.pair_scheme = PairScheme::WithReplacement;
      } else {
        throw std::invalid_argument("config: scheme must be swor or mc");
      }
    }
    if (const std::string* raw = section.find("K")) {
      tmpl.K_override = static_cast<std::size_t>(parse_u64(*raw, "estimator K"));
    }
    const std::string* b_raw = section.find("B");
    const std::string* m_raw = section.find("M");
    if (b_raw != nullptr && m_raw != nullptr) {
      throw std::invalid_argument("config: give B or M, not both");
    }
    if (b_raw != nullptr) {
      tmpl.B_override = static_cast<std::size_t>(parse_u64(*b_raw, "estimator B"));
    }
    if (m_raw != nullptr) {
      tmpl.B_override = static_cast<std::size_t>(parse_u64(*m_raw, "estimator M"));
    }
    config.estimators.push_back(std::move(tmpl));
  }

  validate(config);
  return config;
}

std::string resolved_experiment_config(const ExperimentConfig& config) {
  ConfigFile file;
  ConfigSection exp{"experiment", {}};
  const char* kind = config.kind == ExperimentKind::RiskTable ? "risk-table"
                     : config.kind == ExperimentKind::QuantileCurves
                         ? "quantile-curves"
                         : "coverage";
  exp.entries.emplace_back("kind", kind);
  exp.entries.emplace_back(
      "target", config.target == TargetKind::Mean ? "mean" : "pairwise");
  exp.entries.emplace_back("kernel", config.kernel_name);
  exp.entries.emplace_back("n", std::to_string(config.n));
  exp.entries.emplace_back("replications", std::to_string(config.replications));
  exp.entries.emplace_back("delta", format_double(config.delta));
  if (config.kind == ExperimentKind::QuantileCurves) {
    std::string grid;
    for (std::size_t i = 0; i < config.delta_grid.size(); ++i) {
      if (i > 0) grid += ", ";
      grid += format_double(config.delta_grid[i]);
    }
    exp.entries.emplace_back("delta_grid", grid);
  }
  exp.entries.emplace_back("seed", std::to_string(config.seed));
  exp.entries.emplace_back("threads", std::to_string(config.threads));
  std::string laws;
  for (std::size_t i = 0; i < config.laws.size(); ++i) {
    if (i > 0) laws += ", ";
    laws += config.laws[i].name;
  }
  exp.entries.emplace_back("laws", laws);
  file.sections.push_back(std::move(exp));

  for (const auto& tmpl : config.estimators) {
    ConfigSection section{"estimator " + tmpl.name, {}};
    section.entries.emplace_back("kind", [&] {
      switch (tmpl.kind) {
        case EstimatorKind::MoM: return "mom";
        case EstimatorKind::MoRM: return "morm";
        case EstimatorKind::MoU: return "mou";
        case EstimatorKind::MoRU: return "moru";
        case EstimatorKind::MoMSplitPairs: return "mom-split-pairs";
        case EstimatorKind::MoIU: return "moiu";
        default: return "unknown";
      }
    }());
    if (tmpl.tau) section.entries.emplace_back("tau", format_double(*tmpl.tau));
    if (tmpl.kind == EstimatorKind::MoRM) {
      section.entries.emplace_back("scheme", scheme_name(tmpl.scheme));
    }
    if (tmpl.kind == EstimatorKind::MoIU) {
      section.entries.emplace_back("scheme", pair_scheme_name(tmpl.pair_scheme));
    }
    if (tmpl.K_override) {
      section.entries.emplace_back("K", std::to_string(*tmpl.K_override));
    }
    if (tmpl.B_override) {
      section.entries.emplace_back(
          tmpl.kind == EstimatorKind::MoIU ? "M" : "B",
          std::to_string(*tmpl.B_override));
    }
    file.sections.push_back(std::move(section));
  }
  return serialize_config(file);
}

ExperimentReport run_quadratic_risk(const ExperimentConfig& config) {
  validate(config);
  const Kernel h = variance_kernel();
  const RngSeed root = RngSeed::root(config.seed);
  std::vector<ReportRow> rows;
  for (std::size_t li = 0; li < config.laws.size(); ++li) {
    const LawSpec& law = config.laws[li];
    for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
      const EstimatorTemplate& tmpl = config.estimators[ei];
      const CellPlan cell =
          plan_cell(tmpl, config.target, config.n, config.delta, law, false);
      ReportRow row = base_row(config, law, tmpl, config.delta, cell);
      if (!cell.feasible) {
        row.metric_name = "infeasible";
        row.value = kNan;
        rows.push_back(row);
        continue;
      }
      const RngSeed cell_seed = root.child(li * config.estimators.size() + ei);
      const std::vector<double> estimates =
          run_cell(config, law, cell.plan, h, cell_seed);
      const EnsembleStats stats =
          ensemble_stats(estimates, target_of(config.target, law));
      row.metric_name = "quadratic_risk";
      row.value = stats.quadratic_risk;
      row.stderr_ = stats.risk_sd;
      rows.push_back(row);
      row.metric_name = "bias_sq";
      row.value = stats.bias_sq;
      row.stderr_.reset();
      rows.push_back(row);
      row.metric_name = "variance";
      row.value = stats.variance;
      rows.push_back(row);
    }
  }
  return finish_report(config, std::move(rows));
}

ExperimentReport run_quantile_curves(const ExperimentConfig& config) {
  validate(config);
  const Kernel h = variance_kernel();
  const RngSeed root = RngSeed::root(config.seed);
  std::vector<ReportRow> rows;
  const std::size_t n_deltas = config.delta_grid.size();
  for (std::size_t li = 0; li < config.laws.size(); ++li) {
    const LawSpec& law = config.laws[li];
    for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
      const EstimatorTemplate& tmpl = config.estimators[ei];
      for (std::size_t di = 0; di < n_deltas; ++di) {
        const double delta = config.delta_grid[di];
        const CellPlan cell =
            plan_cell(tmpl, config.target, config.n, delta, law, false);
        ReportRow row = base_row(config, law, tmpl, delta, cell);
        if (!cell.feasible) {
          row.metric_name = "infeasible";
          row.value = kNan;
          rows.push_back(row);
          continue;
        }
        const RngSeed cell_seed = root.child(
            (li * config.estimators.size() + ei) * n_deltas + di);
        std::vector<double> estimates =
            run_cell(config, law, cell.plan, h, cell_seed);
        const double target = target_of(config.target, law);
        for (auto& e : estimates) e = std::abs(e - target);
        row.metric_name = "deviation_quantile";
        row.value = upper_quantile(std::move(estimates), delta);
        rows.push_back(row);
      }
    }
  }
  return finish_report(config, std::move(rows));
}

ExperimentReport run_coverage(const ExperimentConfig& config) {
  validate(config);
  if (config.replications < 100) {
    throw std::invalid_argument("config: coverage needs replications >= 100");
  }
  const RngSeed root = RngSeed::root(config.seed);
  std::vector<ReportRow> rows;
  for (std::size_t li = 0; li < config.laws.size(); ++li) {
    const LawSpec& law = config.laws[li];
    for (std::size_t ei = 0; ei < config.estimators.size(); ++ei) {
      const EstimatorTemplate& tmpl = config.estimators[ei];
      const CellPlan cell =
          plan_cell(tmpl, config.target, config.n, config.delta, law, true);
      ReportRow row = base_row(config, law, tmpl, config.delta, cell);
      if (!cell.feasible || !std::isfinite(cell.plan.radius)) {
        row.metric_name = "infeasible";
        row.value = kNan;
        rows.push_back(row);
        continue;
      }
      const RngSeed cell_seed = root.child(li * config.estimators.size() + ei);
      const double exceedance =
          coverage_check(cell.plan, law, config.replications, cell_seed,
                         config.threads);
      row.metric_name = "coverage";
      row.value = exceedance;
      row.stderr_ = std::sqrt(exceedance * (1.0 - exceedance) /
                              static_cast<double>(config.replications));
      rows.push_back(row);
      row.metric_name = "radius";
      row.value = cell.plan.radius;
      row.stderr_.reset();
      rows.push_back(row);
    }
  }
  return finish_report(config, std::move(rows));
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  switch (config.kind) {
    case ExperimentKind::RiskTable: return run_quadratic_risk(config);
    case ExperimentKind::QuantileCurves: return run_quantile_curves(config);
    case ExperimentKind::Coverage: return run_coverage(config);
  }
  throw std::invalid_argument("run_experiment: unknown kind");
}

}  // namespace medest
