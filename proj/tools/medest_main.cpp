// medest: planners, median-based estimators, Monte-Carlo experiment drivers
// and the robust pairwise-learning demos behind one reproducible CLI.

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "medest/bounds.hpp"
#include "medest/config.hpp"
#include "medest/distributions.hpp"
#include "medest/errors.hpp"
#include "medest/experiments.hpp"
#include "medest/kernels.hpp"
#include "medest/learning.hpp"
#include "medest/numeric.hpp"
#include "medest/report.hpp"

namespace {

using namespace medest;

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const std::uint64_t seed = fresh_seed();
  std::printf("seed=%" PRIu64 " (generated)\n", seed);
  return seed;
}

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> row;
  std::string token;
  std::stringstream ss(line);
  while (std::getline(ss, token, ',')) {
    std::stringstream inner(token);
    std::string piece;
    while (inner >> piece) row.push_back(parse_double(piece, "input value"));
  }
  return row;
}

// One observation per line; columns split on commas and/or whitespace.
Sample read_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file " + path);
  std::vector<double> flat;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t\r")] == '#') continue;
    const std::vector<double> row = parse_row(line);
    if (row.empty()) continue;
    if (dim == 0) {
      dim = row.size();
    } else if (row.size() != dim) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected " + std::to_string(dim) +
                                  " columns, got " + std::to_string(row.size()));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  if (dim == 0) throw std::invalid_argument(path + ": no observations");
  return Sample(std::move(flat), dim);
}

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("none");
}

struct EstimatorChoice {
  EstimatorKind kind;
  bool pairwise;
};

EstimatorChoice choice_by_name(const std::string& name) {
  if (name == "mom") return {EstimatorKind::MoM, false};
  if (name == "morm") return {EstimatorKind::MoRM, false};
  if (name == "mou") return {EstimatorKind::MoU, true};
  if (name == "moru") return {EstimatorKind::MoRU, true};
  if (name == "mom-split-pairs") return {EstimatorKind::MoMSplitPairs, true};
  if (name == "moiu") return {EstimatorKind::MoIU, true};
  throw std::invalid_argument(
      "unknown estimator '" + name +
      "' (expected mom, morm, mou, moru, mom-split-pairs, moiu)");
}

void require_tau(const std::string& name, const std::optional<double>& tau) {
  if (!tau) throw std::invalid_argument(name + " needs --tau in (0, 1/2)");
}

struct PlanInputs {
  double sigma = 0.0;      // mean estimators
  double sigma1_sq = 0.0;  // pairwise estimators
  double sigma2_sq = 0.0;
  double sigma_h = 0.0;    // sd of kernel values (split pairs)
};

EstimatorPlan make_plan(const std::string& estimator, std::size_t n,
                        double delta, const std::optional<double>& tau,
                        const std::string& scheme, const PlanInputs& in) {
  const EstimatorChoice choice = choice_by_name(estimator);
  const BlockScheme blocks =
      scheme == "mc" ? BlockScheme::WithReplacement : BlockScheme::SWoR;
  const PairScheme pairs = scheme == "mc" ? PairScheme::WithReplacement
                                          : PairScheme::WithoutReplacement;
  if (scheme != "mc" && scheme != "swor") {
    throw std::invalid_argument("scheme must be swor or mc");
  }
  switch (choice.kind) {
    case EstimatorKind::MoM:
      return plan_mom(n, delta, in.sigma);
    case EstimatorKind::MoRM:
      require_tau("morm", tau);
      return plan_morm(n, delta, *tau, in.sigma, blocks);
    case EstimatorKind::MoU:
      return plan_mou(n, delta, in.sigma1_sq, in.sigma2_sq);
    case EstimatorKind::MoRU:
      require_tau("moru", tau);
      return plan_moru(n, delta, *tau, in.sigma1_sq, in.sigma2_sq);
    case EstimatorKind::MoMSplitPairs:
      return plan_mom_split_pairs(n, delta, in.sigma_h);
    case EstimatorKind::MoIU:
      require_tau("moiu", tau);
      return plan_moiu(n, delta, *tau, pairs);
    default:
      throw std::invalid_argument("estimator not available here");
  }
}

void print_plan_line(const char* verb, const std::string& estimator,
                     const std::string& kernel, const EstimatorPlan& plan,
                     const char* sigma_source, std::uint64_t seed,
                     std::optional<double> value) {
  std::string line = std::string("RESULT verb=") + verb;
  line += " estimator=" + estimator;
  line += " kernel=" + kernel;
  line += " n=" + std::to_string(plan.n);
  line += " delta=" + format_double(plan.delta);
  line += " tau=" + opt_str(plan.tau);
  line += " K=" + std::to_string(plan.K);
  line += " B=" + std::to_string(plan.B);
  if (value) line += " value=" + format_double(*value);
  line += " radius=" + format_double(plan.radius);
  line += std::string(" sigma_source=") + sigma_source;
  if (plan.sigma) line += " sigma=" + format_double(*plan.sigma);
  if (plan.sigma1_sq) line += " sigma1_sq=" + format_double(*plan.sigma1_sq);
  if (plan.sigma2_sq) line += " sigma2_sq=" + format_double(*plan.sigma2_sq);
  line += " seed=" + std::to_string(seed);
  std::printf("%s\n", line.c_str());
}

int run_estimate(const std::string& estimator, const std::string& input,
                 const std::string& kernel_name, double delta,
                 std::optional<double> tau, const std::string& scheme,
                 std::optional<std::uint64_t> seed_flag) {
  if (kernel_name != "variance") {
    throw std::invalid_argument("only the variance kernel is wired to the CLI");
  }
  const std::uint64_t seed = resolve_seed(seed_flag);
  const Sample sample = read_sample(input);
  const EstimatorChoice choice = choice_by_name(estimator);
  const Kernel h = variance_kernel();

  PlanInputs in;
  if (!choice.pairwise) {
    if (!sample.is_scalar()) {
      throw std::invalid_argument("mean estimators need scalar input");
    }
    const double mean = mean_of(sample.flat());
    in.sigma = std::sqrt(variance_about(sample.flat(), mean));
  } else if (choice.kind != EstimatorKind::MoIU) {
    const HoeffdingComponents c = estimate_components(sample, h);
    in.sigma1_sq = c.sigma1_sq;
    in.sigma2_sq = c.sigma2_sq;
    in.sigma_h = std::sqrt(c.sigma_sq);
  }

  const EstimatorPlan plan =
      make_plan(estimator, sample.size(), delta, tau, scheme, in);
  const double value = estimate_with_plan(plan, sample, h, RngSeed::root(seed));
  print_plan_line("estimate", estimator, kernel_name, plan, "plugin", seed,
                  value);
  std::printf("%s over %s: n=%zu, K=%zu, B=%zu (delta=%s)\n", estimator.c_str(),
              input.c_str(), plan.n, plan.K, plan.B,
              format_double(plan.delta).c_str());
  std::printf("estimate: %.10g\n", value);
  if (std::isfinite(plan.radius)) {
    std::printf("certified radius (plug-in scale): %.10g\n", plan.radius);
  } else {
    std::printf("no concentration bound for this estimator\n");
  }
  return 0;
}

int run_plan(const std::string& estimator, std::size_t n, double delta,
             std::optional<double> tau, const std::string& scheme,
             const std::string& law_name, std::optional<double> sigma,
             std::optional<double> sigma1_sq, std::optional<double> sigma2_sq) {
  PlanInputs in;
  const LawSpec law = LawSpec::by_name(law_name);
  in.sigma = sigma ? *sigma : std::sqrt(law.true_variance);
  in.sigma1_sq = sigma1_sq ? *sigma1_sq : law.kernel_sigma1_sq();
  in.sigma2_sq = sigma2_sq ? *sigma2_sq : law.kernel_sigma2_sq();
  in.sigma_h = std::sqrt(2.0 * in.sigma1_sq + in.sigma2_sq);
  if (!std::isfinite(in.sigma1_sq)) in.sigma1_sq = 0.0;
  if (!std::isfinite(in.sigma2_sq)) in.sigma2_sq = 0.0;
  if (!std::isfinite(in.sigma_h)) in.sigma_h = 0.0;
  const bool analytic = !(sigma || sigma1_sq || sigma2_sq);
  const EstimatorPlan plan = make_plan(estimator, n, delta, tau, scheme, in);
  print_plan_line("plan", estimator, "variance", plan,
                  analytic ? law.name.c_str() : "explicit", 0, std::nullopt);
  std::printf("%s at n=%zu, delta=%s: K=%zu, B=%zu, radius=%s\n",
              estimator.c_str(), n, format_double(delta).c_str(), plan.K,
              plan.B, format_double(plan.radius).c_str());
  return 0;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

void print_report_summary(const ExperimentReport& report) {
  std::printf("%-12s %-18s %-12s %-20s %-24s %s\n", "law", "estimator",
              "delta", "metric", "value", "stderr");
  for (const ReportRow& row : report.rows) {
    std::printf("%-12s %-18s %-12s %-20s %-24s %s\n", row.law.c_str(),
                row.estimator.c_str(), format_double(row.delta).c_str(),
                row.metric_name.c_str(), format_double(row.value).c_str(),
                row.stderr_ ? format_double(*row.stderr_).c_str() : "");
  }
}

int run_experiment_verb(ExperimentKind kind, const std::string& config_path,
                        const std::string& output, const std::string& format,
                        std::optional<std::uint64_t> seed_flag,
                        std::optional<unsigned> threads_flag) {
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("format must be csv or json");
  }
  const ConfigFile file = load_config(config_path);
  ExperimentConfig config = experiment_config_from_file(file, kind);
  const bool config_has_seed =
      file.find("experiment") != nullptr &&
      file.find("experiment")->find("seed") != nullptr;
  if (seed_flag) {
    config.seed = *seed_flag;
  } else if (!config_has_seed) {
    config.seed = fresh_seed();
    std::printf("seed=%" PRIu64 " (generated)\n", config.seed);
  }
  if (threads_flag) config.threads = *threads_flag == 0 ? 1 : *threads_flag;

  const ExperimentReport report = run_experiment(config);
  write_report(report, output,
               format == "csv" ? ReportFormat::Csv : ReportFormat::Json);
  write_text(output + ".resolved.cfg", report.resolved_config);
  print_report_summary(report);
  std::printf("report written to %s (config hash %s)\n", output.c_str(),
              report.config_hash.c_str());
  return 0;
}

PairLabelDataset read_pair_dataset(const std::string& points_path,
                                   const std::string& pairs_path) {
  const Sample points = read_sample(points_path);
  PairLabelDataset data;
  data.points.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Obs obs = points.obs(i);
    Eigen::VectorXd p(obs.size());
    for (std::size_t d = 0; d < obs.size(); ++d) p[d] = obs[d];
    data.points.push_back(std::move(p));
  }
  std::ifstream in(pairs_path);
  if (!in) throw std::invalid_argument("cannot open pair file " + pairs_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t\r")] == '#') continue;
    const std::vector<double> row = parse_row(line);
    if (row.size() != 3) {
      throw std::invalid_argument(pairs_path + ":" + std::to_string(line_no) +
                                  ": expected 'i, j, label'");
    }
    const auto i = static_cast<std::size_t>(row[0]);
    const auto j = static_cast<std::size_t>(row[1]);
    if (i >= data.size() || j >= data.size() || i == j) {
      throw std::invalid_argument(pairs_path + ":" + std::to_string(line_no) +
                                  ": bad pair index");
    }
    if (row[2] != 0.0 && row[2] != 1.0) {
      throw std::invalid_argument(pairs_path + ":" + std::to_string(line_no) +
                                  ": label must be 0 or 1");
    }
    data.explicit_labels[std::minmax(i, j)] = row[2] == 1.0;
  }
  if (data.explicit_labels.empty()) {
    throw std::invalid_argument(pairs_path + ": no pair labels");
  }
  return data;
}

std::size_t count_spikes(const std::vector<GdStep>& trace, std::size_t window,
                         double factor) {
  std::size_t spikes = 0;
  for (std::size_t t = window; t < trace.size(); ++t) {
    std::vector<double> trailing(window);
    for (std::size_t w = 0; w < window; ++w) {
      trailing[w] = trace[t - window + w].full_risk;
    }
    if (trace[t].full_risk > factor * median(std::move(trailing))) ++spikes;
  }
  return spikes;
}

int run_metric_learn(const std::string& points_path,
                     const std::string& pairs_path, std::size_t demo_n,
                     std::size_t demo_dim, double demo_separation,
                     double demo_noise, double contamination,
                     double outlier_value, std::size_t K, std::size_t B,
                     std::size_t steps, double margin, double step_size,
                     const std::string& trace_path,
                     std::optional<std::uint64_t> seed_flag) {
  const std::uint64_t seed = resolve_seed(seed_flag);
  const RngSeed root = RngSeed::root(seed);
  PairLabelDataset data;
  const bool synthetic = points_path.empty();
  if (synthetic != pairs_path.empty()) {
    throw std::invalid_argument("--points and --pairs go together");
  }
  if (synthetic) {
    data = make_two_cluster_dataset(demo_n, demo_dim, demo_separation,
                                    demo_noise, root.child(0));
    if (contamination > 0.0) {
      contaminate_points(
          data, contamination,
          Eigen::VectorXd::Constant(static_cast<Eigen::Index>(demo_dim),
                                    outlier_value),
          root.child(1));
    }
  } else {
    if (contamination > 0.0) {
      throw std::invalid_argument("--contamination applies to the synthetic demo only");
    }
    data = read_pair_dataset(points_path, pairs_path);
  }

  MahalanobisModel model = MahalanobisModel::identity(data.dim(), margin, step_size);
  const double initial_risk = full_pairwise_risk(data, model);
  const GdResult result =
      moru_minibatch_gd(data, std::move(model), K, B, steps, root.child(2));
  const double final_risk = result.trace.back().full_risk;
  const std::size_t spikes = count_spikes(result.trace, 20, 3.0);

  std::string line = "RESULT verb=metric-learn";
  line += " n=" + std::to_string(data.size());
  line += " dim=" + std::to_string(data.dim());
  line += " K=" + std::to_string(K);
  line += " B=" + std::to_string(B);
  line += " steps=" + std::to_string(steps);
  line += " margin=" + format_double(margin);
  line += " step_size=" + format_double(step_size);
  line += " contamination=" + format_double(synthetic ? contamination : 0.0);
  line += " initial_risk=" + format_double(initial_risk);
  line += " final_risk=" + format_double(final_risk);
  line += " spikes=" + std::to_string(spikes);
  line += " seed=" + std::to_string(seed);
  std::printf("%s\n", line.c_str());
  std::printf("pairwise risk: %.10g -> %.10g over %zu steps "
              "(%zu spike(s) above 3x the trailing-20 median)\n",
              initial_risk, final_risk, steps, spikes);

  if (!trace_path.empty()) {
    std::string csv = "step,block_risk,full_risk\n";
    for (const GdStep& s : result.trace) {
      csv += std::to_string(s.step) + "," + format_double(s.block_risk) + "," +
             format_double(s.full_risk) + "\n";
    }
    write_text(trace_path, csv);
    ConfigFile resolved;
    ConfigSection section{"metric-learn", {}};
    section.entries.emplace_back("points", synthetic ? "<synthetic>" : points_path);
    section.entries.emplace_back("pairs", synthetic ? "<synthetic>" : pairs_path);
    section.entries.emplace_back("demo_n", std::to_string(demo_n));
    section.entries.emplace_back("demo_dim", std::to_string(demo_dim));
    section.entries.emplace_back("demo_separation", format_double(demo_separation));
    section.entries.emplace_back("demo_noise", format_double(demo_noise));
    section.entries.emplace_back("contamination", format_double(contamination));
    section.entries.emplace_back("outlier_value", format_double(outlier_value));
    section.entries.emplace_back("K", std::to_string(K));
    section.entries.emplace_back("B", std::to_string(B));
    section.entries.emplace_back("steps", std::to_string(steps));
    section.entries.emplace_back("margin", format_double(margin));
    section.entries.emplace_back("step_size", format_double(step_size));
    section.entries.emplace_back("seed", std::to_string(seed));
    resolved.sections.push_back(std::move(section));
    write_text(trace_path + ".resolved.cfg", serialize_config(resolved));
    std::printf("trace written to %s\n", trace_path.c_str());
  }
  return 0;
}

int run_tournament_verb(const std::string& law_name, std::size_t n,
                        const std::string& candidates_raw, double beta,
                        double r, std::size_t K, std::size_t K_prime,
                        std::optional<std::uint64_t> seed_flag) {
  const std::uint64_t seed = resolve_seed(seed_flag);
  const LawSpec law = LawSpec::by_name(law_name);
  std::vector<double> constants;
  if (candidates_raw.empty()) {
    constants = {law.true_variance, law.true_variance + 20.0,
                 law.true_variance + 60.0};
  } else {
    for (const std::string& item : split_list(candidates_raw)) {
      constants.push_back(parse_double(item, "candidate"));
    }
  }
  if (constants.empty()) throw std::invalid_argument("no candidates");

  // Constant predictions c of the pairwise target; candidate loss is the
  // squared miss of the variance kernel, l_c(x, y) = (h(x, y) - c)^2.
  const Kernel h = variance_kernel();
  std::vector<Kernel> losses;
  losses.reserve(constants.size());
  for (double c : constants) {
    losses.push_back(Kernel{"const_" + format_double(c), [c, h](Obs a, Obs b) {
                              const double miss = h(a, b) - c;
                              return miss * miss;
                            }});
  }

  const RngSeed root = RngSeed::root(seed);
  Rng g = root.child(0).stream();
  const Sample sample = draw(law, n, g);
  const TournamentResult result =
      run_tournament(sample, losses, beta, r, K, K_prime, root.child(1));

  std::string champ_list;
  for (std::size_t i = 0; i < result.champions.size(); ++i) {
    if (i > 0) champ_list += ",";
    champ_list += std::to_string(result.champions[i]);
  }
  std::string line = "RESULT verb=tournament";
  line += " law=" + law.name;
  line += " n=" + std::to_string(n);
  line += " beta=" + format_double(beta);
  line += " r=" + format_double(r);
  line += " K=" + std::to_string(K);
  line += " Kprime=" + std::to_string(K_prime);
  line += " candidates=" + std::to_string(constants.size());
  line += " matches=" + std::to_string(result.matches.size());
  line += " champions=" + champ_list;
  line += " seed=" + std::to_string(seed);
  std::printf("%s\n", line.c_str());
  for (const TournamentMatch& m : result.matches) {
    std::printf("match %s vs %s: phi=%.6g winner=%s\n",
                losses[m.first].name.c_str(), losses[m.second].name.c_str(),
                m.phi, losses[m.winner].name.c_str());
  }
  std::printf("champions:");
  for (std::size_t idx : result.champions) {
    std::printf(" %s", losses[idx].name.c_str());
  }
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"median-based robust estimators for means and pairwise expectations"};
  app.require_subcommand(1);

  std::string estimator = "mom";
  std::string input;
  std::string kernel_name = "variance";
  double delta = 0.001;
  std::optional<double> tau;
  std::string scheme = "swor";
  std::optional<std::uint64_t> seed_flag;
  std::size_t plan_n = 0;
  std::string law_name = "normal";
  std::optional<double> sigma, sigma1_sq, sigma2_sq;

  auto add_tau = [&tau](CLI::App* cmd) {
    cmd->add_option_function<std::string>(
           "--tau",
           [&tau](const std::string& raw) {
             tau = medest::parse_fraction(raw, "--tau");
           },
           "block-size exponent in (0, 1/2); accepts a/b")
        ->type_name("FRACTION");
  };

  CLI::App* est = app.add_subcommand("estimate", "estimate from a data file");
  est->add_option("--estimator", estimator,
                  "mom, morm, mou, moru, mom-split-pairs, moiu")
      ->required();
  est->add_option("--input", input, "one observation per line (CSV columns)")
      ->required()
      ->check(CLI::ExistingFile);
  est->add_option("--kernel", kernel_name, "pairwise kernel (variance)");
  est->add_option("--delta", delta, "confidence level in (0, 1)");
  add_tau(est);
  est->add_option("--scheme", scheme, "block/pair sampling: swor or mc");
  est->add_option("--seed", seed_flag, "RNG seed (generated when omitted)");

  CLI::App* plan = app.add_subcommand("plan", "print (K, B, radius) for a setting");
  plan->add_option("--estimator", estimator,
                   "mom, morm, mou, moru, mom-split-pairs, moiu")
      ->required();
  plan->add_option("--n", plan_n, "sample size")->required();
  plan->add_option("--delta", delta, "confidence level in (0, 1)");
  add_tau(plan);
  plan->add_option("--scheme", scheme, "block/pair sampling: swor or mc");
  plan->add_option("--law", law_name,
                   "law supplying scale constants: normal, student3, lognormal, pareto3");
  plan->add_option("--sigma", sigma, "explicit sd (mean estimators)");
  plan->add_option("--sigma1-sq", sigma1_sq, "explicit Hoeffding linear variance");
  plan->add_option("--sigma2-sq", sigma2_sq, "explicit Hoeffding degenerate variance");

  std::string config_path, output_path, format = "csv";
  std::optional<unsigned> threads_flag;
  auto add_experiment_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--output", output_path, "report file to write")->required();
    cmd->add_option("--format", format, "csv or json");
    cmd->add_option("--seed", seed_flag, "overrides the config seed");
    cmd->add_option("--threads", threads_flag, "caps worker threads");
  };
  CLI::App* risk = app.add_subcommand("risk-table", "quadratic-risk table");
  add_experiment_flags(risk);
  CLI::App* quant = app.add_subcommand("quantile-curves",
                                       "deviation quantiles over a delta grid");
  add_experiment_flags(quant);
  CLI::App* cover = app.add_subcommand("coverage",
                                       "certified-radius exceedance frequencies");
  add_experiment_flags(cover);

  std::string points_path, pairs_path, trace_path;
  std::size_t demo_n = 120, demo_dim = 2;
  double demo_separation = 2.0, demo_noise = 0.3, contamination = 0.0;
  double outlier_value = 40.0, margin = 1.0, step_size = 0.05;
  std::size_t gd_K = 11, gd_B = 6, gd_steps = 500;
  CLI::App* learn = app.add_subcommand(
      "metric-learn", "robust mini-batch metric learning demo");
  learn->add_option("--points", points_path, "points CSV (one point per line)")
      ->check(CLI::ExistingFile);
  learn->add_option("--pairs", pairs_path, "pair labels CSV: i, j, label(0/1)")
      ->check(CLI::ExistingFile);
  learn->add_option("--demo-n", demo_n, "synthetic demo: points");
  learn->add_option("--demo-dim", demo_dim, "synthetic demo: dimension");
  learn->add_option("--demo-separation", demo_separation,
                    "synthetic demo: cluster half-distance");
  learn->add_option("--demo-noise", demo_noise, "synthetic demo: noise sd");
  learn->add_option("--contamination", contamination,
                    "synthetic demo: outlier fraction in [0, 1/2)");
  learn->add_option("--outlier-value", outlier_value,
                    "synthetic demo: outlier coordinate value");
  learn->add_option("--K", gd_K, "blocks per step");
  learn->add_option("--B", gd_B, "points per block");
  learn->add_option("--steps", gd_steps, "gradient steps");
  learn->add_option("--margin", margin, "dissimilar-pair margin");
  learn->add_option("--step-size", step_size, "gradient step size");
  learn->add_option("--trace", trace_path, "write step,block_risk,full_risk CSV");
  learn->add_option("--seed", seed_flag, "RNG seed (generated when omitted)");

  std::string candidates_raw;
  double beta = 1.1, radius_r = 10.0;
  std::size_t t_n = 500, t_K = 9, t_Kp = 9;
  CLI::App* tour = app.add_subcommand("tournament",
                                      "pairwise-match selection demo");
  tour->add_option("--law", law_name, "data law");
  tour->add_option("--n", t_n, "sample size");
  tour->add_option("--candidates", candidates_raw,
                   "comma list of constant predictions (default: truth, +20, +60)");
  tour->add_option("--beta", beta, "match gate multiplier (> 1)");
  tour->add_option("--r", radius_r, "match gate radius (> 0)");
  tour->add_option("--K", t_K, "distance-oracle blocks");
  tour->add_option("--Kprime", t_Kp, "match blocks");
  tour->add_option("--seed", seed_flag, "RNG seed (generated when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (est->parsed()) {
      return run_estimate(estimator, input, kernel_name, delta, tau, scheme,
                          seed_flag);
    }
    if (plan->parsed()) {
      return run_plan(estimator, plan_n, delta, tau, scheme, law_name, sigma,
                      sigma1_sq, sigma2_sq);
    }
    if (risk->parsed()) {
      return run_experiment_verb(medest::ExperimentKind::RiskTable, config_path,
                                 output_path, format, seed_flag, threads_flag);
    }
    if (quant->parsed()) {
      return run_experiment_verb(medest::ExperimentKind::QuantileCurves,
                                 config_path, output_path, format, seed_flag,
                                 threads_flag);
    }
    if (cover->parsed()) {
      return run_experiment_verb(medest::ExperimentKind::Coverage, config_path,
                                 output_path, format, seed_flag, threads_flag);
    }
    if (learn->parsed()) {
      return run_metric_learn(points_path, pairs_path, demo_n, demo_dim,
                              demo_separation, demo_noise, contamination,
                              outlier_value, gd_K, gd_B, gd_steps, margin,
                              step_size, trace_path, seed_flag);
    }
    if (tour->parsed()) {
      return run_tournament_verb(law_name, t_n, candidates_raw, beta, radius_r,
                                 t_K, t_Kp, seed_flag);
    }
  } catch (const medest::infeasible_plan& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
