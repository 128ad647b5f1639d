#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "taufpl/bench.hpp"
#include "taufpl/data.hpp"
#include "taufpl/error.hpp"
#include "taufpl/eval.hpp"
#include "taufpl/grid.hpp"
#include "taufpl/model_io.hpp"
#include "taufpl/parallel.hpp"
#include "taufpl/projection.hpp"
#include "taufpl/solver.hpp"
#include "taufpl/thresholding.hpp"

namespace taufpl::cli {

namespace {

using json = nlohmann::ordered_json;

// Thrown for numerical failures that only count as errors under --strict.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag-level usage errors detected after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_double_list(text)) {
    if (!(v >= 1.0) || v != std::floor(v)) throw UsageError("expected positive integers in '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::size_t effective_threads(std::size_t requested) {
  const std::size_t budget = thread_budget();
  if (requested == 0) return budget;
  const char* env = std::getenv("TAU_FPL_THREADS");
  return env != nullptr && *env != '\0' ? std::min(requested, budget) : requested;
}

const auto kTauCheck = CLI::Validator(
    [](std::string& s) -> std::string {
      try {
        const double v = std::stod(s);
        if (v >= 0.0 && v < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "tau must lie in [0, 1), got " + s;
    },
    "TAU in [0,1)");

struct DataFlags {
  std::string path;
  std::string synthetic;  // "m,n,d,sep"
  int positive_label = 1;
  std::size_t upsample = 1;
  std::uint64_t synth_seed = 0;

  void add(CLI::App* app, bool required = true) {
    auto* g = app->add_option_group("data");
    g->add_option("--data", path, "LIBSVM file");
    g->add_option("--synthetic", synthetic, "Gaussian classes: m,n,d,separation");
    if (required) g->require_option(1);
    app->add_option("--positive-label", positive_label, "Label treated as positive (others negative)");
    app->add_option("--upsample", upsample, "Duplicate every instance this many times")->check(CLI::PositiveNumber);
    app->add_option("--synthetic-seed", synth_seed, "Seed for --synthetic");
  }

  bool given() const { return !path.empty() || !synthetic.empty(); }

  Dataset load(std::size_t min_dim = 0) const {
    Dataset ds;
    if (!synthetic.empty()) {
      const auto v = parse_double_list(synthetic);
      if (v.size() != 4 || v[0] < 1 || v[1] < 1 || v[2] < 1) {
        throw UsageError("--synthetic expects m,n,d,separation with m,n,d >= 1");
      }
      ds = synth_gaussians(static_cast<std::size_t>(v[0]), static_cast<std::size_t>(v[1]),
                           static_cast<std::size_t>(v[2]), v[3], synth_seed);
      if (min_dim > ds.dim()) ds = Dataset{ds.positives.with_cols(min_dim), ds.negatives.with_cols(min_dim)};
    } else {
      ParseOptions opts;
      opts.positive_label = positive_label;
      opts.min_dim = min_dim;
      ds = read_libsvm_file(path, opts);
    }
    return upsample > 1 ? taufpl::upsample(ds, upsample) : ds;
  }
};

void require_both_classes(const Dataset& ds) {
  if (ds.num_positive() == 0 || ds.num_negative() == 0) {
    throw DataError("data needs at least one positive and one negative instance");
  }
}

void check_model_dim(const ModelFile& mf, const Dataset& ds) {
  if (ds.dim() != mf.classifier.model.weights.size()) {
    throw DataError("data dimension " + std::to_string(ds.dim()) + " does not match model dimension " +
                    std::to_string(mf.classifier.model.weights.size()));
  }
}

// ---------------------------------------------------------------- train

struct TrainFlags {
  DataFlags data;
  double tau = 0.05;
  double reg = 1.0;
  double eps = 1e-8;
  std::size_t max_iters = 10000;
  std::size_t oob_rounds = 31;
  std::string final_scorer = "retrain";
  std::string criterion = "np";
  std::string step_rule = "backtracking";
  std::uint64_t seed = 0;
  std::string model_path;
  bool threshold_on_train = false;
  bool strict = false;
  std::size_t threads = 0;
};

int cmd_train(const TrainFlags& f, std::ostream& out, std::ostream& err) {
  Dataset raw = f.data.load();
  require_both_classes(raw);
  auto [ds, scale] = normalize(raw);

  TrainConfig cfg;
  cfg.tau = f.tau;
  cfg.R = f.reg;
  cfg.eps = f.eps;
  cfg.max_iters = f.max_iters;
  cfg.seed = f.seed;
  cfg.step_rule = f.step_rule == "power" ? StepRule::kPowerIteration : StepRule::kBacktracking;

  ThresholdCriterion criterion =
      f.criterion == "fpr" ? ThresholdCriterion::kFprFeasible : ThresholdCriterion::kNpScoreMin;
  if (criterion == ThresholdCriterion::kNpScoreMin && f.tau == 0.0) {
    err << "warning: NP-score is undefined at tau = 0; using the fpr criterion\n";
    criterion = ThresholdCriterion::kFprFeasible;
  }

  Classifier clf;
  if (f.threshold_on_train) {
    err << "warning: --threshold-on-train picks the threshold on training scores; expect FPR above tau\n";
    clf = train_threshold_on_train(ds, cfg, criterion);
  } else {
    OOBConfig oob;
    oob.rounds = f.oob_rounds;
    oob.criterion = criterion;
    oob.final_scorer = f.final_scorer == "average" ? FinalScorer::kAverageWeights : FinalScorer::kRetrainFull;
    oob.seed = f.seed;
    oob.threads = effective_threads(f.threads);
    clf = oob_train(ds, cfg, oob);
  }
  clf.model.scale = scale;

  if (!clf.model.converged) {
    const std::string msg = "solver did not converge within " + std::to_string(f.max_iters) + " iterations";
    if (f.strict) throw NumericalFailure(msg);
    err << "warning: " << msg << "\n";
  }

  save_model(f.model_path, ModelFile{clf, creation_timestamp()});
  json j;
  j["model"] = f.model_path;
  j["iterations"] = clf.model.iterations;
  j["final_dual"] = clf.model.final_dual;
  j["converged"] = clf.model.converged;
  j["threshold"] = clf.threshold;
  j["threshold_std"] = clf.threshold_std;
  j["rounds"] = clf.rounds;
  j["tau"] = f.tau;
  j["R"] = f.reg;
  j["scale_factor"] = scale.factor;
  out << j.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- eval

struct EvalFlags {
  DataFlags data;
  std::string model_path;
  std::optional<double> tau;
  std::string format = "json";
};

int cmd_eval(const EvalFlags& f, std::ostream& out) {
  const ModelFile mf = load_model(f.model_path);
  const Dataset ds = f.data.load(mf.classifier.model.weights.size());
  check_model_dim(mf, ds);
  require_both_classes(ds);
  const double tau = f.tau.value_or(mf.classifier.model.tau);
  const auto pos = score_rows(mf.classifier.model, ds.positives, FeatureSpace::kRaw);
  const auto neg = score_rows(mf.classifier.model, ds.negatives, FeatureSpace::kRaw);
  const EvalReport report = evaluate_scores(pos, neg, mf.classifier.threshold, tau);
  if (f.format == "csv") {
    out << csv_header() << "\n" << to_csv_row(report) << "\n";
  } else {
    out << to_json(report) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- predict

int cmd_predict(const std::string& model_path, const std::string& data_path, std::ostream& out) {
  const ModelFile mf = load_model(model_path);
  const std::size_t dim = mf.classifier.model.weights.size();
  std::ifstream in(data_path);
  if (!in) throw DataError("cannot open data file '" + data_path + "'");

  json scores = json::array(), labels = json::array();
  std::string line;
  std::size_t lineno = 0;
  ParseOptions opts;
  opts.allow_empty = true;
  opts.min_dim = dim;
  opts.dense_max_dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream one(line);
    Dataset row;
    try {
      row = parse_libsvm(one, opts);
    } catch (const ParseError& e) {
      throw ParseError(lineno, std::string(e.what()).substr(std::string("line 1: ").size()));
    }
    const FeatureMatrix& x = row.num_positive() == 1 ? row.positives : row.negatives;
    if (x.rows() == 0) continue;
    if (x.cols() != dim) {
      throw DataError("line " + std::to_string(lineno) + ": feature index beyond model dimension " +
                      std::to_string(dim));
    }
    const double s = score_rows(mf.classifier.model, x, FeatureSpace::kRaw)[0];
    scores.push_back(s);
    labels.push_back(s > mf.classifier.threshold ? 1 : -1);
  }
  json j;
  j["threshold"] = mf.classifier.threshold;
  j["scores"] = std::move(scores);
  j["predictions"] = std::move(labels);
  out << j.dump() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- project

int cmd_project(const std::string& input, bool no_cache, bool secant, std::istream& in, std::ostream& out) {
  std::string text;
  if (input.empty() || input == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream file(input);
    if (!file) throw DataError("cannot open '" + input + "'");
    std::ostringstream ss;
    ss << file.rdbuf();
    text = ss.str();
  }
  ProjectionInput pin;
  try {
    const json j = json::parse(text);
    pin.alpha0 = j.at("alpha0").get<std::vector<double>>();
    pin.beta0 = j.at("beta0").get<std::vector<double>>();
    pin.k = j.at("k").get<std::size_t>();
    pin.eps = j.value("eps", 1e-10);
  } catch (const json::exception& e) {
    throw DataError(std::string("bad projection input: ") + e.what());
  }
  if (pin.alpha0.empty() || pin.beta0.empty()) throw DataError("alpha0 and beta0 must be nonempty");
  if (pin.k < 1 || pin.k > pin.beta0.size()) throw DataError("k must lie in [1, len(beta0)]");
  if (!(pin.eps > 0.0)) throw DataError("eps must be positive");

  ProjectionOptions opts;
  opts.eps = pin.eps;
  opts.use_caches = !no_cache;
  opts.secant = secant;
  const ProjectionResult r = project_top_k(pin.alpha0, pin.beta0, pin.k, opts);
  json j;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["lambda"] = r.lambda;
  j["mu"] = r.mu;
  j["C"] = r.C;
  out << j.dump() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchFlags {
  std::string sizes = "10000,100000,1000000";
  std::string m_sizes;
  double k_fraction = 0.1;
  std::size_t k_constant = 0;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  std::string variants = "dac,plain_bisection,capped_simplex,sort_search";
  double sort_max_work = 2e8;

  DataFlags data;
  std::string ratios = "1,2,4,8,16,32";
  double tau = 0.05;
  double reg = 1.0;
  std::size_t iters = 50;

  std::string csv_path;
  std::string fit_variant = "dac";
  std::string out_path;
};

std::vector<BenchVariant> parse_variants(const std::string& text) {
  std::vector<BenchVariant> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = variant_from_name(item);
    if (!v || *v == BenchVariant::kTraining) throw UsageError("unknown projection variant '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

void emit_csv(const std::vector<BenchRecord>& records, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    write_bench_csv(out, records);
    return;
  }
  std::ofstream file(path);
  if (!file) throw DataError("cannot write '" + path + "'");
  write_bench_csv(file, records);
}

int cmd_bench_projection(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  ProjectionBenchConfig cfg;
  const auto ns = parse_size_list(f.sizes);
  const auto ms = f.m_sizes.empty() ? ns : parse_size_list(f.m_sizes);
  if (ms.size() != ns.size()) throw UsageError("--m-sizes must have as many entries as --sizes");
  for (std::size_t i = 0; i < ns.size(); ++i) cfg.sizes.emplace_back(ms[i], ns[i]);
  if (f.k_constant > 0) {
    cfg.k_rule.is_fraction = false;
    cfg.k_rule.value = static_cast<double>(f.k_constant);
  } else {
    cfg.k_rule.value = f.k_fraction;
  }
  cfg.trials = f.trials;
  cfg.seed = f.seed;
  cfg.variants = parse_variants(f.variants);
  cfg.sort_search_max_work = f.sort_max_work;
  const auto records = bench_projection(cfg);
  emit_csv(records, f.out_path, out);
  for (const auto& [m, n] : cfg.sizes) {
    for (BenchVariant v : cfg.variants) {
      try {
        err << variant_name(v) << " m=" << m << " n=" << n << " median_ns=" << median_nanos(records, v, m, n)
            << "\n";
      } catch (const std::invalid_argument&) {
        // variant skipped for this cell
      }
    }
  }
  return kOk;
}

int cmd_bench_training(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  Dataset raw = f.data.load();
  require_both_classes(raw);
  const Dataset ds = normalize(raw).first;
  TrainConfig cfg;
  cfg.tau = f.tau;
  cfg.R = f.reg;
  cfg.max_iters = f.iters;
  cfg.seed = f.seed;
  const auto records = bench_training(ds, parse_size_list(f.ratios), cfg, std::max<std::size_t>(1, f.trials));
  emit_csv(records, f.out_path, out);
  if (records.size() >= 3) {
    try {
      err << "training log-log slope: " << fit_loglog_slope(records, BenchVariant::kTraining) << "\n";
    } catch (const std::invalid_argument&) {
    }
  }
  return kOk;
}

int cmd_bench_fit(const BenchFlags& f, std::istream& in, std::ostream& out) {
  std::vector<BenchRecord> records;
  if (f.csv_path.empty() || f.csv_path == "-") {
    records = read_bench_csv(in);
  } else {
    std::ifstream file(f.csv_path);
    if (!file) throw DataError("cannot open '" + f.csv_path + "'");
    records = read_bench_csv(file);
  }
  const auto v = variant_from_name(f.fit_variant);
  if (!v) throw UsageError("unknown variant '" + f.fit_variant + "'");
  double slope = 0.0;
  try {
    slope = fit_loglog_slope(records, *v);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  json j;
  j["variant"] = f.fit_variant;
  j["slope"] = slope;
  out << j.dump() << "\n";
  return kOk;
}

// ---------------------------------------------------------------- grid

struct GridFlags {
  DataFlags data;
  double tau = 0.05;
  std::string reg_grid;
  std::size_t folds = 5;
  std::string objective = "rank";
  std::uint64_t seed = 0;
  double eps = 1e-8;
  std::size_t max_iters = 10000;
  std::size_t max_extensions = 3;
  std::size_t threads = 0;
};

int cmd_grid(const GridFlags& f, std::ostream& out, std::ostream& err) {
  Dataset raw = f.data.load();
  require_both_classes(raw);
  if (raw.num_positive() < f.folds || raw.num_negative() < f.folds) {
    throw DataError("each class needs at least as many instances as folds");
  }
  const Dataset ds = normalize(raw).first;
  const GridObjective objective = f.objective == "np" ? GridObjective::kNp : GridObjective::kRank;
  if (objective == GridObjective::kNp && f.tau == 0.0) throw UsageError("--objective np needs tau > 0");
  const auto grid = f.reg_grid.empty() ? default_reg_grid() : parse_double_list(f.reg_grid);
  for (double r : grid) {
    if (!(r > 0.0)) throw UsageError("regularization values must be positive");
  }
  TrainConfig cfg;
  cfg.tau = f.tau;
  cfg.eps = f.eps;
  cfg.max_iters = f.max_iters;
  cfg.seed = f.seed;
  const std::size_t threads = effective_threads(f.threads);
  const GridResult res = grid_search(
      grid, objective,
      [&](double R) {
        TrainConfig c = cfg;
        c.R = R;
        auto vals = cross_validate(ds, c, f.folds, objective, f.seed, threads);
        err << "R=" << R << " done\n";
        return vals;
      },
      f.max_extensions);

  json j;
  j["best_R"] = res.best_R;
  j["objective"] = f.objective;
  j["folds"] = f.folds;
  j["extensions"] = res.extensions;
  json cells = json::array();
  for (const auto& c : res.cells) {
    json cell;
    cell["R"] = c.R;
    cell["mean"] = c.mean;
    cell["folds"] = c.fold_values;
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  out << j.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------- synth

int cmd_synth(std::size_t m, std::size_t n, std::size_t d, double sep, std::uint64_t seed, const std::string& path,
              std::ostream& out) {
  const Dataset ds = synth_gaussians(m, n, d, sep, seed);
  if (path.empty() || path == "-") {
    write_libsvm(out, ds);
    return kOk;
  }
  std::ofstream file(path);
  if (!file) throw DataError("cannot write '" + path + "'");
  write_libsvm(file, ds);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Neyman-Pearson ranking with FPR control", "taufpl"};
  app.require_subcommand(1);

  TrainFlags train;
  auto* t = app.add_subcommand("train", "Train a classifier and write a model file");
  train.data.add(t);
  t->add_option("--tau", train.tau, "FPR tolerance in [0, 1)")->required()->check(kTauCheck);
  t->add_option("--reg", train.reg, "Regularization R > 0")->required()->check(CLI::PositiveNumber);
  t->add_option("--eps", train.eps, "Stop when the dual objective changes by at most eps")
      ->check(CLI::PositiveNumber);
  t->add_option("--max-iters", train.max_iters, "Iteration cap")->check(CLI::PositiveNumber);
  t->add_option("--oob-rounds", train.oob_rounds, "Out-of-bootstrap rounds")->check(CLI::PositiveNumber);
  t->add_option("--final-scorer", train.final_scorer, "retrain | average")
      ->check(CLI::IsMember({"retrain", "average"}));
  t->add_option("--criterion", train.criterion, "Threshold criterion: np | fpr")->check(CLI::IsMember({"np", "fpr"}));
  t->add_option("--step-rule", train.step_rule, "backtracking | power")
      ->check(CLI::IsMember({"backtracking", "power"}));
  t->add_option("--seed", train.seed, "Random seed");
  t->add_option("--model", train.model_path, "Output model file")->required();
  t->add_flag("--threshold-on-train", train.threshold_on_train, "Pick the threshold on training scores");
  t->add_flag("--strict", train.strict, "Fail (exit 3) if the solver does not converge");
  t->add_option("--threads", train.threads, "Worker threads for OOB rounds (capped by TAU_FPL_THREADS)");

  EvalFlags eval;
  auto* e = app.add_subcommand("eval", "Evaluate a model on labeled data");
  eval.data.add(e);
  e->add_option("--model", eval.model_path, "Model file")->required()->check(CLI::ExistingFile);
  e->add_option("--tau", eval.tau, "Tolerance for NP-score and ranking (default: the model's)")->check(kTauCheck);
  e->add_option("--format", eval.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  std::string predict_model, predict_data;
  auto* p = app.add_subcommand("predict", "Score instances of a LIBSVM file in file order");
  p->add_option("--model", predict_model, "Model file")->required()->check(CLI::ExistingFile);
  p->add_option("--data", predict_data, "LIBSVM file (labels ignored)")->required();

  std::string project_input = "-";
  bool project_no_cache = false, project_secant = false;
  auto* pr = app.add_subcommand("project", "Project a JSON {alpha0, beta0, k, eps} onto the top-k simplex");
  pr->add_option("--input", project_input, "JSON file, or - for standard input");
  pr->add_flag("--no-cache", project_no_cache, "Plain bisection without breakpoint caches");
  pr->add_flag("--secant", project_secant, "Bracket-guarded secant steps");

  BenchFlags bench;
  auto* b = app.add_subcommand("bench", "Benchmarks (CSV on standard output)");
  b->require_subcommand(1);
  auto* bp = b->add_subcommand("projection", "Projection micro-benchmark on N(0,1) inputs");
  bp->add_option("--sizes", bench.sizes, "Comma list of n");
  bp->add_option("--m-sizes", bench.m_sizes, "Comma list of m (default: same as n)");
  bp->add_option("--k-fraction", bench.k_fraction, "k = floor(fraction * n)")->check(CLI::Range(0.0, 1.0));
  bp->add_option("--k", bench.k_constant, "Constant k (overrides --k-fraction)");
  bp->add_option("--trials", bench.trials, "Timed trials per cell (>= 3)")->check(CLI::Range(3, 1000000));
  bp->add_option("--seed", bench.seed, "Random seed");
  bp->add_option("--variants", bench.variants, "Comma list of dac,plain_bisection,capped_simplex,sort_search");
  bp->add_option("--sort-max-work", bench.sort_max_work, "Skip sort_search when k*n exceeds this");
  bp->add_option("--out", bench.out_path, "CSV output file (default: standard output)");
  auto* bt = b->add_subcommand("training", "Training time on upsampled data at a fixed iteration budget");
  bench.data.add(bt);
  bt->add_option("--ratios", bench.ratios, "Comma list of upsampling ratios");
  bt->add_option("--tau", bench.tau, "FPR tolerance")->check(kTauCheck);
  bt->add_option("--reg", bench.reg, "Regularization R")->check(CLI::PositiveNumber);
  bt->add_option("--iters", bench.iters, "Iterations per run")->check(CLI::PositiveNumber);
  bt->add_option("--trials", bench.trials, "Runs per ratio")->check(CLI::PositiveNumber);
  bt->add_option("--seed", bench.seed, "Random seed");
  bt->add_option("--out", bench.out_path, "CSV output file (default: standard output)");
  auto* bf = b->add_subcommand("fit", "Log-log slope of median time against m + n");
  bf->add_option("--csv", bench.csv_path, "Bench CSV file, or - for standard input");
  bf->add_option("--variant", bench.fit_variant, "Variant to fit");

  GridFlags grid;
  auto* g = app.add_subcommand("grid", "Cross-validated choice of R");
  grid.data.add(g);
  g->add_option("--tau", grid.tau, "FPR tolerance")->required()->check(kTauCheck);
  g->add_option("--reg-grid", grid.reg_grid, "Comma list of R values");
  g->add_option("--folds", grid.folds, "Stratified folds")->check(CLI::Range(2, 1000));
  g->add_option("--objective", grid.objective, "rank | np")->check(CLI::IsMember({"rank", "np"}));
  g->add_option("--seed", grid.seed, "Random seed");
  g->add_option("--eps", grid.eps, "Solver tolerance")->check(CLI::PositiveNumber);
  g->add_option("--max-iters", grid.max_iters, "Solver iteration cap")->check(CLI::PositiveNumber);
  g->add_option("--max-extensions", grid.max_extensions, "Boundary extensions");
  g->add_option("--threads", grid.threads, "Worker threads for folds (capped by TAU_FPL_THREADS)");

  std::size_t sm = 500, sn = 500, sd = 2;
  double ssep = 4.0;
  std::uint64_t sseed = 0;
  std::string sout;
  auto* s = app.add_subcommand("synth", "Write a synthetic two-Gaussian dataset in LIBSVM format");
  s->add_option("--m", sm, "Positives")->check(CLI::PositiveNumber);
  s->add_option("--n", sn, "Negatives")->check(CLI::PositiveNumber);
  s->add_option("--d", sd, "Dimension")->check(CLI::PositiveNumber);
  s->add_option("--separation", ssep, "Distance between class means");
  s->add_option("--seed", sseed, "Random seed");
  s->add_option("--out", sout, "Output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  }

  try {
    if (t->parsed()) return cmd_train(train, out, err);
    if (e->parsed()) return cmd_eval(eval, out);
    if (p->parsed()) return cmd_predict(predict_model, predict_data, out);
    if (pr->parsed()) return cmd_project(project_input, project_no_cache, project_secant, in, out);
    if (bp->parsed()) return cmd_bench_projection(bench, out, err);
    if (bt->parsed()) return cmd_bench_training(bench, out, err);
    if (bf->parsed()) return cmd_bench_fit(bench, in, out);
    if (g->parsed()) return cmd_grid(grid, out, err);
    if (s->parsed()) return cmd_synth(sm, sn, sd, ssep, sseed, sout, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kData;
  } catch (const DataError& ex) {
    err << "error: " << ex.what() << "\n";
    return kData;
  } catch (const NumericalFailure& ex) {
    err << "error: " << ex.what() << "\n";
    return kNumerical;
  } catch (const DomainError& ex) {
    err << "error: " << ex.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kData;
  }
  err << "error: no command\n";
  return kUsage;
}

}  // namespace taufpl::cli
