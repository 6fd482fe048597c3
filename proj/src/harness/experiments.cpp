#include "cfnn/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "cfnn/amplify/amplify.hpp"
#include "cfnn/ball/ball.hpp"
#include "cfnn/cone/cone.hpp"
#include "cfnn/error.hpp"
#include "cfnn/harness/datasets.hpp"
#include "cfnn/linear.hpp"
#include "cfnn/numerics/sampling.hpp"
#include "cfnn/train/checkpoint.hpp"
#include "cfnn/train/complexity.hpp"
#include "cfnn/train/evaluation.hpp"
#include "cfnn/train/hypernet.hpp"
#include "cfnn/train/net.hpp"
#include "cfnn/train/trainer.hpp"

namespace cfnn::harness {

using amplify::Dataset;
using numerics::RngStream;

Deadline::Deadline(double max_seconds) : start_(std::chrono::steady_clock::now()), max_seconds_(max_seconds) {}

double Deadline::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void Deadline::check(const std::string& stage) const {
  const double t = elapsed();
  if (t > max_seconds_) {
    std::ostringstream msg;
    msg << "wall-clock cap of " << max_seconds_ << " s exceeded during " << stage << " (" << t << " s elapsed)";
    throw RuntimeFailure(msg.str());
  }
}

namespace {

// Stream ids keep the experiment families apart even under equal seeds.
constexpr std::uint64_t kExperimentStream = 0x6578706572696d74ULL;
enum Purpose : std::uint64_t { data_seed = 1, model_init, train_seed, evaluation, grid, delta, extra };

RngStream purpose_stream(const ExperimentConfig& c, Purpose p) { return RngStream(c.seed, kExperimentStream).split(p); }

std::uint64_t derived_seed(const ExperimentConfig& c, Purpose p, std::uint64_t k) {
  RngStream s = purpose_stream(c, p).split(k);
  return s.next_u64();
}

ExperimentReport start_report(const ExperimentConfig& resolved) {
  ExperimentReport r;
  r.config = resolved;
  r.version = artifact_version();
  return r;
}

ExperimentConfig prepare(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg.resolve();
  c.validate();
  return c;
}

DatasetParams dataset_params(const ExperimentConfig& c) {
  DatasetParams p;
  p.d = *c.dim;
  p.intervals = c.intervals;
  p.R = c.radius;
  p.inner = c.inner;
  p.outer = c.outer;
  return p;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  double shift = 0.0;
  for (double x : v) shift += x - v[0];
  mean = v[0] + shift / static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  sd = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
}

std::string n_key(const std::string& prefix, std::size_t n) { return prefix + "_n" + std::to_string(n); }

void add_ra_table(ExperimentReport& r, const std::vector<train::SweepRow>& rows, const std::string& prefix) {
  Table t{"ra", {"n_test", "ra_mean", "ra_std", "repeats"}, {}};
  for (const auto& row : rows) {
    t.add({static_cast<double>(row.n_test), row.ra_mean, row.ra_std, static_cast<double>(row.repeats)});
    r.metrics[n_key(prefix, row.n_test)] = row.ra_mean;
  }
  r.tables.push_back(std::move(t));
}

void finish(ExperimentReport& r, const Deadline& deadline) { r.runtime_seconds = deadline.elapsed(); }

}  // namespace

// Ball and tangent constructions.

ExperimentReport run_ball_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ExperimentConfig c = prepare(cfg);
  require(c.kind == "ball" || c.kind == "tangent", "run_ball_experiment needs kind ball or tangent");
  const Deadline deadline(c.max_seconds);
  ExperimentReport r = start_report(c);
  const std::size_t d = *c.dim;
  const bool tangent = c.kind == "tangent";

  std::unique_ptr<amplify::StochasticClassifier> clf;
  std::function<double(double)> p1;
  if (tangent) {
    const auto params = ball::TangentParams::make(c.radius, c.alpha);
    clf = std::make_unique<ball::TangentClassifier>(params);
    p1 = [params](double norm) { return ball::analytic_p1_tangent(params, norm); };
    r.metrics["b"] = params.b;
  } else {
    const auto params = ball::BallParams::make(d, c.radius, c.alpha);
    clf = std::make_unique<ball::BallClassifier>(params);
    p1 = [params](double norm) { return ball::analytic_p1_ball(params, norm); };
    r.metrics["b"] = params.b;
  }

  // p1 over a radius grid spanning the intervals.
  double lo = c.intervals.front().first;
  double hi = c.intervals.front().second;
  for (const auto& [a, b] : c.intervals) {
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  Table grid_table{"p1", {"radius", "p1_analytic", "p1_empirical", "n"}, {}};
  const RngStream grid_stream = purpose_stream(c, grid);
  std::size_t inside_band = 0;
  const double sigma = std::sqrt(0.25 / static_cast<double>(c.grid_samples));
  for (const double radius : linspace(lo, hi, c.grid_points)) {
    const std::size_t i = grid_table.rows.size();
    RngStream dir_rng = grid_stream.split(2 * i);
    std::vector<double> x = numerics::sample_unit_vector(dir_rng, d);
    for (double& v : x) v *= radius;
    const auto est = amplify::estimate_probs(*clf, x, c.grid_samples, grid_stream.split(2 * i + 1));
    const double analytic = p1(radius);
    if (std::fabs(est.p_hat[1] - analytic) <= 4.0 * sigma) ++inside_band;
    grid_table.add({radius, analytic, est.p_hat[1], static_cast<double>(c.grid_samples)});
    deadline.check("the p1 grid");
  }
  r.metrics["p1_grid_points"] = static_cast<double>(c.grid_points);
  r.metrics["p1_within_4sigma"] = static_cast<double>(inside_band);

  // Shell dataset: RA across n and the delta curve at n = samples.
  const Dataset data = gen_dataset("shell", *c.points, derived_seed(c, data_seed, 0), dataset_params(c));
  if (!opts.dataset_path.empty()) write_dataset_csv(data, opts.dataset_path);
  double margin = 1.0;
  for (const auto& [a, b] : c.intervals) margin = std::min({margin, std::fabs(p1(a) - 0.5), std::fabs(p1(b) - 0.5)});
  r.metrics["analytic_margin_min"] = margin;
  r.metrics["hoeffding_point_error_bound"] =
      std::exp(-2.0 * static_cast<double>(*c.samples) * margin * margin);

  const auto rows = train::sampling_generalization(*clf, data, c.n_test, *c.repeats, purpose_stream(c, evaluation));
  deadline.check("the RA sweep");
  const auto curve = amplify::delta_curve(*clf, data, *c.samples, purpose_stream(c, delta));
  deadline.check("the delta curve");
  r.metrics["ra"] = curve.positive_fraction;
  r.metrics["samples"] = static_cast<double>(*c.samples);

  r.tables.push_back(std::move(grid_table));
  add_ra_table(r, rows, "ra");
  Table delta_table{"delta", {"rank", "delta"}, {}};
  for (std::size_t k = 0; k < curve.delta.size(); ++k) delta_table.add({static_cast<double>(k), curve.delta[k]});
  r.tables.push_back(std::move(delta_table));
  finish(r, deadline);
  return r;
}

ExperimentReport run_mse_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ExperimentConfig c = prepare(cfg);
  require(c.kind == "mse", "run_mse_experiment needs kind mse");
  const Deadline deadline(c.max_seconds);
  ExperimentReport r = start_report(c);
  const std::size_t d = *c.dim;
  const auto params = ball::BallParams::make(d, c.radius, c.alpha);
  const ball::BallClassifier clf(params);
  const double eps_p = ball::epsilon_p(params, c.phi);
  const std::size_t n_bound = ball::mse_bound_samples(c.eps, params, c.phi);

  const double R = c.radius;
  const amplify::TruthFn truth = [R](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return sign_of(std::sqrt(s) - R);
  };
  const auto intervals = c.intervals;
  const amplify::PointSampler mu = [d, intervals](RngStream& rng) { return sample_shell_point(rng, d, intervals); };
  if (!opts.dataset_path.empty()) {
    write_dataset_csv(gen_dataset("shell", *c.points, derived_seed(c, data_seed, 0), dataset_params(c)),
                      opts.dataset_path);
  }

  std::vector<std::size_t> ns = c.n_test;
  if (ns.empty()) ns = {1, 9, n_bound};
  Table t{"mse", {"n", "mse", "mse_squared_pm1", "points"}, {}};
  const RngStream eval = purpose_stream(c, evaluation);
  double mse_at_bound = 0.0;
  for (std::size_t n : ns) {
    const double mse = amplify::empirical_mse(clf, truth, mu, n, *c.points, eval);
    t.add({static_cast<double>(n), mse, 4.0 * mse, static_cast<double>(*c.points)});
    r.metrics[n_key("mse", n)] = mse;
    if (n == n_bound) mse_at_bound = mse;
    deadline.check("the MSE sweep");
  }
  if (std::find(ns.begin(), ns.end(), n_bound) == ns.end()) {
    mse_at_bound = amplify::empirical_mse(clf, truth, mu, n_bound, *c.points, eval);
  }
  r.tables.push_back(std::move(t));
  r.metrics["eps"] = c.eps;
  r.metrics["eps_p"] = eps_p;
  r.metrics["n_bound"] = static_cast<double>(n_bound);
  r.metrics["mse"] = mse_at_bound;
  r.metrics["mse_squared_pm1"] = 4.0 * mse_at_bound;
  r.checks["mse_within_eps"] = mse_at_bound <= c.eps;
  r.checks["mse_within_half_eps"] = mse_at_bound <= 0.5 * c.eps;
  finish(r, deadline);
  return r;
}

ExperimentReport run_cone_experiment(const ExperimentConfig& cfg, const RunOptions&) {
  const ExperimentConfig c = prepare(cfg);
  require(c.kind == "cone", "run_cone_experiment needs kind cone");
  const Deadline deadline(c.max_seconds);
  ExperimentReport r = start_report(c);
  const std::size_t d = *c.dim;
  const auto target = cone::target_function(c.target_fn);
  const auto dist = cone::ConeDistribution::make(*c.lipschitz, target.f, cone::normal_zeta(d, c.zeta_scale), d);
  const cone::ConeSeparator separator(dist);
  const cone::SliceClassifier slice(dist);
  const std::size_t n = *c.samples;
  const double sigma = std::sqrt(0.25 / static_cast<double>(n));
  const double m = c.margin;
  const std::vector<double> offsets{-4.0 * m, -m, 0.0, m, 4.0 * m};

  Table t{"cone", {"x", "y", "pr_agree", "n", "inside_margin"}, {}};
  const RngStream eval = purpose_stream(c, evaluation);
  std::size_t off = 0, separated = 0, on = 0, in_band = 0;
  Dataset slice_points;
  for (const double x0 : linspace(-3.0, 3.0, *c.points)) {
    std::vector<double> x(d, 0.0);
    x[0] = x0;
    const double fx = target.f(x);
    if (std::fabs(fx) >= m) slice_points.push_back({x, class_of_sign(sign_of(fx))});
    for (const double dy : offsets) {
      const double y = fx + dy;
      std::vector<double> q = x;
      q.push_back(y);
      // Labels predict sgn(f(x) - y); on the graph this is the +1 frequency.
      const std::size_t truth = class_of_sign(sign_of(fx - y));
      const auto est = amplify::estimate_probs(separator, q, n, eval.split(t.rows.size()));
      const double agree = est.p_hat[truth];
      const bool inside = std::fabs(dy) < m;
      if (inside) {
        ++on;
        if (std::fabs(agree - 0.5) <= 4.0 * sigma) ++in_band;
      } else {
        ++off;
        if (agree - 0.5 > 4.0 * sigma) ++separated;
      }
      t.add({x0, y, agree, static_cast<double>(n), inside ? 1.0 : 0.0});
    }
    deadline.check("the cone grid");
  }
  r.tables.push_back(std::move(t));
  r.metrics["off_graph_points"] = static_cast<double>(off);
  r.metrics["off_graph_separated"] = static_cast<double>(separated);
  r.metrics["off_graph_separated_fraction"] = off ? static_cast<double>(separated) / static_cast<double>(off) : 0.0;
  r.metrics["on_graph_points"] = static_cast<double>(on);
  r.metrics["on_graph_in_band_fraction"] = on ? static_cast<double>(in_band) / static_cast<double>(on) : 0.0;
  r.metrics["lipschitz"] = *c.lipschitz;
  if (!slice_points.empty()) {
    r.metrics["slice_points"] = static_cast<double>(slice_points.size());
    r.metrics["slice_ra"] = amplify::empirical_random_accuracy(slice, slice_points, n, purpose_stream(c, extra));
  }
  deadline.check("the slice classification");
  const auto net = cone::l1cone_network_params(std::vector<double>(d + 1, 0.0), *c.lipschitz);
  r.metrics["network_units_built"] = static_cast<double>(net.units_built());
  r.metrics["network_units_quoted"] = static_cast<double>(net.units_quoted());
  finish(r, deadline);
  return r;
}

// Learned CFNNs.

namespace {

struct Split {
  Dataset train;
  Dataset test;
  std::size_t classes = 2;
};

Split make_split(const ExperimentConfig& c, std::size_t rep) {
  Split s;
  const DatasetParams params = dataset_params(c);
  s.train = gen_dataset(*c.dataset, c.train_size, derived_seed(c, data_seed, 2 * rep), params);
  s.test = gen_dataset(*c.dataset, c.test_size, derived_seed(c, data_seed, 2 * rep + 1), params);
  for (const auto* set : {&s.train, &s.test}) {
    for (const auto& pt : *set) s.classes = std::max(s.classes, pt.label + 1);
  }
  return s;
}

train::TrainConfig train_config(const ExperimentConfig& c, std::size_t n_train, std::uint64_t seed,
                                const Deadline& deadline) {
  train::TrainConfig t;
  t.n_train = n_train;
  t.tau = c.tau;
  t.learning_rate = c.learning_rate;
  t.momentum = c.momentum;
  t.weight_decay = *c.weight_decay;
  t.cosine_schedule = *c.cosine_schedule;
  t.epochs = *c.epochs;
  t.batch_size = c.batch_size;
  t.seed = seed;
  t.eval_every = c.eval_every;
  t.eval_n = *c.samples;
  t.on_epoch = [&deadline](const train::EpochMetrics& m) { deadline.check("epoch " + std::to_string(m.epoch)); };
  return t;
}

std::unique_ptr<train::Model> build_model(const ExperimentConfig& c, std::size_t classes, std::uint64_t init_seed) {
  RngStream init(init_seed, 0x696e6974ULL);
  const std::size_t d = *c.dim;
  const std::string& arch = *c.arch;
  if (arch == "hypernet") {
    train::HypernetSpec spec;
    spec.input_dim = d;
    spec.classes = classes;
    spec.m = c.m;
    spec.hidden = c.hidden;
    auto net = std::make_unique<train::Hypernet>(spec);
    net->init(init, *c.init_gain);
    return net;
  }
  const double rate = arch == "dropout" ? c.dropout : 0.0;
  auto net = std::make_unique<train::CfnnNet>(
      arch == "dropout" ? train::make_dropout_mlp(d, c.hidden, classes, rate)
                        : train::CfnnNet(d, {train::LayerSpec::dense(c.hidden), train::LayerSpec::relu(),
                                             train::LayerSpec::dense(c.hidden), train::LayerSpec::relu(),
                                             train::LayerSpec::dense(classes)}));
  net->init(init, *c.init_gain);
  return net;
}

void add_loss_rows(Table& t, std::size_t rep, std::size_t variant, const train::TrainResult& res) {
  for (const auto& m : res.history) {
    t.add({static_cast<double>(rep), static_cast<double>(variant), static_cast<double>(m.epoch), m.train_loss});
  }
}

double linear_baseline(const ExperimentConfig& c, const Split& s, std::uint64_t seed, const Deadline& deadline) {
  train::CfnnNet lin = train::make_linear(*c.dim, s.classes);
  RngStream init(seed, 0x6c696eULL);
  lin.init(init);
  train::TrainConfig t = train_config(c, 1, seed, deadline);
  t.weight_decay = 0.0;
  t.eval_every = 0;
  train::train(lin, s.train, nullptr, t);
  double acc = train::standard_accuracy(lin, s.test);
  // The exhaustive direction search bounds every linear rule on the test set from above.
  if (*c.dim == 2 && s.classes == 2) acc = std::max(acc, train::best_linear_accuracy_2d(s.test));
  return acc;
}

double head_parameter_variance(const train::Hypernet& net, const RngStream& rng, std::size_t draws) {
  const std::size_t P = net.head_param_count();
  std::vector<double> sum(P, 0.0), sq(P, 0.0);
  for (std::size_t j = 0; j < draws; ++j) {
    RngStream s = rng.split(j);
    const auto theta = net.generate(net.draw(s));
    for (std::size_t k = 0; k < P; ++k) {
      sum[k] += theta[k];
      sq[k] += theta[k] * theta[k];
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < P; ++k) {
    const double mean = sum[k] / static_cast<double>(draws);
    total += sq[k] / static_cast<double>(draws) - mean * mean;
  }
  return total / static_cast<double>(P);
}

ExperimentReport run_hypernet_or_plain(const ExperimentConfig& c, const RunOptions& opts) {
  const Deadline deadline(c.max_seconds);
  ExperimentReport r = start_report(c);
  const bool hyper = *c.arch == "hypernet";
  const std::size_t reps = *c.repeats;
  Table runs{"runs", {"repeat", "ra", "standard_accuracy", "linear_accuracy", "final_loss"}, {}};
  Table loss{"loss", {"repeat", "variant", "epoch", "train_loss"}, {}};
  std::vector<std::vector<double>> ra_by_n(c.n_test.size());
  std::vector<double> ra, lin, std_acc;
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const Split s = make_split(c, rep);
    if (rep == 0 && !opts.dataset_path.empty()) write_dataset_csv(s.train, opts.dataset_path);
    auto model = build_model(c, s.classes, derived_seed(c, model_init, rep));
    const auto res = train::train(*model, s.train, &s.test,
                                  train_config(c, hyper ? *c.n_train : 1, derived_seed(c, train_seed, rep), deadline));
    add_loss_rows(loss, rep, 0, res);
    if (rep == 0 && !opts.checkpoint_path.empty()) train::save_checkpoint(*model, opts.checkpoint_path);
    const RngStream eval = purpose_stream(c, evaluation).split(rep);
    for (std::size_t k = 0; k < c.n_test.size(); ++k) {
      ra_by_n[k].push_back(train::majority_accuracy(*model, s.test, c.n_test[k], eval.split(k)));
      deadline.check("evaluation");
    }
    ra.push_back(train::majority_accuracy(*model, s.test, *c.samples, eval.split(c.n_test.size())));
    std_acc.push_back(train::standard_accuracy(*model, s.test));
    lin.push_back(linear_baseline(c, s, derived_seed(c, extra, rep), deadline));
    runs.add({static_cast<double>(rep), ra.back(), std_acc.back(), lin.back(),
              res.history.empty() ? 0.0 : res.history.back().train_loss});
    if (rep == 0) {
      const auto cx = train::dc_rc(model->graph());
      r.metrics["dc"] = static_cast<double>(cx.dc);
      r.metrics["rc"] = static_cast<double>(cx.rc);
      if (hyper) {
        r.metrics["head_param_variance"] = head_parameter_variance(
            static_cast<const train::Hypernet&>(*model), purpose_stream(c, extra).split(1'000'000), 256);
      }
    }
  }
  std::vector<train::SweepRow> rows;
  for (std::size_t k = 0; k < c.n_test.size(); ++k) {
    train::SweepRow row;
    row.n_test = c.n_test[k];
    row.repeats = reps;
    mean_std(ra_by_n[k], row.ra_mean, row.ra_std);
    rows.push_back(row);
  }
  add_ra_table(r, rows, "ra");
  r.tables.push_back(std::move(runs));
  r.tables.push_back(std::move(loss));
  r.metrics["ra_median"] = median(ra);
  r.metrics["linear_accuracy_median"] = median(lin);
  r.metrics["standard_accuracy_median"] = median(std_acc);
  r.metrics["samples"] = static_cast<double>(*c.samples);
  finish(r, deadline);
  return r;
}

// Six cells: {standard, majority} training x {standard, mean, majority} testing.
ExperimentReport run_dropout_ablation(const ExperimentConfig& c, const RunOptions& opts) {
  const Deadline deadline(c.max_seconds);
  ExperimentReport r = start_report(c);
  const std::size_t reps = *c.repeats;
  const char* train_names[] = {"std_train", "maj_train"};
  const char* test_names[] = {"std_test", "mean_test", "maj_test"};
  std::vector<double> cells[2][3];
  Table loss{"loss", {"repeat", "variant", "epoch", "train_loss"}, {}};
  for (std::size_t rep = 0; rep < reps; ++rep) {
    const Split s = make_split(c, rep);
    if (rep == 0 && !opts.dataset_path.empty()) write_dataset_csv(s.train, opts.dataset_path);
    for (std::size_t variant = 0; variant < 2; ++variant) {
      auto model = build_model(c, s.classes, derived_seed(c, model_init, rep));
      const std::size_t n_train = variant == 0 ? 1 : *c.n_train;
      const auto res = train::train(*model, s.train, nullptr,
                                    train_config(c, n_train, derived_seed(c, train_seed, 2 * rep + variant), deadline));
      add_loss_rows(loss, rep, variant, res);
      if (rep == 0 && variant == 1 && !opts.checkpoint_path.empty()) {
        train::save_checkpoint(*model, opts.checkpoint_path);
      }
      const RngStream eval = purpose_stream(c, evaluation).split(rep).split(variant);
      cells[variant][0].push_back(train::standard_accuracy(*model, s.test));
      cells[variant][1].push_back(train::mean_accuracy(*model, s.test, *c.samples, eval.split(0)));
      cells[variant][2].push_back(train::majority_accuracy(*model, s.test, *c.samples, eval.split(1)));
      deadline.check("ablation evaluation");
    }
  }
  Table t{"ablation", {"train_majority", "test_mode", "accuracy_mean", "accuracy_std", "repeats"}, {}};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      double mean = 0.0, sd = 0.0;
      mean_std(cells[a][b], mean, sd);
      t.add({static_cast<double>(a), static_cast<double>(b), mean, sd, static_cast<double>(reps)});
      r.metrics[std::string(train_names[a]) + "_" + test_names[b]] = mean;
    }
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(loss));
  r.metrics["samples"] = static_cast<double>(*c.samples);
  finish(r, deadline);
  return r;
}

}  // namespace

ExperimentReport run_train_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ExperimentConfig c = prepare(cfg);
  require(c.kind == "train", "run_train_experiment needs kind train");
  if (*c.arch == "dropout") return run_dropout_ablation(c, opts);
  return run_hypernet_or_plain(c, opts);
}

ExperimentReport run_sweep(const ExperimentConfig& cfg, const RunOptions& opts) {
  const ExperimentConfig c = prepare(cfg);
  require(c.kind == "sweep", "run_sweep needs kind sweep");
  const Deadline deadline(c.max_seconds);
  ExperimentReport r = start_report(c);
  const Split s = make_split(c, 0);
  if (!opts.dataset_path.empty()) write_dataset_csv(s.train, opts.dataset_path);
  auto model = build_model(c, s.classes, derived_seed(c, model_init, 0));
  const std::size_t n_train = *c.arch == "plain" ? 1 : *c.n_train;
  const auto res = train::train(*model, s.train, nullptr,
                                train_config(c, n_train, derived_seed(c, train_seed, 0), deadline));
  if (!opts.checkpoint_path.empty()) train::save_checkpoint(*model, opts.checkpoint_path);
  const train::ModelClassifier clf(*model);
  const auto rows = train::sampling_generalization(clf, s.test, c.n_test, *c.repeats, purpose_stream(c, evaluation));
  add_ra_table(r, rows, "ra");
  Table loss{"loss", {"repeat", "variant", "epoch", "train_loss"}, {}};
  add_loss_rows(loss, 0, 0, res);
  r.tables.push_back(std::move(loss));
  r.metrics["standard_accuracy"] = train::standard_accuracy(*model, s.test);
  finish(r, deadline);
  return r;
}

ExperimentReport run_gtilde_experiment(const ExperimentConfig& cfg, const RunOptions&) {
  const ExperimentConfig c = prepare(cfg);
  require(c.kind == "gtilde", "run_gtilde_experiment needs kind gtilde");
  const Deadline deadline(c.max_seconds);
  ExperimentReport r = start_report(c);
  const std::size_t d = *c.dim;
  const std::size_t n = *c.samples % 2 ? *c.samples : *c.samples + 1;
  const double a = c.radius, b = 2.0 * c.radius;
  const auto g = ball::build_gtilde_combiner({{a, b, 1}}, d, c.alpha, n);
  Table t{"gtilde", {"radius", "gtilde", "expected", "n"}, {}};
  const RngStream stream = purpose_stream(c, evaluation);
  std::size_t scored = 0, agree = 0;
  for (const double radius : linspace(0.0, 3.0 * c.radius, *c.points)) {
    const std::size_t i = t.rows.size();
    RngStream dir = stream.split(2 * i);
    std::vector<double> x = numerics::sample_unit_vector(dir, d);
    for (double& v : x) v *= radius;
    const double value = g(x, stream.split(2 * i + 1));
    const double expected = static_cast<double>(sign_of(radius - a) - sign_of(radius - b));
    if (std::fabs(radius - a) >= c.margin && std::fabs(radius - b) >= c.margin) {
      ++scored;
      if (value == expected) ++agree;
    }
    t.add({radius, value, expected, static_cast<double>(n)});
    deadline.check("the combiner grid");
  }
  r.tables.push_back(std::move(t));
  r.metrics["scored_points"] = static_cast<double>(scored);
  r.metrics["agreement"] = scored ? static_cast<double>(agree) / static_cast<double>(scored) : 0.0;
  finish(r, deadline);
  return r;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  const std::string& k = cfg.kind;
  if (k == "ball" || k == "tangent") return run_ball_experiment(cfg, opts);
  if (k == "mse") return run_mse_experiment(cfg, opts);
  if (k == "cone") return run_cone_experiment(cfg, opts);
  if (k == "train") return run_train_experiment(cfg, opts);
  if (k == "sweep") return run_sweep(cfg, opts);
  if (k == "gtilde") return run_gtilde_experiment(cfg, opts);
  prepare(cfg);  // reports the unknown kind
  throw DomainError("unknown experiment kind '" + k + "'");
}

}  // namespace cfnn::harness
