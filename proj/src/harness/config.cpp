#include "cfnn/harness/config.hpp"

#include <algorithm>
#include <cmath>

#include "cfnn/cone/cone.hpp"
#include "cfnn/error.hpp"

namespace cfnn::harness {

using nlohmann::json;

std::vector<std::string> experiment_kinds() { return {"ball", "tangent", "cone", "mse", "train", "sweep", "gtilde"}; }

ExperimentConfig ExperimentConfig::resolve() const {
  ExperimentConfig c = *this;
  const std::string& k = c.kind;
  const bool learned = k == "train" || k == "sweep";
  if (!c.dim) c.dim = k == "tangent" || learned ? 2 : (k == "cone" ? 1 : 10);
  if (!c.samples) {
    if (k == "cone") {
      c.samples = 20001;
    } else if (learned) {
      c.samples = 101;
    } else {
      c.samples = 1501;
    }
  }
  if (!c.points) {
    if (k == "mse") {
      c.points = 2000;
    } else if (k == "cone") {
      c.points = 50;
    } else if (k == "gtilde") {
      c.points = 31;
    } else {
      c.points = 1000;
    }
  }
  if (!c.dataset) c.dataset = learned ? "circles" : "shell";
  if (!c.arch) c.arch = k == "sweep" ? "dropout" : "hypernet";
  const bool hyper = *c.arch == "hypernet";
  if (!c.n_train) c.n_train = hyper ? 5 : 9;
  if (!c.epochs) c.epochs = hyper ? 200 : 60;
  if (!c.weight_decay) c.weight_decay = hyper ? 0.0 : 5e-3;
  if (!c.init_gain) c.init_gain = hyper ? 3.0 : 1.0;
  if (!c.cosine_schedule) c.cosine_schedule = hyper;
  if (!c.lipschitz && k == "cone") {
    try {
      c.lipschitz = cone::target_function(c.target_fn).K;
    } catch (const DomainError&) {
      // Reported by validate().
    }
  }
  if (!c.repeats) c.repeats = k == "sweep" ? 5 : (k == "train" ? 3 : 1);
  if (c.n_test.empty()) {
    if (k == "sweep") {
      c.n_test = {1, 9, 101, 501};
    } else if (k == "ball" || k == "tangent") {
      c.n_test = {1, 9, 101, *c.samples};
    } else if (k != "mse") {
      c.n_test = {*c.samples};
    }
  }
  return c;
}

void ExperimentConfig::validate() const {
  const auto kinds = experiment_kinds();
  require(std::find(kinds.begin(), kinds.end(), kind) != kinds.end(),
          "unknown experiment kind '" + kind + "' (expected ball, tangent, cone, mse, train, sweep or gtilde)");
  require(dim && samples && points && dataset && arch && n_train && epochs && weight_decay && init_gain &&
              cosine_schedule && repeats,
          "configuration was not resolved");
  require(*dim >= 1, "--dim must be at least 1");
  require(std::isfinite(radius) && radius > 0.0, "--radius must be positive");
  require(*samples >= 1, "--samples must be at least 1");
  require(*points >= 1, "--points must be at least 1");
  require(*repeats >= 1, "--repeats must be at least 1");
  require(margin > 0.0, "margin must be positive");
  require(max_seconds > 0.0, "--max-seconds must be positive");
  require(format == "json" || format == "csv", "--format must be json or csv");
  for (std::size_t n : n_test) require(n >= 1, "--n-test values must be positive");
  if (kind == "ball" || kind == "tangent" || kind == "mse" || kind == "gtilde") {
    require(alpha > 0.5 && alpha < 1.0, "--alpha must lie strictly between 1/2 and 1");
  }
  if (kind == "tangent") require(*dim == 2, "the tangent construction is two-dimensional; use --dim 2");
  if (kind == "ball" || kind == "tangent" || kind == "mse") {
    check_intervals(intervals);
    require(grid_points >= 2 && grid_samples >= 1, "grid sizes must be positive");
  }
  if (kind == "mse") {
    require(phi > 0.0 && phi < radius, "--phi must lie in (0, R)");
    require(eps > 0.0 && eps < 1.0, "--eps must lie in (0, 1)");
    for (const auto& [lo, hi] : intervals) {
      require(hi <= radius - phi || lo >= radius + phi,
              "radius intervals must avoid the band (R - phi, R + phi) around the sphere");
    }
  }
  if (kind == "cone") {
    const auto names = cone::target_function_names();
    require(std::find(names.begin(), names.end(), target_fn) != names.end(),
            "unknown --target-fn '" + target_fn + "' (expected zero, linear, sin or abs-saw)");
    require(lipschitz && *lipschitz > 0.0, "--lipschitz must be positive");
    require(zeta_scale > 0.0, "zeta scale must be positive");
  }
  if (kind == "train" || kind == "sweep") {
    const auto names = dataset_names();
    require(std::find(names.begin(), names.end(), *dataset) != names.end(), "unknown --dataset '" + *dataset + "'");
    require(*dataset != "shell" || *dim >= 1, "shell dimension must be positive");
    require(*dataset == "shell" || *dim == 2, "circles, moons and blobs are two-dimensional; use --dim 2");
    require(*arch == "hypernet" || *arch == "dropout" || *arch == "plain",
            "--arch must be hypernet, dropout or plain");
    require(*n_train >= 1, "--n-train must be at least 1");
    require(tau > 0.0, "tau must be positive");
    require(learning_rate > 0.0, "learning rate must be positive");
    require(momentum >= 0.0 && momentum < 1.0, "momentum must lie in [0, 1)");
    require(*weight_decay >= 0.0, "weight decay must be nonnegative");
    require(batch_size >= 1 && hidden >= 1 && m >= 1, "network sizes must be positive");
    require(dropout >= 0.0 && dropout < 1.0, "dropout rate must lie in [0, 1)");
    require(train_size >= 2 && test_size >= 1, "train/test sizes are too small");
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["kind"] = c.kind;
  if (c.dim) j["dim"] = *c.dim;
  j["radius"] = c.radius;
  j["alpha"] = c.alpha;
  if (c.samples) j["samples"] = *c.samples;
  if (c.points) j["points"] = *c.points;
  j["phi"] = c.phi;
  j["eps"] = c.eps;
  j["target_fn"] = c.target_fn;
  if (c.lipschitz) j["lipschitz"] = *c.lipschitz;
  j["zeta_scale"] = c.zeta_scale;
  j["margin"] = c.margin;
  if (c.dataset) j["dataset"] = *c.dataset;
  j["intervals"] = c.intervals;
  j["inner"] = c.inner;
  j["outer"] = c.outer;
  j["train_size"] = c.train_size;
  j["test_size"] = c.test_size;
  if (c.arch) j["arch"] = *c.arch;
  if (c.n_train) j["n_train"] = *c.n_train;
  j["n_test"] = c.n_test;
  if (c.epochs) j["epochs"] = *c.epochs;
  j["learning_rate"] = c.learning_rate;
  j["momentum"] = c.momentum;
  if (c.weight_decay) j["weight_decay"] = *c.weight_decay;
  j["batch_size"] = c.batch_size;
  j["tau"] = c.tau;
  if (c.init_gain) j["init_gain"] = *c.init_gain;
  if (c.cosine_schedule) j["cosine_schedule"] = *c.cosine_schedule;
  j["hidden"] = c.hidden;
  j["m"] = c.m;
  j["dropout"] = c.dropout;
  j["eval_every"] = c.eval_every;
  j["seed"] = c.seed;
  if (c.repeats) j["repeats"] = *c.repeats;
  j["grid_points"] = c.grid_points;
  j["grid_samples"] = c.grid_samples;
  j["max_seconds"] = c.max_seconds;
  return j;
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

template <typename T>
void read(const json& j, const char* key, std::optional<T>& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
  const json& j = doc.contains("config") && doc.at("config").is_object() ? doc.at("config") : doc;
  require(j.is_object(), "configuration must be a JSON object");
  ExperimentConfig c;
  try {
    read(j, "kind", c.kind);
    read(j, "dim", c.dim);
    read(j, "radius", c.radius);
    read(j, "alpha", c.alpha);
    read(j, "samples", c.samples);
    read(j, "points", c.points);
    read(j, "phi", c.phi);
    read(j, "eps", c.eps);
    read(j, "target_fn", c.target_fn);
    read(j, "lipschitz", c.lipschitz);
    read(j, "zeta_scale", c.zeta_scale);
    read(j, "margin", c.margin);
    read(j, "dataset", c.dataset);
    read(j, "intervals", c.intervals);
    read(j, "inner", c.inner);
    read(j, "outer", c.outer);
    read(j, "train_size", c.train_size);
    read(j, "test_size", c.test_size);
    read(j, "arch", c.arch);
    read(j, "n_train", c.n_train);
    read(j, "n_test", c.n_test);
    read(j, "epochs", c.epochs);
    read(j, "learning_rate", c.learning_rate);
    read(j, "momentum", c.momentum);
    read(j, "weight_decay", c.weight_decay);
    read(j, "batch_size", c.batch_size);
    read(j, "tau", c.tau);
    read(j, "init_gain", c.init_gain);
    read(j, "cosine_schedule", c.cosine_schedule);
    read(j, "hidden", c.hidden);
    read(j, "m", c.m);
    read(j, "dropout", c.dropout);
    read(j, "eval_every", c.eval_every);
    read(j, "seed", c.seed);
    read(j, "repeats", c.repeats);
    read(j, "grid_points", c.grid_points);
    read(j, "grid_samples", c.grid_samples);
    read(j, "max_seconds", c.max_seconds);
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid configuration field: ") + e.what());
  }
  return c;
}

}  // namespace cfnn::harness
