// cfnn command-line driver.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfnn/error.hpp"
#include "cfnn/harness/config.hpp"
#include "cfnn/harness/experiments.hpp"
#include "cfnn/harness/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      throw cfnn::DomainError("--n-test expects a comma-separated list of positive integers, got '" + text + "'");
    }
    cfnn::require(pos == item.size() && v > 0,
                  "--n-test expects a comma-separated list of positive integers, got '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  cfnn::require(!out.empty(), "--n-test list is empty");
  return out;
}

cfnn::harness::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cfnn::DomainError("cannot read config file '" + path + "'");
  try {
    return cfnn::harness::config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw cfnn::DomainError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coin-flipping neural network experiments"};
  std::string kind;
  std::size_t dim = 0, samples = 0, points = 0, n_train = 0, epochs = 0, repeats = 0;
  double radius = 0, alpha = 0, phi = 0, eps = 0, lipschitz = 0, max_seconds = 0;
  std::string target_fn, dataset, arch, n_test, out, format = "json", config_path, save_dataset, checkpoint;
  std::uint64_t seed = 0;

  app.add_option("kind", kind, "ball | tangent | cone | mse | train | sweep | gtilde");
  app.add_option("--dim", dim, "input dimension d");
  app.add_option("--radius", radius, "ball radius R");
  app.add_option("--alpha", alpha, "Bernoulli rate, in (1/2, 1)");
  app.add_option("--samples", samples, "samples per point (n)");
  app.add_option("--points", points, "dataset or grid size");
  app.add_option("--phi", phi, "excluded band half-width around the sphere");
  app.add_option("--eps", eps, "MSE target");
  app.add_option("--target-fn", target_fn, "zero | linear | sin | abs-saw");
  app.add_option("--lipschitz", lipschitz, "Lipschitz constant K");
  app.add_option("--dataset", dataset, "shell | circles | moons | blobs");
  app.add_option("--arch", arch, "hypernet | dropout | plain");
  app.add_option("--n-train", n_train, "forward samples per training loss");
  app.add_option("--n-test", n_test, "comma-separated test sample counts");
  app.add_option("--epochs", epochs, "training epochs");
  app.add_option("--seed", seed, "root seed");
  app.add_option("--repeats", repeats, "evaluation or training repeats");
  app.add_option("--max-seconds", max_seconds, "wall-clock cap");
  app.add_option("--config", config_path, "JSON config or report to rerun");
  app.add_option("--out", out, "output path (stdout if omitted)");
  app.add_option("--format", format, "json | csv");
  app.add_option("--save-dataset", save_dataset, "write the generated dataset as CSV");
  app.add_option("--checkpoint", checkpoint, "write the trained model as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    cfnn::harness::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (!kind.empty()) cfg.kind = kind;
    cfnn::require(!cfg.kind.empty(), "missing experiment kind (ball, tangent, cone, mse, train, sweep or gtilde)");
    if (app.count("--dim")) cfg.dim = dim;
    if (app.count("--radius")) cfg.radius = radius;
    if (app.count("--alpha")) cfg.alpha = alpha;
    if (app.count("--samples")) cfg.samples = samples;
    if (app.count("--points")) cfg.points = points;
    if (app.count("--phi")) cfg.phi = phi;
    if (app.count("--eps")) cfg.eps = eps;
    if (app.count("--target-fn")) cfg.target_fn = target_fn;
    if (app.count("--lipschitz")) cfg.lipschitz = lipschitz;
    if (app.count("--dataset")) cfg.dataset = dataset;
    if (app.count("--arch")) cfg.arch = arch;
    if (app.count("--n-train")) cfg.n_train = n_train;
    if (app.count("--n-test")) cfg.n_test = parse_list(n_test);
    if (app.count("--epochs")) cfg.epochs = epochs;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--repeats")) cfg.repeats = repeats;
    if (app.count("--max-seconds")) cfg.max_seconds = max_seconds;
    cfg.format = format;
    cfg.out = out;

    const auto resolved = cfg.resolve();
    resolved.validate();
    const cfnn::harness::RunOptions opts{checkpoint, save_dataset};
    const auto report = cfnn::harness::run_experiment(resolved, opts);
    cfnn::harness::write_report(report, out, format);
    return 0;
  } catch (const cfnn::DomainError& e) {
    std::cerr << "cfnn: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cfnn::RuntimeFailure& e) {
    std::cerr << "cfnn: runtime error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "cfnn: runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
