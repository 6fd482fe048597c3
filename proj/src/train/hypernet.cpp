#include "cfnn/train/hypernet.hpp"

#include <algorithm>
#include <sstream>

#include "cfnn/error.hpp"
#include "cfnn/numerics/sampling.hpp"
#include "cfnn/train/complexity.hpp"

namespace cfnn::train {

namespace {

std::vector<LayerSpec> generator_layers(std::size_t hidden, std::size_t out) {
  return {LayerSpec::dense(hidden), LayerSpec::tanh(), LayerSpec::dense(hidden), LayerSpec::tanh(),
          LayerSpec::dense(out)};
}

}  // namespace

Hypernet::Hypernet(HypernetSpec spec) : spec_(std::move(spec)) {
  require(spec_.input_dim >= 1, "hypernet input dimension must be at least 1");
  require(spec_.classes >= 2, "hypernet needs at least two classes");
  require(spec_.m >= 1 && spec_.hidden >= 1, "hypernet generator sizes must be positive");
  if (!spec_.class_weights.empty()) {
    require(spec_.class_weights.size() == spec_.classes, "class weights must have one entry per class");
    double total = 0.0;
    for (double w : spec_.class_weights) {
      require(w >= 0.0, "class weights must be nonnegative");
      total += w;
    }
    require(total > 0.0, "class weights must not all be zero");
  }
  const std::size_t head_in = spec_.m + spec_.classes + (spec_.two_stage ? spec_.input_dim : 0);
  g_h_ = MlpCore(head_in, generator_layers(spec_.hidden, head_param_count()));
  if (spec_.two_stage) g_e_ = MlpCore(spec_.m + spec_.classes, generator_layers(spec_.hidden, spec_.input_dim));
  const std::size_t total = g_h_.num_params() + (spec_.two_stage ? g_e_.num_params() : 0);
  params_.assign(total, 0.0);
  grads_.assign(total, 0.0);
}

void Hypernet::init(RngStream& rng, double gain) {
  g_h_.init_params(std::span<double>(params_.data(), g_h_.num_params()), rng, gain);
  if (spec_.two_stage) {
    g_e_.init_params(std::span<double>(params_.data() + g_h_.num_params(), g_e_.num_params()), rng, gain);
  }
}

RandomDraw Hypernet::draw(RngStream& rng) const {
  std::vector<double> z1(spec_.m);
  for (double& v : z1) v = rng.uniform();
  std::size_t y_bar = 0;
  if (spec_.class_weights.empty()) {
    y_bar = static_cast<std::size_t>(rng.uniform() * static_cast<double>(spec_.classes));
    y_bar = std::min(y_bar, spec_.classes - 1);
  } else {
    y_bar = numerics::sample_categorical(rng, spec_.class_weights);
  }
  std::vector<double> z2;
  if (spec_.two_stage) {
    z2.resize(spec_.m);
    for (double& v : z2) v = rng.uniform();
  }
  return make_draw(z1, z2, y_bar);
}

RandomDraw Hypernet::mean_draw() const {
  RandomDraw d;
  d.ports.emplace_back(spec_.m, 0.5);
  d.ports.emplace_back(spec_.classes, 1.0 / static_cast<double>(spec_.classes));
  if (spec_.two_stage) d.ports.emplace_back(spec_.m, 0.5);
  return d;
}

RandomDraw Hypernet::make_draw(std::span<const double> z1, std::span<const double> z2, std::size_t y_bar) const {
  require(z1.size() == spec_.m, "z1 must have length m");
  require(!spec_.two_stage || z2.size() == spec_.m, "z2 must have length m");
  require(y_bar < spec_.classes, "y_bar out of range");
  RandomDraw d;
  d.ports.emplace_back(z1.begin(), z1.end());
  std::vector<double> onehot(spec_.classes, 0.0);
  onehot[y_bar] = 1.0;
  d.ports.push_back(std::move(onehot));
  if (spec_.two_stage) d.ports.emplace_back(z2.begin(), z2.end());
  return d;
}

Matrix Hypernet::generator_input(const RandomDraw& draw, const Matrix* e_hat) const {
  const std::size_t expected_ports = spec_.two_stage ? 3 : 2;
  require(draw.ports.size() == expected_ports, "hypernet draw has the wrong number of ports");
  require(draw.ports[0].size() == spec_.m && draw.ports[1].size() == spec_.classes,
          "hypernet draw has the wrong shape");
  std::vector<double> in;
  const auto& z = spec_.two_stage ? draw.ports[2] : draw.ports[0];
  require(z.size() == spec_.m, "hypernet draw has the wrong shape");
  in.insert(in.end(), z.begin(), z.end());
  in.insert(in.end(), draw.ports[1].begin(), draw.ports[1].end());
  if (e_hat != nullptr) in.insert(in.end(), e_hat->data.begin(), e_hat->data.end());
  return Matrix::from_row(in);
}

std::vector<double> Hypernet::generate(const RandomDraw& draw) const {
  Matrix e_hat;
  if (spec_.two_stage) {
    std::vector<double> in(draw.ports.at(0));
    in.insert(in.end(), draw.ports.at(1).begin(), draw.ports.at(1).end());
    e_hat = g_e_.forward(embed_params(), Matrix::from_row(in), RandomDraw{}, nullptr);
  }
  return g_h_.forward(head_params(), generator_input(draw, spec_.two_stage ? &e_hat : nullptr), RandomDraw{}, nullptr)
      .data;
}

Matrix Hypernet::forward(const Matrix& x, const RandomDraw& draw, Tape* tape) const {
  require(x.cols == spec_.input_dim, "hypernet expects inputs of dimension " + std::to_string(spec_.input_dim));
  Tape local;
  Tape& t = tape != nullptr ? *tape : local;
  t.children.assign(2, Tape{});
  t.values.clear();
  t.draw = draw;
  Matrix e_hat;
  if (spec_.two_stage) {
    std::vector<double> in(draw.ports.at(0));
    in.insert(in.end(), draw.ports.at(1).begin(), draw.ports.at(1).end());
    e_hat = g_e_.forward(embed_params(), Matrix::from_row(in), RandomDraw{}, &t.children[0]);
  }
  const Matrix theta =
      g_h_.forward(head_params(), generator_input(draw, spec_.two_stage ? &e_hat : nullptr), RandomDraw{},
                   &t.children[1]);
  const std::size_t C = spec_.classes;
  const std::size_t E = spec_.input_dim;
  const std::span<const double> w(theta.data.data(), C * E);
  std::vector<double> neg_b(C);
  for (std::size_t c = 0; c < C; ++c) neg_b[c] = -theta.data[C * E + c];
  Matrix logits = affine(x, w, neg_b, C);
  t.values.push_back(x);
  t.values.push_back(theta);
  return logits;
}

Matrix Hypernet::backward(const Tape& tape, const Matrix& dlogits) {
  require(tape.values.size() == 2 && tape.children.size() == 2, "tape does not match this hypernet");
  const Matrix& x = tape.values[0];
  const Matrix& theta = tape.values[1];
  const std::size_t C = spec_.classes;
  const std::size_t E = spec_.input_dim;
  require(dlogits.rows == x.rows && dlogits.cols == C, "logit gradient has the wrong shape");

  Matrix dtheta(1, theta.cols);
  Matrix dx(x.rows, E);
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const double g = dlogits(r, c);
      if (g == 0.0) continue;
      for (std::size_t e = 0; e < E; ++e) {
        dtheta.data[c * E + e] += g * x(r, e);
        dx(r, e) += g * theta.data[c * E + e];
      }
      dtheta.data[C * E + c] -= g;
    }
  }
  const std::span<double> gh(grads_.data(), g_h_.num_params());
  const Matrix din = g_h_.backward(head_params(), gh, tape.children[1], dtheta);
  if (spec_.two_stage) {
    Matrix de(1, E);
    std::copy(din.data.end() - static_cast<std::ptrdiff_t>(E), din.data.end(), de.data.begin());
    const std::span<double> ge(grads_.data() + g_h_.num_params(), g_e_.num_params());
    g_e_.backward(embed_params(), ge, tape.children[0], de);
  }
  return dx;
}

std::string Hypernet::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << "{\"type\":\"hypernet\",\"input_dim\":" << spec_.input_dim << ",\"classes\":" << spec_.classes
      << ",\"m\":" << spec_.m << ",\"hidden\":" << spec_.hidden << ",\"two_stage\":" << (spec_.two_stage ? "true" : "false")
      << ",\"class_weights\":[";
  for (std::size_t k = 0; k < spec_.class_weights.size(); ++k) {
    if (k > 0) out << ',';
    out << spec_.class_weights[k];
  }
  out << "]}";
  return out.str();
}

NetGraph Hypernet::graph() const {
  NetGraph g;
  std::vector<std::size_t> x_nodes;
  for (std::size_t e = 0; e < spec_.input_dim; ++e) x_nodes.push_back(g.add_node(NodeKind::data_input, "x" + std::to_string(e)));
  auto random_columns = [&g](std::size_t n, const std::string& name) {
    std::vector<std::vector<std::size_t>> cols;
    for (std::size_t i = 0; i < n; ++i) cols.push_back({g.add_node(NodeKind::random_input, name + std::to_string(i))});
    return cols;
  };
  auto z1 = random_columns(spec_.m, "z1_");
  auto ybar = random_columns(spec_.classes, "ybar_");
  std::vector<std::vector<std::size_t>> head_in;
  if (spec_.two_stage) {
    auto z2 = random_columns(spec_.m, "z2_");
    std::vector<std::vector<std::size_t>> e_in = z1;
    e_in.insert(e_in.end(), ybar.begin(), ybar.end());
    auto e_hat = append_mlp_graph(g, g_e_, std::move(e_in), "Ge");
    head_in = z2;
    head_in.insert(head_in.end(), ybar.begin(), ybar.end());
    head_in.insert(head_in.end(), e_hat.begin(), e_hat.end());
  } else {
    head_in = z1;
    head_in.insert(head_in.end(), ybar.begin(), ybar.end());
  }
  const auto theta = append_mlp_graph(g, g_h_, std::move(head_in), "Gh");
  const std::size_t out = g.add_node(NodeKind::output, "out");
  const std::size_t C = spec_.classes;
  const std::size_t E = spec_.input_dim;
  for (std::size_t c = 0; c < C; ++c) {
    const std::size_t unit = g.add_node(NodeKind::neuron, "head" + std::to_string(c));
    for (std::size_t xn : x_nodes) g.add_edge(xn, unit);
    for (std::size_t e = 0; e < E; ++e) {
      for (std::size_t src : theta[c * E + e]) g.add_edge(src, unit, EdgeKind::generated_weight);
    }
    for (std::size_t src : theta[C * E + c]) g.add_edge(src, unit, EdgeKind::generated_weight);
    g.add_edge(unit, out);
  }
  return g;
}

std::vector<double> hypernet_forward(const Hypernet& net, std::span<const double> x, std::span<const double> z1,
                                     std::span<const double> z2, std::size_t y_bar) {
  return net.logits(x, net.make_draw(z1, z2, y_bar));
}

}  // namespace cfnn::train
