#include "cfnn/train/net.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfnn/error.hpp"
#include "cfnn/simd/kernels.hpp"
#include "cfnn/train/complexity.hpp"

namespace cfnn::train {

std::string layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::dense:
      return "dense";
    case LayerKind::tanh:
      return "tanh";
    case LayerKind::relu:
      return "relu";
    case LayerKind::dropout:
      return "dropout";
    case LayerKind::concat_random:
      return "concat_random";
  }
  return "unknown";
}

LayerKind layer_kind_from_name(const std::string& name) {
  for (LayerKind k : {LayerKind::dense, LayerKind::tanh, LayerKind::relu, LayerKind::dropout,
                      LayerKind::concat_random}) {
    if (layer_kind_name(k) == name) return k;
  }
  throw DomainError("unknown layer kind '" + name + "'");
}

MlpCore::MlpCore(std::size_t input_dim, std::vector<LayerSpec> layers)
    : input_dim_(input_dim), layers_(std::move(layers)) {
  require(input_dim_ >= 1, "network input dimension must be at least 1");
  std::size_t width = input_dim_;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const LayerSpec& spec = layers_[k];
    in_widths_.push_back(width);
    offsets_.push_back(num_params_);
    port_of_layer_.push_back(static_cast<std::size_t>(-1));
    switch (spec.kind) {
      case LayerKind::dense:
        require(spec.width >= 1, "dense layer needs a positive width");
        num_params_ += spec.width * width + spec.width;
        width = spec.width;
        break;
      case LayerKind::tanh:
      case LayerKind::relu:
        break;
      case LayerKind::dropout:
        require(spec.rate >= 0.0 && spec.rate < 1.0, "dropout rate must lie in [0, 1)");
        port_of_layer_.back() = port_layers_.size();
        port_layers_.push_back(k);
        break;
      case LayerKind::concat_random:
        require(spec.width >= 1, "concat_random needs a positive width");
        port_of_layer_.back() = port_layers_.size();
        port_layers_.push_back(k);
        width += spec.width;
        break;
    }
    widths_.push_back(width);
  }
  output_dim_ = width;
}

void MlpCore::init_params(std::span<double> params, RngStream& rng, double gain) const {
  require(params.size() == num_params_, "parameter buffer has the wrong size");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    if (layers_[k].kind != LayerKind::dense) continue;
    const std::size_t in = in_widths_[k];
    const std::size_t out = layers_[k].width;
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    double* w = params.data() + offsets_[k];
    for (std::size_t i = 0; i < out * in; ++i) w[i] = gain * bound * (2.0 * rng.uniform() - 1.0);
    for (std::size_t i = 0; i < out; ++i) w[out * in + i] = bound * (2.0 * rng.uniform() - 1.0);
  }
}

RandomDraw MlpCore::draw(RngStream& rng, std::optional<double> rate_override) const {
  if (rate_override) require(*rate_override >= 0.0 && *rate_override < 1.0, "dropout rate must lie in [0, 1)");
  RandomDraw d;
  d.ports.reserve(port_layers_.size());
  for (std::size_t k : port_layers_) {
    const LayerSpec& spec = layers_[k];
    if (spec.kind == LayerKind::dropout) {
      const double p = rate_override.value_or(spec.rate);
      const double keep_scale = 1.0 / (1.0 - p);
      std::vector<double> mask(in_widths_[k]);
      for (double& m : mask) m = rng.uniform() < p ? 0.0 : keep_scale;
      d.ports.push_back(std::move(mask));
    } else {
      std::vector<double> z(spec.width);
      for (double& v : z) v = rng.uniform();
      d.ports.push_back(std::move(z));
    }
  }
  return d;
}

RandomDraw MlpCore::mean_draw() const {
  RandomDraw d;
  for (std::size_t k : port_layers_) {
    const LayerSpec& spec = layers_[k];
    if (spec.kind == LayerKind::dropout) {
      d.ports.emplace_back(in_widths_[k], 1.0);
    } else {
      d.ports.emplace_back(spec.width, 0.5);
    }
  }
  return d;
}

Matrix MlpCore::forward(std::span<const double> params, const Matrix& x, const RandomDraw& draw,
                        Tape* tape) const {
  require(params.size() == num_params_, "parameter buffer has the wrong size");
  require(x.cols == input_dim_, "network expects inputs of dimension " + std::to_string(input_dim_) + ", got " +
                                    std::to_string(x.cols));
  require(draw.ports.size() == port_layers_.size(), "random draw has the wrong number of ports");
  if (tape != nullptr) {
    tape->values.clear();
    tape->values.reserve(layers_.size() + 1);
    tape->draw = draw;
  }
  Matrix cur = x;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const LayerSpec& spec = layers_[k];
    Matrix next;
    switch (spec.kind) {
      case LayerKind::dense: {
        const std::size_t in = in_widths_[k];
        const double* w = params.data() + offsets_[k];
        next = affine(cur, {w, spec.width * in}, {w + spec.width * in, spec.width}, spec.width);
        break;
      }
      case LayerKind::tanh:
        next = cur;
        for (double& v : next.data) v = std::tanh(v);
        break;
      case LayerKind::relu:
        next = cur;
        for (double& v : next.data) v = std::max(0.0, v);
        break;
      case LayerKind::dropout: {
        const auto& mask = draw.ports[port_of_layer_[k]];
        require(mask.size() == cur.cols, "dropout mask has the wrong width");
        next = cur;
        for (std::size_t r = 0; r < next.rows; ++r) {
          auto row = next.row(r);
          for (std::size_t c = 0; c < next.cols; ++c) row[c] *= mask[c];
        }
        break;
      }
      case LayerKind::concat_random: {
        const auto& z = draw.ports[port_of_layer_[k]];
        require(z.size() == spec.width, "random input has the wrong width");
        next = Matrix(cur.rows, cur.cols + spec.width);
        for (std::size_t r = 0; r < cur.rows; ++r) {
          auto src = cur.row(r);
          auto dst = next.row(r);
          std::copy(src.begin(), src.end(), dst.begin());
          std::copy(z.begin(), z.end(), dst.begin() + static_cast<std::ptrdiff_t>(cur.cols));
        }
        break;
      }
    }
    if (tape != nullptr) tape->values.push_back(std::move(cur));
    cur = std::move(next);
  }
  if (tape != nullptr) tape->values.push_back(cur);
  return cur;
}

Matrix MlpCore::backward(std::span<const double> params, std::span<double> grads, const Tape& tape,
                         const Matrix& dout) const {
  require(grads.size() == num_params_, "gradient buffer has the wrong size");
  require(tape.values.size() == layers_.size() + 1, "tape does not match this network");
  const auto& kern = simd::kernels();
  Matrix g = dout;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    const LayerSpec& spec = layers_[k];
    const Matrix& in = tape.values[k];
    const Matrix& out = tape.values[k + 1];
    switch (spec.kind) {
      case LayerKind::dense: {
        const std::size_t nin = in_widths_[k];
        const double* w = params.data() + offsets_[k];
        double* gw = grads.data() + offsets_[k];
        double* gb = gw + spec.width * nin;
        Matrix gin(in.rows, nin);
        for (std::size_t r = 0; r < in.rows; ++r) {
          const double* gr = g.data.data() + r * spec.width;
          kern.ger_acc(gw, spec.width, nin, 1.0, gr, in.data.data() + r * nin);
          for (std::size_t o = 0; o < spec.width; ++o) gb[o] += gr[o];
          kern.gemv_t_acc(w, spec.width, nin, gr, gin.data.data() + r * nin);
        }
        g = std::move(gin);
        break;
      }
      case LayerKind::tanh:
        for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] *= 1.0 - out.data[i] * out.data[i];
        break;
      case LayerKind::relu:
        for (std::size_t i = 0; i < g.data.size(); ++i) {
          if (in.data[i] <= 0.0) g.data[i] = 0.0;
        }
        break;
      case LayerKind::dropout: {
        const auto& mask = tape.draw.ports[port_of_layer_[k]];
        for (std::size_t r = 0; r < g.rows; ++r) {
          auto row = g.row(r);
          for (std::size_t c = 0; c < g.cols; ++c) row[c] *= mask[c];
        }
        break;
      }
      case LayerKind::concat_random: {
        Matrix gin(g.rows, in.cols);
        for (std::size_t r = 0; r < g.rows; ++r) {
          auto src = g.row(r);
          std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(in.cols), gin.row(r).begin());
        }
        g = std::move(gin);
        break;
      }
    }
  }
  return g;
}

void Model::zero_grad() {
  auto g = grads();
  std::fill(g.begin(), g.end(), 0.0);
}

std::vector<double> Model::logits(std::span<const double> x, const RandomDraw& draw) const {
  return forward(Matrix::from_row(x), draw).data;
}

CfnnNet::CfnnNet(std::size_t input_dim, std::vector<LayerSpec> layers)
    : core_(input_dim, std::move(layers)), params_(core_.num_params(), 0.0), grads_(core_.num_params(), 0.0) {
  require(!core_.layers().empty(), "network needs at least one layer");
}

void CfnnNet::init(RngStream& rng, double gain) { core_.init_params(params_, rng, gain); }

Matrix CfnnNet::forward(const Matrix& x, const RandomDraw& draw, Tape* tape) const {
  return core_.forward(params_, x, draw, tape);
}

Matrix CfnnNet::backward(const Tape& tape, const Matrix& dlogits) {
  return core_.backward(params_, grads_, tape, dlogits);
}

std::string CfnnNet::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << "{\"type\":\"cfnn_net\",\"input_dim\":" << core_.input_dim() << ",\"layers\":[";
  for (std::size_t k = 0; k < core_.layers().size(); ++k) {
    const auto& l = core_.layers()[k];
    if (k > 0) out << ',';
    out << "{\"kind\":\"" << layer_kind_name(l.kind) << "\",\"width\":" << l.width << ",\"rate\":" << l.rate
        << '}';
  }
  out << "]}";
  return out.str();
}

NetGraph CfnnNet::graph() const { return graph_of_mlp(core_); }

std::vector<double> dropout_forward(const CfnnNet& net, std::span<const double> x, double p, RngStream& rng) {
  require(p >= 0.0 && p < 1.0, "dropout rate must lie in [0, 1)");
  return net.logits(x, net.draw_with_rate(rng, p));
}

std::vector<double> mean_mask_forward(const CfnnNet& net, std::span<const double> x, double p) {
  require(p >= 0.0 && p < 1.0, "dropout rate must lie in [0, 1)");
  return net.logits(x, net.mean_draw());
}

CfnnNet make_dropout_mlp(std::size_t input_dim, std::size_t hidden, std::size_t classes, double p,
                         LayerKind activation) {
  require(activation == LayerKind::relu || activation == LayerKind::tanh, "activation must be relu or tanh");
  const LayerSpec act{activation, 0, 0.0};
  return CfnnNet(input_dim, {LayerSpec::dense(hidden), act, LayerSpec::dropout(p), LayerSpec::dense(hidden), act,
                             LayerSpec::dropout(p), LayerSpec::dense(classes)});
}

CfnnNet make_linear(std::size_t input_dim, std::size_t classes) {
  return CfnnNet(input_dim, {LayerSpec::dense(classes)});
}

}  // namespace cfnn::train
