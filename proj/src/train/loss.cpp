#include "cfnn/train/loss.hpp"

#include <cmath>

#include "cfnn/error.hpp"

namespace cfnn::train {

std::vector<double> gumbel_softmax(std::span<const double> logits, double tau) {
  require(tau > 0.0, "temperature must be positive");
  return softmax(logits, tau);
}

CrossEntropy cross_entropy(std::span<const double> p, std::size_t y) {
  require(y < p.size(), "label out of range");
  if (p[y] < kProbabilityFloor) return {-std::log(kProbabilityFloor), true};
  return {-std::log(p[y]), false};
}

std::vector<double> estimate_ptilde(const Model& model, std::span<const double> x, std::size_t n, double tau,
                                    const RngStream& rng) {
  require(n >= 1, "estimate_ptilde needs n >= 1");
  require(tau > 0.0, "temperature must be positive");
  std::vector<double> acc(model.num_classes(), 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    RngStream s = rng.split(j);
    const auto probs = gumbel_softmax(model.logits(x, model.draw(s)), tau);
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += probs[c];
  }
  for (double& v : acc) v /= static_cast<double>(n);
  return acc;
}

LossValue ptilde_loss(Model& model, const Matrix& x, std::span<const std::size_t> y,
                      std::span<const RandomDraw> draws, double tau, double row_weight, bool backprop) {
  require(!draws.empty(), "loss needs at least one draw");
  require(tau > 0.0, "temperature must be positive");
  require(y.size() == x.rows, "one label per row is required");
  const std::size_t n = draws.size();
  const std::size_t C = model.num_classes();
  const std::size_t B = x.rows;

  std::vector<Tape> tapes(backprop ? n : 0);
  std::vector<Matrix> probs(n);
  Matrix ptilde(B, C);
  for (std::size_t j = 0; j < n; ++j) {
    const Matrix logits = model.forward(x, draws[j], backprop ? &tapes[j] : nullptr);
    probs[j] = Matrix(B, C);
    for (std::size_t r = 0; r < B; ++r) {
      const auto s = softmax(logits.row(r), tau);
      for (std::size_t c = 0; c < C; ++c) {
        probs[j](r, c) = s[c];
        ptilde(r, c) += s[c] / static_cast<double>(n);
      }
    }
  }

  LossValue value;
  std::vector<double> coeff(B, 0.0);
  for (std::size_t r = 0; r < B; ++r) {
    require(y[r] < C, "label out of range");
    const CrossEntropy ce = cross_entropy(ptilde.row(r), y[r]);
    value.loss += row_weight * ce.loss;
    if (ce.floored) {
      ++value.floored;
    } else {
      // d(-ln p~_y)/d s_{j,y} = -1 / (n p~_y)
      coeff[r] = -row_weight / (static_cast<double>(n) * ptilde(r, y[r]));
    }
  }
  if (!std::isfinite(value.loss)) return value;

  if (backprop) {
    for (std::size_t j = 0; j < n; ++j) {
      // d s_y / d o = (1/tau) s_y (e_y - s)
      Matrix dlogits(B, C);
      for (std::size_t r = 0; r < B; ++r) {
        if (coeff[r] == 0.0) continue;
        const double sy = probs[j](r, y[r]);
        for (std::size_t c = 0; c < C; ++c) {
          const double indicator = c == y[r] ? 1.0 : 0.0;
          dlogits(r, c) = coeff[r] * sy * (indicator - probs[j](r, c)) / tau;
        }
      }
      model.backward(tapes[j], dlogits);
    }
  }
  return value;
}

}  // namespace cfnn::train
