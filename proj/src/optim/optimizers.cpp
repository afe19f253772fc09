#include <algorithm>
#include <cmath>
#include <numeric>

#include "stlc/optim.hpp"

namespace stlc::optim {

void Hyper::validate() const {
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ContractError("betas must lie in [0, 1)");
  if (!(adafactor_beta1 >= 0.0 && adafactor_beta1 < 1.0))
    throw ContractError("adafactor beta1 must lie in [0, 1)");
  if (!(eps > 0.0) || !(adafactor_eps1 > 0.0) || !(adafactor_eps2 > 0.0))
    throw ContractError("epsilons must be positive");
  if (!(clip_threshold > 0.0)) throw ContractError("clip threshold must be positive");
  if (!(decay_rate < 0.0)) throw ContractError("adafactor decay rate must be negative");
  if (!(weight_decay >= 0.0)) throw ContractError("weight decay must be non-negative");
}

namespace {

void check_inputs(std::span<const double> params, std::span<const double> grads) {
  if (params.size() != grads.size())
    throw ContractError("parameter and gradient sizes differ");
  for (double g : grads)
    if (!std::isfinite(g)) throw DivergenceError("non-finite gradient");
}

template <typename State>
void ensure_moments(State& s, std::size_t n) {
  if (s.m.empty()) {
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
  } else if (s.m.size() != n) {
    throw ContractError("optimizer state was built for a different parameter count");
  }
}

template <typename State>
void update_moments(State& s, std::span<const double> grads, const Hyper& h) {
  for (std::size_t i = 0; i < grads.size(); ++i) {
    s.m[i] = h.beta1 * s.m[i] + (1.0 - h.beta1) * grads[i];
    s.v[i] = h.beta2 * s.v[i] + (1.0 - h.beta2) * grads[i] * grads[i];
  }
}

void apply_weight_decay(std::vector<double>& delta, std::span<const double> params,
                        double weight_decay, double lr) {
  if (weight_decay == 0.0) return;
  for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= lr * weight_decay * params[i];
}

}  // namespace

double rms(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq / static_cast<double>(v.size()));
}

std::vector<double> adam_step(AdamState& state, std::span<const double> params,
                              std::span<const double> grads, const Hyper& hyper, double lr) {
  check_inputs(params, grads);
  ensure_moments(state, grads.size());
  const long t = ++state.step;
  update_moments(state, grads, hyper);
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(t));
  std::vector<double> delta(grads.size());
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    delta[i] = -lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
  apply_weight_decay(delta, params, hyper.weight_decay, lr);
  return delta;
}

double radam_rho_inf(double beta2) { return 2.0 / (1.0 - beta2) - 1.0; }

double radam_rho(long step, double beta2) {
  const double bt = std::pow(beta2, static_cast<double>(step));
  return radam_rho_inf(beta2) - 2.0 * static_cast<double>(step) * bt / (1.0 - bt);
}

std::optional<double> radam_rectifier(long step, double beta2) {
  const double rho_inf = radam_rho_inf(beta2);
  const double rho = radam_rho(step, beta2);
  if (!(rho > 4.0)) return std::nullopt;
  return std::sqrt((rho - 4.0) * (rho - 2.0) * rho_inf / ((rho_inf - 4.0) * (rho_inf - 2.0) * rho));
}

std::vector<double> radam_step(RAdamState& state, std::span<const double> params,
                               std::span<const double> grads, const Hyper& hyper, double lr) {
  check_inputs(params, grads);
  ensure_moments(state, grads.size());
  const long t = ++state.step;
  update_moments(state, grads, hyper);
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(t));
  const auto rect = radam_rectifier(t, hyper.beta2);
  std::vector<double> delta(grads.size());
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double m_hat = state.m[i] / bc1;
    if (rect) {
      const double v_hat = state.v[i] / bc2;
      delta[i] = -lr * *rect * m_hat / (std::sqrt(v_hat) + hyper.eps);
    } else {
      delta[i] = -lr * m_hat;
    }
  }
  apply_weight_decay(delta, params, hyper.weight_decay, lr);
  return delta;
}

std::vector<double> row_means(std::span<const double> m, std::size_t rows, std::size_t cols) {
  std::vector<double> out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols; ++j) s += m[i * cols + j];
    out[i] = s / static_cast<double>(cols);
  }
  return out;
}

std::vector<double> col_means(std::span<const double> m, std::size_t rows, std::size_t cols) {
  std::vector<double> out(cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j] += m[i * cols + j];
  for (double& x : out) x /= static_cast<double>(rows);
  return out;
}

std::vector<double> reconstruct_second_moment(std::span<const double> row,
                                              std::span<const double> col) {
  const double row_mean =
      std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
  std::vector<double> out(row.size() * col.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double r = row[i] / row_mean;
    for (std::size_t j = 0; j < col.size(); ++j) out[i * col.size() + j] = r * col[j];
  }
  return out;
}

double adafactor_relative_step(const Hyper& hyper, long step) {
  const double t = static_cast<double>(step);
  const double cap = hyper.warmup_init ? 1e-6 * t : 1e-2;
  return std::min(cap, 1.0 / std::sqrt(t));
}

std::vector<double> adafactor_step(AdafactorState& state, std::span<const double> params,
                                   std::span<const double> grads, const Shape& shape,
                                   const Hyper& hyper, double step_size) {
  check_inputs(params, grads);
  if (grads.size() != shape.size()) throw ContractError("gradient size does not match shape");
  const std::size_t n = grads.size();
  const long t = ++state.step;

  const double lr = step_size * (hyper.scale_parameter ? std::max(hyper.adafactor_eps2, rms(params)) : 1.0);
  const double beta2t = 1.0 - std::pow(static_cast<double>(t), hyper.decay_rate);

  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = grads[i] * grads[i] + hyper.adafactor_eps1;

  std::vector<double> update(n);
  if (shape.matrix) {
    if (state.row.empty()) {
      state.row.assign(shape.rows, 0.0);
      state.col.assign(shape.cols, 0.0);
    }
    const auto rm = row_means(sq, shape.rows, shape.cols);
    const auto cm = col_means(sq, shape.rows, shape.cols);
    for (std::size_t i = 0; i < shape.rows; ++i)
      state.row[i] = beta2t * state.row[i] + (1.0 - beta2t) * rm[i];
    for (std::size_t j = 0; j < shape.cols; ++j)
      state.col[j] = beta2t * state.col[j] + (1.0 - beta2t) * cm[j];
    const auto v_hat = reconstruct_second_moment(state.row, state.col);
    for (std::size_t i = 0; i < n; ++i) update[i] = grads[i] / std::sqrt(v_hat[i]);
  } else {
    if (state.v.empty()) state.v.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      state.v[i] = beta2t * state.v[i] + (1.0 - beta2t) * sq[i];
      update[i] = grads[i] / std::sqrt(state.v[i]);
    }
  }

  const double clip = std::max(1.0, rms(update) / hyper.clip_threshold);
  for (double& u : update) u = u / clip * lr;

  if (hyper.adafactor_beta1 > 0.0) {
    if (state.m.empty()) state.m.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      state.m[i] = hyper.adafactor_beta1 * state.m[i] + (1.0 - hyper.adafactor_beta1) * update[i];
      update[i] = state.m[i];
    }
  }

  std::vector<double> delta(n);
  for (std::size_t i = 0; i < n; ++i) delta[i] = -update[i];
  apply_weight_decay(delta, params, hyper.weight_decay, lr);
  return delta;
}

}  // namespace stlc::optim
