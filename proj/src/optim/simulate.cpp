#include <cmath>
#include <sstream>

#include "stlc/generator.hpp"
#include "stlc/optim.hpp"

namespace stlc::optim {

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "radam") return OptimizerKind::RAdam;
  if (name == "adafactor") return OptimizerKind::Adafactor;
  throw ContractError("unknown optimizer '" + std::string(name) + "'");
}

Objective parse_objective(std::string_view name) {
  if (name == "bowl") return Objective::Bowl;
  if (name == "illcond") return Objective::IllConditioned;
  if (name == "rosenbrock") return Objective::Rosenbrock;
  throw ContractError("unknown objective '" + std::string(name) + "'");
}

namespace {

constexpr std::size_t kIllConditionedDim = 8;

// Curvatures spread log-uniformly over [1, 1e3].
double curvature(std::size_t i) {
  return std::pow(10.0, 3.0 * static_cast<double>(i) / static_cast<double>(kIllConditionedDim - 1));
}

void check_size(Objective obj, std::span<const double> x) {
  if (x.size() != objective_shape(obj).size())
    throw ContractError("point has the wrong dimension for this objective");
}

}  // namespace

Shape objective_shape(Objective obj) {
  switch (obj) {
    case Objective::Bowl:
      return Shape::matrix_of(4, 4);
    case Objective::IllConditioned:
      return Shape::vector(kIllConditionedDim);
    case Objective::Rosenbrock:
      return Shape::vector(2);
  }
  throw ContractError("unknown objective");
}

double objective_loss(Objective obj, std::span<const double> x) {
  check_size(obj, x);
  switch (obj) {
    case Objective::Bowl: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return 0.5 * s;
    }
    case Objective::IllConditioned: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += curvature(i) * x[i] * x[i];
      return 0.5 * s;
    }
    case Objective::Rosenbrock: {
      const double a = 1.0 - x[0];
      const double b = x[1] - x[0] * x[0];
      return a * a + 100.0 * b * b;
    }
  }
  throw ContractError("unknown objective");
}

std::vector<double> objective_grad(Objective obj, std::span<const double> x) {
  check_size(obj, x);
  std::vector<double> g(x.size());
  switch (obj) {
    case Objective::Bowl:
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i];
      break;
    case Objective::IllConditioned:
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = curvature(i) * x[i];
      break;
    case Objective::Rosenbrock: {
      const double b = x[1] - x[0] * x[0];
      g[0] = -2.0 * (1.0 - x[0]) - 400.0 * x[0] * b;
      g[1] = 200.0 * b;
      break;
    }
  }
  return g;
}

std::vector<double> objective_minimum(Objective obj) {
  std::vector<double> x(objective_shape(obj).size(), 0.0);
  if (obj == Objective::Rosenbrock) x = {1.0, 1.0};
  return x;
}

std::vector<double> objective_start(Objective obj, std::uint64_t seed) {
  Rng rng(mix64(seed));
  std::vector<double> x(objective_shape(obj).size());
  const double half_width = obj == Objective::Rosenbrock ? 1.5 : 1.0;
  for (double& v : x) v = half_width * (2.0 * rng.unit() - 1.0);
  return x;
}

std::string Trajectory::csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "step,loss,lr,diverged\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool flag = diverged && i + 1 == rows.size();
    out << rows[i].step << ',' << rows[i].loss << ',' << rows[i].lr << ',' << (flag ? 1 : 0) << '\n';
  }
  return out.str();
}

Trajectory simulate(const SimConfig& cfg) {
  cfg.hyper.validate();
  if (cfg.steps < 0) throw ContractError("steps must be >= 0");
  const Shape shape = objective_shape(cfg.objective);
  std::vector<double> x = cfg.start ? *cfg.start : objective_start(cfg.objective, cfg.seed);
  if (x.size() != shape.size()) throw ContractError("start point has the wrong dimension");

  OptimizerState state;
  switch (cfg.optimizer) {
    case OptimizerKind::Adam: state = AdamState{}; break;
    case OptimizerKind::RAdam: state = RAdamState{}; break;
    case OptimizerKind::Adafactor: state = AdafactorState{}; break;
  }

  Trajectory traj;
  for (long t = 1; t <= cfg.steps; ++t) {
    const double lr = schedule_value(cfg.schedule, t, cfg.epoch_iters);
    std::vector<double> delta;
    try {
      const auto g = objective_grad(cfg.objective, x);
      delta = std::visit(
          [&](auto& s) -> std::vector<double> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, AdamState>)
              return adam_step(s, x, g, cfg.hyper, lr);
            else if constexpr (std::is_same_v<S, RAdamState>)
              return radam_step(s, x, g, cfg.hyper, lr);
            else
              return adafactor_step(s, x, g, shape, cfg.hyper, lr);
          },
          state);
    } catch (const DivergenceError&) {
      traj.rows.push_back({t, std::nan(""), lr});
      traj.diverged = true;
      break;
    }
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += delta[i];
    const double loss = objective_loss(cfg.objective, x);
    traj.rows.push_back({t, loss, lr});
    if (!std::isfinite(loss) || loss > cfg.divergence_loss) {
      traj.diverged = true;
      break;
    }
  }
  return traj;
}

}  // namespace stlc::optim
