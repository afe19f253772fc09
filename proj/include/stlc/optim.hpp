#pragma once

// Adam, RAdam and Adafactor updates, learning-rate schedules, and a small
// simulation harness on analytic objectives.
//
// Each step function advances its state by one step and returns the
// parameter delta; callers add the delta to the parameters themselves.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stlc/errors.hpp"

namespace stlc::optim {

// Matrices get factored Adafactor statistics; vectors do not, whatever their
// length.
struct Shape {
  std::size_t rows = 1;
  std::size_t cols = 1;
  bool matrix = false;

  static Shape vector(std::size_t n) { return {n, 1, false}; }
  static Shape matrix_of(std::size_t r, std::size_t c) { return {r, c, true}; }
  std::size_t size() const { return rows * cols; }
};

struct Hyper {
  // Adam / RAdam
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // decoupled

  // Adafactor, Hugging Face configuration
  double adafactor_eps1 = 1e-30;  // added to g^2
  double adafactor_eps2 = 1e-3;   // floor on RMS(theta) when scaling
  double clip_threshold = 1.0;
  double decay_rate = -0.8;
  double adafactor_beta1 = 0.0;  // 0 disables the first moment
  bool scale_parameter = true;
  bool relative_step = true;
  bool warmup_init = false;

  void validate() const;
};

struct AdamState {
  long step = 0;
  std::vector<double> m, v;
};

struct RAdamState {
  long step = 0;
  std::vector<double> m, v;
};

struct AdafactorState {
  long step = 0;
  std::vector<double> row, col;  // matrix parameters
  std::vector<double> v;         // everything else
  std::vector<double> m;         // only with adafactor_beta1 > 0
};

using OptimizerState = std::variant<AdamState, RAdamState, AdafactorState>;

// All three throw DivergenceError on a non-finite gradient.
std::vector<double> adam_step(AdamState& state, std::span<const double> params,
                              std::span<const double> grads, const Hyper& hyper, double lr);

std::vector<double> radam_step(RAdamState& state, std::span<const double> params,
                               std::span<const double> grads, const Hyper& hyper, double lr);

// `step_size` is the relative step rho_t (or the plain learning rate when
// relative steps are off); it is multiplied by max(eps2, RMS(theta)) when
// scale_parameter is set.
std::vector<double> adafactor_step(AdafactorState& state, std::span<const double> params,
                                   std::span<const double> grads, const Shape& shape,
                                   const Hyper& hyper, double step_size);

// min(1e-2, 1/sqrt(t)), or min(1e-6 t, 1/sqrt(t)) with warmup_init.
double adafactor_relative_step(const Hyper& hyper, long step);

double radam_rho_inf(double beta2);
double radam_rho(long step, double beta2);
// Variance rectifier r_t; nullopt while rho_t <= 4 (momentum-only phase).
std::optional<double> radam_rectifier(long step, double beta2);

// Row means (length rows) and column means (length cols) of a row-major matrix.
std::vector<double> row_means(std::span<const double> m, std::size_t rows, std::size_t cols);
std::vector<double> col_means(std::span<const double> m, std::size_t rows, std::size_t cols);
// outer(row, col) / mean(row): the factored estimate of the squared gradient.
std::vector<double> reconstruct_second_moment(std::span<const double> row,
                                              std::span<const double> col);

double rms(std::span<const double> v);

// --- schedules ---

struct Constant {
  double lr;
};

// target * min(1, step / k); k = 0 means no warm-up.
struct LinearWarmup {
  double target_lr;
  long warmup_steps;
};

// coeff * min(step^-0.5, step / knee)
struct VaswaniNoam {
  double coeff = 0.0325;
  double knee = 252982.0;
  // coeff = d_model^-0.5, knee = warmup^1.5
  static VaswaniNoam from_model(int d_model, long warmup_steps);
};

// Relative-step decay advanced once every `call_every` steps; call_every = 0
// derives min(epoch_iters, 2 / (1 - beta2)).
struct AdafactorAnneal {
  double beta2 = 0.999;
  long call_every = 0;
};

using Schedule = std::variant<Constant, LinearWarmup, VaswaniNoam, AdafactorAnneal>;

long anneal_cadence(long epoch_iters, double beta2);

// ContractError for step < 1.
double schedule_value(const Schedule& s, long step, long epoch_iters);

// "const", "warmup:K", "noam", "anneal" or "anneal:N" (explicit cadence).
Schedule parse_schedule(std::string_view spec, double lr);

// --- defaults file ---

struct Defaults {
  Hyper hyper;
  VaswaniNoam noam;
  double anneal_beta2 = 0.999;
  long epoch_iters = 78;
  double divergence_loss = 1e12;
};

// key=value lines, '#' comments. Unknown keys are a ContractError.
Defaults parse_defaults(std::string_view text);
std::string format_defaults(const Defaults& d);

// --- simulation ---

enum class OptimizerKind { Adam, RAdam, Adafactor };
enum class Objective { Bowl, IllConditioned, Rosenbrock };

OptimizerKind parse_optimizer(std::string_view name);
Objective parse_objective(std::string_view name);

Shape objective_shape(Objective obj);
double objective_loss(Objective obj, std::span<const double> x);
std::vector<double> objective_grad(Objective obj, std::span<const double> x);
std::vector<double> objective_minimum(Objective obj);
std::vector<double> objective_start(Objective obj, std::uint64_t seed);

struct SimConfig {
  OptimizerKind optimizer = OptimizerKind::Adam;
  Hyper hyper;
  Schedule schedule = Constant{1e-3};
  Objective objective = Objective::Bowl;
  long steps = 1000;
  std::uint64_t seed = 0;
  long epoch_iters = 78;
  double divergence_loss = 1e12;
  std::optional<std::vector<double>> start;
};

struct TrajectoryRow {
  long step;
  double loss;
  double lr;
};

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  bool diverged = false;

  // step,loss,lr,diverged
  std::string csv() const;
};

// Stops at the first non-finite loss, loss above divergence_loss, or
// non-finite gradient, and flags the trajectory as diverged.
Trajectory simulate(const SimConfig& cfg);

}  // namespace stlc::optim
