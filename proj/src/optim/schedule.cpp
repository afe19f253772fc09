#include <algorithm>
#include <charconv>
#include <cmath>

#include "stlc/optim.hpp"

namespace stlc::optim {

VaswaniNoam VaswaniNoam::from_model(int d_model, long warmup_steps) {
  if (d_model < 1 || warmup_steps < 1) throw ContractError("d_model and warmup must be >= 1");
  return {1.0 / std::sqrt(static_cast<double>(d_model)),
          std::pow(static_cast<double>(warmup_steps), 1.5)};
}

long anneal_cadence(long epoch_iters, double beta2) {
  if (epoch_iters < 1) throw ContractError("epoch_iters must be >= 1");
  const long horizon = std::lround(2.0 / (1.0 - beta2));
  return std::max(1L, std::min(epoch_iters, horizon));
}

namespace {

struct ValueAt {
  long step;
  long epoch_iters;

  double operator()(const Constant& s) const { return s.lr; }

  double operator()(const LinearWarmup& s) const {
    if (s.warmup_steps < 0) throw ContractError("warm-up steps must be >= 0");
    if (s.warmup_steps == 0) return s.target_lr;
    return s.target_lr *
           std::min(1.0, static_cast<double>(step) / static_cast<double>(s.warmup_steps));
  }

  double operator()(const VaswaniNoam& s) const {
    const double t = static_cast<double>(step);
    return s.coeff * std::min(1.0 / std::sqrt(t), t / s.knee);
  }

  double operator()(const AdafactorAnneal& s) const {
    const long every = s.call_every > 0 ? s.call_every : anneal_cadence(epoch_iters, s.beta2);
    const long calls = 1 + (step - 1) / every;
    return adafactor_relative_step(Hyper{}, calls);
  }
};

long parse_long(std::string_view text, std::string_view what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ContractError("bad " + std::string(what) + " '" + std::string(text) + "'");
  return value;
}

}  // namespace

double schedule_value(const Schedule& s, long step, long epoch_iters) {
  if (step < 1) throw ContractError("schedule steps start at 1");
  return std::visit(ValueAt{step, epoch_iters}, s);
}

Schedule parse_schedule(std::string_view spec, double lr) {
  if (spec == "const") return Constant{lr};
  if (spec == "noam") return VaswaniNoam{};
  if (spec == "anneal") return AdafactorAnneal{};
  if (spec.starts_with("warmup:")) {
    long k = parse_long(spec.substr(7), "warm-up steps");
    if (k < 0) throw ContractError("warm-up steps must be >= 0");
    return LinearWarmup{lr, k};
  }
  if (spec.starts_with("anneal:")) {
    long every = parse_long(spec.substr(7), "anneal cadence");
    if (every < 1) throw ContractError("anneal cadence must be >= 1");
    return AdafactorAnneal{0.999, every};
  }
  throw ContractError("unknown schedule '" + std::string(spec) + "'");
}

}  // namespace stlc::optim
