#include <charconv>
#include <functional>
#include <map>
#include <sstream>

#include "stlc/optim.hpp"

namespace stlc::optim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ContractError("defaults: '" + std::string(key) + "' is not a number");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ContractError("defaults: '" + std::string(key) + "' must be true or false");
}

using Setter = std::function<void(Defaults&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  auto num = [](double Hyper::*field) {
    return Setter([field](Defaults& d, std::string_view k, std::string_view v) {
      d.hyper.*field = to_double(k, v);
    });
  };
  auto flag = [](bool Hyper::*field) {
    return Setter([field](Defaults& d, std::string_view k, std::string_view v) {
      d.hyper.*field = to_bool(k, v);
    });
  };
  static const std::map<std::string, Setter, std::less<>> table{
      {"adam.beta1", num(&Hyper::beta1)},
      {"adam.beta2", num(&Hyper::beta2)},
      {"adam.eps", num(&Hyper::eps)},
      {"weight_decay", num(&Hyper::weight_decay)},
      {"adafactor.eps1", num(&Hyper::adafactor_eps1)},
      {"adafactor.eps2", num(&Hyper::adafactor_eps2)},
      {"adafactor.clip_threshold", num(&Hyper::clip_threshold)},
      {"adafactor.decay_rate", num(&Hyper::decay_rate)},
      {"adafactor.beta1", num(&Hyper::adafactor_beta1)},
      {"adafactor.scale_parameter", flag(&Hyper::scale_parameter)},
      {"adafactor.relative_step", flag(&Hyper::relative_step)},
      {"adafactor.warmup_init", flag(&Hyper::warmup_init)},
      {"schedule.noam_coeff",
       [](Defaults& d, std::string_view k, std::string_view v) { d.noam.coeff = to_double(k, v); }},
      {"schedule.noam_knee",
       [](Defaults& d, std::string_view k, std::string_view v) { d.noam.knee = to_double(k, v); }},
      {"schedule.anneal_beta2",
       [](Defaults& d, std::string_view k, std::string_view v) { d.anneal_beta2 = to_double(k, v); }},
      {"schedule.epoch_iters",
       [](Defaults& d, std::string_view k, std::string_view v) {
         d.epoch_iters = static_cast<long>(to_double(k, v));
       }},
      {"divergence.loss",
       [](Defaults& d, std::string_view k, std::string_view v) { d.divergence_loss = to_double(k, v); }},
  };
  return table;
}

}  // namespace

Defaults parse_defaults(std::string_view text) {
  Defaults d;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ContractError("defaults line " + std::to_string(line_no) + ": expected key=value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end())
      throw ContractError("defaults line " + std::to_string(line_no) + ": unknown key '" +
                          std::string(key) + "'");
    it->second(d, key, value);
  }
  d.hyper.validate();
  return d;
}

std::string format_defaults(const Defaults& d) {
  std::ostringstream out;
  out.precision(17);
  const Hyper& h = d.hyper;
  auto b = [](bool v) { return v ? "true" : "false"; };
  out << "adam.beta1=" << h.beta1 << '\n'
      << "adam.beta2=" << h.beta2 << '\n'
      << "adam.eps=" << h.eps << '\n'
      << "weight_decay=" << h.weight_decay << '\n'
      << "adafactor.eps1=" << h.adafactor_eps1 << '\n'
      << "adafactor.eps2=" << h.adafactor_eps2 << '\n'
      << "adafactor.clip_threshold=" << h.clip_threshold << '\n'
      << "adafactor.decay_rate=" << h.decay_rate << '\n'
      << "adafactor.beta1=" << h.adafactor_beta1 << '\n'
      << "adafactor.scale_parameter=" << b(h.scale_parameter) << '\n'
      << "adafactor.relative_step=" << b(h.relative_step) << '\n'
      << "adafactor.warmup_init=" << b(h.warmup_init) << '\n'
      << "schedule.noam_coeff=" << d.noam.coeff << '\n'
      << "schedule.noam_knee=" << d.noam.knee << '\n'
      << "schedule.anneal_beta2=" << d.anneal_beta2 << '\n'
      << "schedule.epoch_iters=" << d.epoch_iters << '\n'
      << "divergence.loss=" << d.divergence_loss << '\n';
  return out.str();
}

}  // namespace stlc::optim
