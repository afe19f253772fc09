#include <cmath>
#include <deque>
#include <exception>

#include "stlc/grammar.hpp"

namespace stlc {

ScoreMatrix ScoreMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  std::size_t width = rows.empty() ? 0 : rows.front().size();
  ScoreMatrix m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width)
      throw ContractError("score row " + std::to_string(i) + " has width " +
                          std::to_string(rows[i].size()) + ", expected " + std::to_string(width));
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

ScoreMatrix ScoreMatrix::one_hot(std::span<const int> ids, std::size_t width) {
  ScoreMatrix m(ids.size(), width);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= width)
      throw ContractError("id " + std::to_string(ids[i]) + " outside one-hot width");
    m.row(i)[static_cast<std::size_t>(ids[i])] = 1.0;
  }
  return m;
}

int argmax(std::span<const double> scores) {
  if (scores.empty()) throw ContractError("argmax of an empty row");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return static_cast<int>(best);
}

namespace {

struct Slot {
  int rule = kNoRule;
  int first_child = -1;  // arrow: two consecutive slots
};

Type assemble(const std::vector<Slot>& slots, int at, const RuleTable& table) {
  const Slot& s = slots[static_cast<std::size_t>(at)];
  if (s.rule == table.arrow_rule())
    return Type::arrow(assemble(slots, s.first_child, table),
                       assemble(slots, s.first_child + 1, table));
  return Type::base(table.symbol(table.rule(s.rule).rhs.front()));
}

}  // namespace

Type decode_rule_ids(std::span<const int> ids, const RuleTable& table) {
  std::vector<Slot> slots(1);
  std::deque<int> pending{0};
  bool any_content = false;
  for (int id : ids) {
    if (id == RuleTable::kPad) continue;
    if (id == RuleTable::kEos) break;
    if (!table.is_content_rule(id)) return Type::error();
    if (pending.empty()) return Type::error();
    const Rule& r = table.rule(id);
    if (r.lhs != table.type_symbol()) return Type::error();
    int slot = pending.front();
    pending.pop_front();
    slots[static_cast<std::size_t>(slot)].rule = id;
    any_content = true;
    bool first = true;
    for (int sym : r.rhs) {
      if (!table.is_nonterminal(sym)) continue;
      int child = static_cast<int>(slots.size());
      slots.emplace_back();
      if (first) slots[static_cast<std::size_t>(slot)].first_child = child;
      first = false;
      pending.push_back(child);
    }
  }
  if (!any_content || !pending.empty()) return Type::error();
  return assemble(slots, 0, table);
}

Type decode_greedy(const ScoreMatrix& scores, const RuleTable& table) {
  if (scores.rows() == 0) return Type::error();
  if (scores.width() != static_cast<std::size_t>(table.id_count()))
    throw ContractError("score width " + std::to_string(scores.width()) +
                        " does not match the rule id space " +
                        std::to_string(table.id_count()));
  std::vector<int> ids;
  ids.reserve(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    auto row = scores.row(i);
    for (double v : row)
      if (!std::isfinite(v))
        throw ContractError("non-finite score in row " + std::to_string(i));
    ids.push_back(argmax(row));
  }
  return decode_rule_ids(ids, table);
}

std::vector<Type> decode_batch(const std::vector<ScoreMatrix>& batch, const RuleTable& table) {
  std::vector<Type> out(batch.size(), Type::error());
  std::exception_ptr failure;
  const long n = static_cast<long>(batch.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = decode_greedy(batch[static_cast<std::size_t>(i)], table);
    } catch (...) {
#pragma omp critical(stlc_decode_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<Type> decode_batch_serial(const std::vector<ScoreMatrix>& batch,
                                      const RuleTable& table) {
  std::vector<Type> out;
  out.reserve(batch.size());
  for (const auto& m : batch) out.push_back(decode_greedy(m, table));
  return out;
}

bool exact_match(const Type& pred, const Type& target) {
  if (pred.is_error() || target.is_error()) return false;
  return pred == target;
}

double batch_accuracy(const std::vector<Type>& preds, const std::vector<Type>& targets) {
  if (preds.size() != targets.size())
    throw ContractError("batch_accuracy: " + std::to_string(preds.size()) +
                        " predictions vs " + std::to_string(targets.size()) + " targets");
  if (preds.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) hits += exact_match(preds[i], targets[i]);
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

bool rule_sequence_match(std::span<const int> predicted, std::span<const int> target) {
  if (predicted.size() < target.size() + 1) return false;
  for (std::size_t i = 0; i < target.size(); ++i)
    if (predicted[i] != target[i]) return false;
  return predicted[target.size()] == RuleTable::kEos;
}

}  // namespace stlc
