#include <algorithm>
#include <map>

#include "stlc/generator.hpp"

namespace stlc {

Splits split_dataset(const std::vector<Example>& examples, const GenConfig& cfg) {
  cfg.validate();
  if (examples.empty()) throw ContractError("split_dataset: no examples");

  // Groups in first-appearance order.
  std::map<std::string, std::size_t> group_of;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    std::string key = cfg.split_mode == SplitMode::TypeDisjoint
                          ? print_type(examples[i].target_type)
                          : print_term(examples[i].term);
    auto [it, inserted] = group_of.emplace(std::move(key), groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  std::size_t positive = 0;
  for (double r : cfg.split_ratios) positive += r > 0.0;
  if (groups.size() < positive)
    throw ContractError("split_dataset: " + std::to_string(groups.size()) +
                        " distinct keys cannot fill " + std::to_string(positive) + " splits");

  // Seeded shuffle, then largest groups first; each group goes to the split
  // furthest below its target size.
  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = Rng::for_item(cfg.seed, 0x5b11'7000ULL);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return groups[a].size() > groups[b].size();
  });

  const double total = static_cast<double>(examples.size());
  std::vector<std::vector<std::size_t>> assigned(3);
  std::size_t filled[3] = {0, 0, 0};
  for (std::size_t g : order) {
    int best = -1;
    double best_deficit = 0.0;
    for (int s = 0; s < 3; ++s) {
      if (cfg.split_ratios[s] <= 0.0) continue;
      double deficit = cfg.split_ratios[s] * total - static_cast<double>(filled[s]);
      if (best < 0 || deficit > best_deficit) {
        best = s;
        best_deficit = deficit;
      }
    }
    assigned[static_cast<std::size_t>(best)].push_back(g);
    filled[best] += groups[g].size();
  }

  // A split with a positive ratio must not end up empty: take the smallest
  // group from the split holding the most groups.
  for (int s = 0; s < 3; ++s) {
    if (cfg.split_ratios[s] <= 0.0 || !assigned[static_cast<std::size_t>(s)].empty()) continue;
    auto donor = std::max_element(assigned.begin(), assigned.end(),
                                  [](const auto& a, const auto& b) { return a.size() < b.size(); });
    auto smallest = std::min_element(donor->begin(), donor->end(), [&](std::size_t a, std::size_t b) {
      return groups[a].size() < groups[b].size();
    });
    assigned[static_cast<std::size_t>(s)].push_back(*smallest);
    donor->erase(smallest);
  }

  Splits out;
  std::vector<Example>* targets[3] = {&out.train, &out.val, &out.test};
  for (int s = 0; s < 3; ++s) {
    std::vector<std::size_t> members;
    for (std::size_t g : assigned[static_cast<std::size_t>(s)])
      members.insert(members.end(), groups[g].begin(), groups[g].end());
    std::sort(members.begin(), members.end());
    for (std::size_t i : members) targets[s]->push_back(examples[i]);
  }
  return out;
}

}  // namespace stlc
