#include "dle/hull_forest.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include <nlohmann/json.hpp>

namespace dle {

StepClass classify_step(const SlitChain& c, std::size_t m, double eps_root) {
  assert(m < c.steps());
  StepClass out;
  const auto traced = eval_chain_real_traced(c, m, c.drivers[m]);
  out.attach = traced.value;
  if (traced.value.imag() > eps_root) {
    out.new_root = false;
    // absorbed_at = innermost composition index k whose slit swallowed the
    // point; that slit belongs to branch k+1
    out.parent_branch = traced.absorbed_at + 1;
  } else {
    out.new_root = true;
    out.root = traced.value.real();
  }
  return out;
}

HullForest build_forest(const SlitChain& c, double eps_root) {
  HullForest forest;
  forest.n = c.n;
  forest.steps = c.steps();
  const double hw = c.half_width();
  std::vector<std::size_t> branch_tree;  // tree id per branch (0-based slot)
  for (std::size_t m = 0; m < c.steps(); ++m) {
    const auto cls = classify_step(c, m, eps_root);
    HullBranch br;
    br.step = m + 1;
    br.attach = cls.attach;
    br.tip = eval_chain_prefix(c, m, Complex{c.drivers[m], hw});
    if (cls.new_root) {
      std::size_t tree = forest.roots.size();
      for (std::size_t t = 0; t < forest.roots.size(); ++t) {
        if (std::fabs(forest.roots[t] - cls.root) <= eps_root) {
          tree = t;
          break;
        }
      }
      if (tree == forest.roots.size()) forest.roots.push_back(cls.root);
      br.tree = tree;
      br.parent = -1;
    } else {
      br.parent = cls.parent_branch;
      br.tree = branch_tree[static_cast<std::size_t>(cls.parent_branch) - 1];
    }
    branch_tree.push_back(br.tree);
    forest.branches.push_back(br);
  }
  return forest;
}

ForestStats forest_stats(const HullForest& f) {
  ForestStats s;
  s.tree_count = f.tree_count();
  s.root_positions = f.roots;
  std::sort(s.root_positions.begin(), s.root_positions.end());
  for (std::size_t i = 1; i < s.root_positions.size(); ++i)
    s.root_gaps.push_back(s.root_positions[i] - s.root_positions[i - 1]);
  for (const auto& br : f.branches) s.branch_heights.push_back(br.attach.imag());
  return s;
}

nlohmann::json forest_to_json(const HullForest& f) {
  nlohmann::json doc;
  doc["n"] = f.n;
  doc["steps"] = f.steps;
  doc["tree_count"] = f.tree_count();
  doc["roots"] = f.roots;
  auto arr = nlohmann::json::array();
  for (const auto& br : f.branches) {
    arr.push_back({{"step", br.step},
                   {"tree", br.tree},
                   {"parent", br.parent},
                   {"attach", {br.attach.real(), br.attach.imag()}},
                   {"tip", {br.tip.real(), br.tip.imag()}}});
  }
  doc["branches"] = std::move(arr);
  return doc;
}

}  // namespace dle
