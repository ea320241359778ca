#pragma once

// Combinatorial geometry of the discrete hull: each chain step adds one
// branch, which either attaches to an existing branch at an interior point or
// starts a new tree on the real axis. The base point of branch m+1 is the
// boundary image of drivers[m] under the step-m prefix map, so the whole
// classification is closed-form arithmetic.

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dle/halfplane_maps.hpp"

namespace dle {

struct StepClass {
  bool new_root = false;
  double root = 0.0;              // meaningful when new_root
  Complex attach;                 // base point of the new branch
  std::ptrdiff_t parent_branch = -1;  // 1-based branch attached to, -1 if none
};

// Classifies the branch created by chain step m+1 (m >= 0, needs m+1 drivers):
// the base point b is the prefix-m image of drivers[m]; Im(b) <= eps_root
// means a new root at Re(b), anything higher is an interior attachment.
StepClass classify_step(const SlitChain& c, std::size_t m, double eps_root = 1e-9);

struct HullBranch {
  std::size_t step = 0;           // 1-based creation step
  std::size_t tree = 0;           // tree index
  std::ptrdiff_t parent = -1;     // 1-based parent branch, -1 for tree starters
  Complex attach;
  Complex tip;
};

struct HullForest {
  long n = 1;
  std::size_t steps = 0;
  std::vector<double> roots;      // one entry per tree
  std::vector<HullBranch> branches;
  std::size_t tree_count() const { return roots.size(); }
};

// Runs classify_step for every step of the chain. Roots closer than eps_root
// are merged into the same tree (the bushel case counts once).
HullForest build_forest(const SlitChain& c, double eps_root = 1e-9);

struct ForestStats {
  std::size_t tree_count = 0;
  std::vector<double> root_positions;  // sorted
  std::vector<double> root_gaps;       // gaps between adjacent roots
  std::vector<double> branch_heights;  // Im of attach points, branch order
};

ForestStats forest_stats(const HullForest& f);

nlohmann::json forest_to_json(const HullForest& f);

}  // namespace dle
