#pragma once

#include <string>
#include <vector>

#include "fractim/job.hpp"

namespace fractim {

// Pinned constructions shared by the demos, tests, and the acceptance suite.
namespace fixtures {
MoranClass cantor_class();
MoranClass overlap_class();  // three branches, ratio 3/10, overlap limit 1/2
HomogeneousIFS cantor_ifs();
GeneralIFS mixed_ratio_ifs();  // ratios {1/3, 1/4, 1/3}; hull [0,1]
Expr example9_expr();          // x^2 + y^2 + 6x + 3y + 0.5xy
Expr example10_expr();         // sin(-0.5xy) + 12x + 6y
}  // namespace fixtures

std::vector<std::string> demo_names();

// Runs a pre-registered scenario with pinned parameters and asserts its
// expected outcome; exit 0 on match, 1 on mismatch. Unknown names throw.
RunResult run_demo(const std::string& name);

}  // namespace fractim
