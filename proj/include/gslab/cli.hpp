#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gslab/params.hpp"
#include "gslab/shooting.hpp"

namespace gslab::cli {

struct SuiteCase {
  std::string label;
  ProblemParams params;
};

/// The built-in identity suite: every family, N in {3, 4, 5}.
std::vector<SuiteCase> identity_suite();

struct CheckOutcome {
  SuiteCase input;
  bool solved = false;
  std::string error;
  double amplitude = 0.0;
  double nehari = 0.0;
  double pokhozhaev = 0.0;
  /// Present only where the identity applies to the family.
  std::optional<double> kappa_q, kappa_p;
  std::optional<double> limit_first, limit_second;
  std::optional<double> constraint;
};

CheckOutcome check_case(const SuiteCase& c, const ShootControls& ctrl = {});

/// Largest residual of the identities selected by `suite`
/// (all, nehari, pokhozhaev, kappa, limit, constraint).
double worst_residual(const CheckOutcome& o, const std::string& suite);

/// Exit codes: 0 success, 1 solver or identity failure, 2 argument error.
int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace gslab::cli
