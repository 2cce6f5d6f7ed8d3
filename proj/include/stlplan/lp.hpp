#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace stlplan::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Row {
  std::vector<std::pair<std::size_t, double>> coeffs;
  Sense sense = Sense::kEqual;
  double rhs = 0.0;
  std::string family;  // constraint family tag, reported on infeasibility
};

/// minimize cost . x  subject to rows and lower <= x <= upper (lower finite).
struct Problem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  std::size_t add_variable(double c, double lo, double hi);
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(Status s);

struct Result {
  Status status = Status::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  /// Rows whose phase-one artificial stayed positive (infeasible only).
  std::vector<std::size_t> infeasible_rows;
  std::size_t iterations = 0;
};

/// Two-phase primal simplex on a dense tableau with implicit variable bounds.
/// Variables with lower == upper are substituted out before pivoting.
Result solve(const Problem& problem, std::size_t max_iterations = 100000);

}  // namespace stlplan::lp
