#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace cfa::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : char { LessEqual = 'L', Equal = 'E', GreaterEqual = 'G' };

struct Variable {
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

struct Constraint {
  std::vector<std::pair<int, double>> coeffs;  // (variable index, value)
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

// Bounded-variable LP in minimization form:
//   min c'x  s.t.  a_i'x {<=,=,>=} b_i,  lower <= x <= upper.
struct LinearProgram {
  std::vector<Variable> vars;
  std::vector<Constraint> cons;

  int add_variable(double lower, double upper, double cost) {
    vars.push_back({lower, upper, cost});
    return static_cast<int>(vars.size()) - 1;
  }
  void add_constraint(std::vector<std::pair<int, double>> coeffs, Sense sense,
                      double rhs) {
    cons.push_back({std::move(coeffs), sense, rhs});
  }
  int num_vars() const { return static_cast<int>(vars.size()); }
  int num_cons() const { return static_cast<int>(cons.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

struct LpSolution {
  LpStatus status = LpStatus::NumericalFailure;
  std::vector<double> values;  // one per variable when Optimal
  double objective = 0.0;
  int iterations = 0;
  std::string note;
};

struct SolveOptions {
  // Optional starting basis: one variable index per constraint row.  Used
  // when it yields a within-bounds basic solution, otherwise the solver
  // falls back to the artificial-variable phase 1.
  std::vector<int> initial_basis;
  int max_iterations = 0;  // 0 = automatic from problem size
  bool equilibrate = false;  // row/column scaling, off by default
};

LpSolution solve(const LinearProgram& lp, const SolveOptions& options = {});

struct ResidualReport {
  double max_bound_violation = 0.0;
  double max_constraint_violation = 0.0;
  double objective = 0.0;
  bool within(double tol) const {
    return max_bound_violation <= tol && max_constraint_violation <= tol;
  }
};

ResidualReport check_solution(const LinearProgram& lp,
                              std::span<const double> values);

// Plain-text dump (fixed-column free format; see docs/lp_format.md).
std::string to_text(const LinearProgram& lp);

}  // namespace cfa::lp
