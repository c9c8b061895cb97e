#include "cfa/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cfa::lp {

namespace {

constexpr double kDjTol = 1e-9;     // reduced-cost tolerance
constexpr double kPivTol = 1e-9;    // smallest usable ratio-test rate
constexpr double kPhase1Tol = 1e-7; // residual infeasibility accepted as zero

enum class VStat : char { Basic, AtLower, AtUpper, Free };

struct Col {
  std::vector<int> rows;
  std::vector<double> vals;
};

// Dense bounded-variable revised primal simplex.  Problems in this codebase
// are small (a few hundred variables); an explicit basis inverse with
// periodic refactorization is simpler and fast enough.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SolveOptions& opt) : lp_(lp), opt_(opt) {
    n_ = lp.num_vars();
    m_ = lp.num_cons();
    validate();
    build();
  }

  LpSolution run() {
    LpSolution sol;
    if (m_ == 0) return solve_unconstrained();

    if (!try_initial_basis()) init_slack_or_artificial_basis();

    if (has_artificials_) {
      Outcome out = iterate(phase1_cost_, /*phase1=*/true);
      if (out == Outcome::IterationLimit || out == Outcome::Singular)
        return failure(out);
      if (infeasibility() > kPhase1Tol) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        return sol;
      }
      freeze_artificials();
    }

    Outcome out = iterate(cost_, /*phase1=*/false);
    sol.iterations = iterations_;
    switch (out) {
      case Outcome::Optimal: {
        sol.status = LpStatus::Optimal;
        sol.values.assign(x_.begin(), x_.begin() + n_);
        double obj = 0.0;
        for (int j = 0; j < n_; ++j) obj += lp_.vars[j].cost * sol.values[j];
        sol.objective = obj;
        return sol;
      }
      case Outcome::Unbounded:
        sol.status = LpStatus::Unbounded;
        return sol;
      default:
        return failure(out);
    }
  }

 private:
  enum class Outcome { Optimal, Unbounded, IterationLimit, Singular };

  void validate() const {
    for (const auto& v : lp_.vars)
      if (!(v.lower <= v.upper))
        throw std::invalid_argument("variable with lower > upper");
    for (const auto& c : lp_.cons)
      for (const auto& [j, a] : c.coeffs)
        if (j < 0 || j >= n_)
          throw std::invalid_argument("constraint references invalid variable");
  }

  void build() {
    total_ = n_ + m_;  // structural + one slack per row
    cols_.resize(total_);
    lo_.resize(total_);
    up_.resize(total_);
    cost_.assign(total_, 0.0);
    b_.resize(m_);

    if (opt_.equilibrate) {
      scale_.assign(m_, 1.0);
      for (int i = 0; i < m_; ++i) {
        double mx = 0.0;
        for (const auto& [j, a] : lp_.cons[i].coeffs) mx = std::max(mx, std::fabs(a));
        if (mx > 0.0) scale_[i] = 1.0 / mx;
      }
    }

    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp_.vars[j].lower;
      up_[j] = lp_.vars[j].upper;
      cost_[j] = lp_.vars[j].cost;
    }
    for (int i = 0; i < m_; ++i) {
      double s = scale_.empty() ? 1.0 : scale_[i];
      for (const auto& [j, a] : lp_.cons[i].coeffs) {
        cols_[j].rows.push_back(i);
        cols_[j].vals.push_back(a * s);
      }
      b_[i] = lp_.cons[i].rhs * s;
      int sj = n_ + i;
      cols_[sj].rows.push_back(i);
      cols_[sj].vals.push_back(1.0);
      switch (lp_.cons[i].sense) {
        case Sense::LessEqual: lo_[sj] = 0.0; up_[sj] = kInf; break;
        case Sense::GreaterEqual: lo_[sj] = -kInf; up_[sj] = 0.0; break;
        case Sense::Equal: lo_[sj] = 0.0; up_[sj] = 0.0; break;
      }
    }

    x_.assign(total_, 0.0);
    vstat_.assign(total_, VStat::AtLower);
    for (int j = 0; j < total_; ++j) set_to_nearest_bound(j);
  }

  void set_to_nearest_bound(int j) {
    if (std::isfinite(lo_[j])) {
      vstat_[j] = VStat::AtLower;
      x_[j] = lo_[j];
    } else if (std::isfinite(up_[j])) {
      vstat_[j] = VStat::AtUpper;
      x_[j] = up_[j];
    } else {
      vstat_[j] = VStat::Free;
      x_[j] = 0.0;
    }
  }

  LpSolution solve_unconstrained() {
    LpSolution sol;
    sol.values.assign(n_, 0.0);
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) {
      const auto& v = lp_.vars[j];
      double val;
      if (v.cost > 0.0) val = v.lower;
      else if (v.cost < 0.0) val = v.upper;
      else val = std::isfinite(v.lower) ? v.lower : (std::isfinite(v.upper) ? v.upper : 0.0);
      if (!std::isfinite(val)) {
        sol.status = LpStatus::Unbounded;
        return sol;
      }
      sol.values[j] = val;
      obj += v.cost * val;
    }
    sol.status = LpStatus::Optimal;
    sol.objective = obj;
    return sol;
  }

  bool try_initial_basis() {
    if (static_cast<int>(opt_.initial_basis.size()) != m_) return false;
    std::vector<char> used(total_, 0);
    for (int j : opt_.initial_basis) {
      if (j < 0 || j >= total_ || used[j]) return false;
      used[j] = 1;
    }
    basis_ = opt_.initial_basis;
    for (int j = 0; j < total_; ++j) set_to_nearest_bound(j);
    for (int j : basis_) vstat_[j] = VStat::Basic;
    if (!refactorize()) return false;
    recompute_basics();
    for (int i = 0; i < m_; ++i) {
      int j = basis_[i];
      if (x_[j] < lo_[j] - 1e-9 || x_[j] > up_[j] + 1e-9) return false;
    }
    has_artificials_ = false;
    return true;
  }

  void init_slack_or_artificial_basis() {
    // Slack basis first; rows whose slack value lands outside its bounds get
    // an artificial column instead.
    for (int j = 0; j < total_; ++j) set_to_nearest_bound(j);
    std::vector<double> resid = b_;
    for (int j = 0; j < n_; ++j)
      if (x_[j] != 0.0)
        for (std::size_t k = 0; k < cols_[j].rows.size(); ++k)
          resid[cols_[j].rows[k]] -= cols_[j].vals[k] * x_[j];

    basis_.resize(m_);
    phase1_cost_.assign(total_, 0.0);
    has_artificials_ = false;
    for (int i = 0; i < m_; ++i) {
      int sj = n_ + i;
      double v = resid[i];  // slack value making the row tight
      if (v >= lo_[sj] - 1e-12 && v <= up_[sj] + 1e-12) {
        basis_[i] = sj;
        vstat_[sj] = VStat::Basic;
        x_[sj] = v;
        continue;
      }
      // Slack to its nearest bound, artificial picks up the remainder.
      double sv = std::clamp(v, lo_[sj], up_[sj]);
      x_[sj] = sv;
      vstat_[sj] = sv == lo_[sj] ? VStat::AtLower : VStat::AtUpper;
      double r = v - sv;
      int aj = add_artificial(i, r);
      basis_[i] = aj;
      has_artificials_ = true;
    }
    phase1_cost_.resize(total_, 0.0);
    refactorize();
    recompute_basics();
  }

  int add_artificial(int row, double value) {
    int aj = total_++;
    cols_.push_back({});
    cols_[aj].rows.push_back(row);
    cols_[aj].vals.push_back(1.0);
    if (value >= 0.0) {
      lo_.push_back(0.0);
      up_.push_back(kInf);
      phase1_cost_.resize(total_, 0.0);
      phase1_cost_[aj] = 1.0;
    } else {
      lo_.push_back(-kInf);
      up_.push_back(0.0);
      phase1_cost_.resize(total_, 0.0);
      phase1_cost_[aj] = -1.0;
    }
    cost_.push_back(0.0);
    x_.push_back(value);
    vstat_.push_back(VStat::Basic);
    return aj;
  }

  double infeasibility() const {
    double s = 0.0;
    for (int j = n_ + m_; j < total_; ++j) s += std::fabs(x_[j]);
    return s;
  }

  void freeze_artificials() {
    for (int j = n_ + m_; j < total_; ++j) {
      lo_[j] = 0.0;
      up_[j] = 0.0;
      if (vstat_[j] != VStat::Basic) {
        vstat_[j] = VStat::AtLower;
        x_[j] = 0.0;
      }
    }
  }

  bool refactorize() {
    // Gauss-Jordan on [B | I] with partial pivoting.
    std::vector<double> B(static_cast<std::size_t>(m_) * m_, 0.0);
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) binv_[i * m_ + i] = 1.0;
    for (int c = 0; c < m_; ++c) {
      const Col& col = cols_[basis_[c]];
      for (std::size_t k = 0; k < col.rows.size(); ++k)
        B[static_cast<std::size_t>(col.rows[k]) * m_ + c] = col.vals[k];
    }
    for (int c = 0; c < m_; ++c) {
      int piv = -1;
      double best = 1e-12;
      for (int i = c; i < m_; ++i) {
        double v = std::fabs(B[static_cast<std::size_t>(i) * m_ + c]);
        if (v > best) { best = v; piv = i; }
      }
      if (piv < 0) return false;
      if (piv != c) {
        for (int k = 0; k < m_; ++k) {
          std::swap(B[static_cast<std::size_t>(piv) * m_ + k], B[static_cast<std::size_t>(c) * m_ + k]);
          std::swap(binv_[static_cast<std::size_t>(piv) * m_ + k], binv_[static_cast<std::size_t>(c) * m_ + k]);
        }
      }
      double d = B[static_cast<std::size_t>(c) * m_ + c];
      for (int k = 0; k < m_; ++k) {
        B[static_cast<std::size_t>(c) * m_ + k] /= d;
        binv_[static_cast<std::size_t>(c) * m_ + k] /= d;
      }
      for (int i = 0; i < m_; ++i) {
        if (i == c) continue;
        double f = B[static_cast<std::size_t>(i) * m_ + c];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          B[static_cast<std::size_t>(i) * m_ + k] -= f * B[static_cast<std::size_t>(c) * m_ + k];
          binv_[static_cast<std::size_t>(i) * m_ + k] -= f * binv_[static_cast<std::size_t>(c) * m_ + k];
        }
      }
    }
    return true;
  }

  void recompute_basics() {
    std::vector<double> rhs = b_;
    for (int j = 0; j < total_; ++j) {
      if (vstat_[j] == VStat::Basic || x_[j] == 0.0) continue;
      const Col& col = cols_[j];
      for (std::size_t k = 0; k < col.rows.size(); ++k)
        rhs[col.rows[k]] -= col.vals[k] * x_[j];
    }
    for (int i = 0; i < m_; ++i) {
      double v = 0.0;
      const double* row = &binv_[static_cast<std::size_t>(i) * m_];
      for (int k = 0; k < m_; ++k) v += row[k] * rhs[k];
      x_[basis_[i]] = v;
    }
  }

  double reduced_cost(const std::vector<double>& c, const std::vector<double>& y,
                      int j) const {
    double d = c[j];
    const Col& col = cols_[j];
    for (std::size_t k = 0; k < col.rows.size(); ++k)
      d -= y[col.rows[k]] * col.vals[k];
    return d;
  }

  Outcome iterate(const std::vector<double>& c, bool phase1) {
    const int max_iter =
        opt_.max_iterations > 0 ? opt_.max_iterations : 500 + 60 * (m_ + n_);
    std::vector<double> y(m_), w(m_);
    bool bland = false;
    int degenerate_streak = 0;
    int since_refactor = 0;

    while (true) {
      if (iterations_ >= max_iter) return Outcome::IterationLimit;
      ++iterations_;

      // y = c_B' * Binv
      for (int k = 0; k < m_; ++k) y[k] = 0.0;
      for (int i = 0; i < m_; ++i) {
        double cb = c[basis_[i]];
        if (cb == 0.0) continue;
        const double* row = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) y[k] += cb * row[k];
      }

      // Pricing: Dantzig with lowest-index tie-break, Bland under degeneracy.
      int enter = -1, dir = 0;
      double best = kDjTol;
      for (int j = 0; j < total_; ++j) {
        VStat s = vstat_[j];
        if (s == VStat::Basic || lo_[j] == up_[j]) continue;
        double d = reduced_cost(c, y, j);
        int cand_dir = 0;
        if ((s == VStat::AtLower || s == VStat::Free) && d < -kDjTol) cand_dir = +1;
        else if ((s == VStat::AtUpper || s == VStat::Free) && d > kDjTol) cand_dir = -1;
        if (cand_dir == 0) continue;
        if (bland) { enter = j; dir = cand_dir; break; }
        if (std::fabs(d) > best) { best = std::fabs(d); enter = j; dir = cand_dir; }
      }
      if (enter < 0) return Outcome::Optimal;

      // w = Binv * a_enter
      for (int k = 0; k < m_; ++k) w[k] = 0.0;
      {
        const Col& col = cols_[enter];
        for (std::size_t k = 0; k < col.rows.size(); ++k) {
          double a = col.vals[k];
          int r = col.rows[k];
          for (int i = 0; i < m_; ++i) w[i] += binv_[static_cast<std::size_t>(i) * m_ + r] * a;
        }
      }

      // Ratio test.
      double flip = (std::isfinite(lo_[enter]) && std::isfinite(up_[enter]))
                        ? up_[enter] - lo_[enter] : kInf;
      double t = flip;
      int leave = -1;
      double leave_rate = 0.0;
      for (int i = 0; i < m_; ++i) {
        double rate = -dir * w[i];  // d x_basic[i] / d t
        int bj = basis_[i];
        double ratio;
        if (rate < -kPivTol) {
          if (!std::isfinite(lo_[bj])) continue;
          ratio = (x_[bj] - lo_[bj]) / (-rate);
        } else if (rate > kPivTol) {
          if (!std::isfinite(up_[bj])) continue;
          ratio = (up_[bj] - x_[bj]) / rate;
        } else {
          continue;
        }
        if (ratio < 0.0) ratio = 0.0;
        bool better = ratio < t - 1e-12;
        bool tie = std::fabs(ratio - t) <= 1e-12;
        if (better || (tie && leave >= 0 &&
                       (bland ? bj < basis_[leave]
                              : std::fabs(w[i]) > std::fabs(w[leave])))) {
          t = ratio;
          leave = i;
          leave_rate = rate;
        }
      }

      if (!std::isfinite(t)) {
        if (phase1) return Outcome::Singular;  // phase-1 objective is bounded
        return Outcome::Unbounded;
      }

      degenerate_streak = t <= 1e-10 ? degenerate_streak + 1 : 0;
      if (degenerate_streak > 60) bland = true;

      // Apply the step.
      x_[enter] += dir * t;
      if (t != 0.0)
        for (int i = 0; i < m_; ++i) x_[basis_[i]] -= dir * t * w[i];

      if (leave < 0) {
        // Entering variable hit its opposite bound: flip, no basis change.
        vstat_[enter] = dir > 0 ? VStat::AtUpper : VStat::AtLower;
        x_[enter] = dir > 0 ? up_[enter] : lo_[enter];
        continue;
      }

      // Pivot: basis_[leave] exits at the bound it reached.
      int out = basis_[leave];
      if (leave_rate < 0.0) { vstat_[out] = VStat::AtLower; x_[out] = lo_[out]; }
      else { vstat_[out] = VStat::AtUpper; x_[out] = up_[out]; }
      basis_[leave] = enter;
      vstat_[enter] = VStat::Basic;

      double piv = w[leave];
      if (std::fabs(piv) < 1e-11) {
        if (!refactorize()) return Outcome::Singular;
        recompute_basics();
        continue;
      }
      double* prow = &binv_[static_cast<std::size_t>(leave) * m_];
      for (int k = 0; k < m_; ++k) prow[k] /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave) continue;
        double f = w[i];
        if (f == 0.0) continue;
        double* row = &binv_[static_cast<std::size_t>(i) * m_];
        for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
      }

      if (++since_refactor >= 100) {
        since_refactor = 0;
        if (!refactorize()) return Outcome::Singular;
        recompute_basics();
      }
    }
  }

  LpSolution failure(Outcome out) {
    LpSolution sol;
    sol.status = LpStatus::NumericalFailure;
    sol.iterations = iterations_;
    sol.note = out == Outcome::IterationLimit ? "iteration limit reached"
                                              : "singular basis";
    return sol;
  }

  const LinearProgram& lp_;
  const SolveOptions& opt_;
  int n_ = 0, m_ = 0, total_ = 0;
  std::vector<Col> cols_;
  std::vector<double> lo_, up_, cost_, phase1_cost_, b_, x_, binv_, scale_;
  std::vector<int> basis_;
  std::vector<VStat> vstat_;
  bool has_artificials_ = false;
  int iterations_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& options) {
  Simplex s(lp, options);
  return s.run();
}

ResidualReport check_solution(const LinearProgram& lp,
                              std::span<const double> values) {
  if (static_cast<int>(values.size()) != lp.num_vars())
    throw std::invalid_argument("value vector length mismatch");
  ResidualReport report;
  for (int j = 0; j < lp.num_vars(); ++j) {
    const auto& v = lp.vars[j];
    double below = v.lower - values[j];
    double above = values[j] - v.upper;
    report.max_bound_violation =
        std::max({report.max_bound_violation, below, above});
    report.objective += v.cost * values[j];
  }
  for (const auto& con : lp.cons) {
    double lhs = 0.0;
    for (const auto& [j, a] : con.coeffs) lhs += a * values[j];
    double viol = 0.0;
    switch (con.sense) {
      case Sense::LessEqual: viol = lhs - con.rhs; break;
      case Sense::GreaterEqual: viol = con.rhs - lhs; break;
      case Sense::Equal: viol = std::fabs(lhs - con.rhs); break;
    }
    report.max_constraint_violation =
        std::max(report.max_constraint_violation, viol);
  }
  return report;
}

std::string to_text(const LinearProgram& lp) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::string out = "Minimize\n obj:";
  for (int j = 0; j < lp.num_vars(); ++j) {
    double c = lp.vars[j].cost;
    if (c == 0.0) continue;
    out += (c >= 0.0 ? " + " : " - ") + num(std::fabs(c)) + " x" + std::to_string(j);
  }
  out += "\nSubject To\n";
  for (int i = 0; i < lp.num_cons(); ++i) {
    const auto& con = lp.cons[i];
    out += " c" + std::to_string(i) + ":";
    for (const auto& [j, a] : con.coeffs)
      out += (a >= 0.0 ? " + " : " - ") + num(std::fabs(a)) + " x" + std::to_string(j);
    switch (con.sense) {
      case Sense::LessEqual: out += " <= "; break;
      case Sense::GreaterEqual: out += " >= "; break;
      case Sense::Equal: out += " = "; break;
    }
    out += num(con.rhs) + "\n";
  }
  out += "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const auto& v = lp.vars[j];
    std::string lo = std::isfinite(v.lower) ? num(v.lower) : "-inf";
    std::string up = std::isfinite(v.upper) ? num(v.upper) : "+inf";
    out += " " + lo + " <= x" + std::to_string(j) + " <= " + up + "\n";
  }
  out += "End\n";
  return out;
}

}  // namespace cfa::lp
