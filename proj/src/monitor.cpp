// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stlcc/monitor.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "stlcc/error.hpp"

namespace stlcc {
namespace {

// Keeps -0.0 out of every trace so that min/max ties are bit-identical
// regardless of the order values are visited in.
double negate(double v) { return v == 0.0 ? 0.0 : -v; }

void check_variables(const Formula& phi, const Trajectory& tau) {
  const auto vars = phi.variables();
  if (!vars.empty() && *vars.rbegin() >= tau.dims()) {
    throw EvaluationError("variable x" + std::to_string(*vars.rbegin()) +
                          " out of range for a trajectory with " +
                          std::to_string(tau.dims()) + " variable(s)");
  }
}

template <typename Better>
std::vector<double> sliding_extremum(std::span<const double> values,
                                     Interval window, double empty,
                                     Better better) {
  const std::size_t n = values.size();
  std::vector<double> out(n, empty);
  std::deque<std::size_t> dq;
  std::size_t next = 0;  // next index to push
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t lo = t + window.lower;
    if (lo >= n) break;  // this and every later window is empty
    const std::size_t hi = std::min(t + window.upper, n - 1);
    next = std::max(next, lo);
    for (; next <= hi; ++next) {
      while (!dq.empty() && !better(values[dq.back()], values[next])) {
        dq.pop_back();
      }
      dq.push_back(next);
    }
    while (dq.front() < lo) dq.pop_front();
    out[t] = values[dq.front()];
  }
  return out;
}

class Evaluator {
 public:
  Evaluator(const Trajectory& tau, EvalMode mode) : tau_(tau), mode_(mode) {}

  std::vector<double> eval(const Formula& phi) const {
    const std::size_t n = tau_.length();
    switch (phi.kind()) {
      case NodeKind::kTrue:
        return std::vector<double>(n, kLarge);
      case NodeKind::kPredicate: {
        std::vector<double> out(n);
        const auto row = tau_.row(phi.var());
        const double c = phi.threshold();
        for (std::size_t t = 0; t < n; ++t) {
          out[t] = phi.direction() == Direction::kGreaterEqual ? row[t] - c
                                                                : c - row[t];
        }
        return out;
      }
      case NodeKind::kNot: {
        auto out = eval(phi.left());
        for (double& v : out) v = negate(v);
        return out;
      }
      case NodeKind::kAnd:
      case NodeKind::kOr: {
        auto out = eval(phi.left());
        const auto rhs = eval(phi.right());
        const bool conj = phi.kind() == NodeKind::kAnd;
        for (std::size_t t = 0; t < n; ++t) {
          out[t] = conj ? std::min(out[t], rhs[t]) : std::max(out[t], rhs[t]);
        }
        return out;
      }
      case NodeKind::kEventually:
      case NodeKind::kGlobally: {
        const auto child = eval(phi.left());
        const bool ev = phi.kind() == NodeKind::kEventually;
        if (mode_ == EvalMode::kSlidingWindow) {
          return ev ? sliding_max(child, phi.window())
                    : sliding_min(child, phi.window());
        }
        return naive_window(child, phi.window(), ev);
      }
      case NodeKind::kUntil: {
        const auto lhs = eval(phi.left());
        const auto rhs = eval(phi.right());
        return mode_ == EvalMode::kSlidingWindow
                   ? incremental_until(lhs, rhs, phi.window())
                   : naive_until(lhs, rhs, phi.window());
      }
    }
    return {};
  }

 private:
  static std::vector<double> naive_window(const std::vector<double>& child,
                                          Interval w, bool take_max) {
    const std::size_t n = child.size();
    std::vector<double> out(n, take_max ? -kLarge : kLarge);
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t lo = t + w.lower;
      const std::size_t hi = std::min(t + w.upper, n - 1);
      for (std::size_t s = lo; s <= hi && s < n; ++s) {
        if (s == lo) {
          out[t] = child[s];
        } else {
          out[t] = take_max ? std::max(out[t], child[s]) : std::min(out[t], child[s]);
        }
      }
    }
    return out;
  }

  static std::vector<double> naive_until(const std::vector<double>& lhs,
                                         const std::vector<double>& rhs,
                                         Interval w) {
    const std::size_t n = lhs.size();
    std::vector<double> out(n, -kLarge);
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t lo = t + w.lower;
      const std::size_t hi = std::min(t + w.upper, n - 1);
      bool first = true;
      for (std::size_t s = lo; s <= hi && s < n; ++s) {
        double hold = lhs[t];
        for (std::size_t u = t + 1; u <= s; ++u) hold = std::min(hold, lhs[u]);
        const double v = std::min(rhs[s], hold);
        out[t] = first ? v : std::max(out[t], v);
        first = false;
      }
    }
    return out;
  }

  static std::vector<double> incremental_until(const std::vector<double>& lhs,
                                               const std::vector<double>& rhs,
                                               Interval w) {
    const std::size_t n = lhs.size();
    std::vector<double> out(n, -kLarge);
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t lo = t + w.lower;
      if (lo >= n) break;
      const std::size_t hi = std::min(t + w.upper, n - 1);
      double hold = lhs[t];
      for (std::size_t u = t + 1; u < lo; ++u) hold = std::min(hold, lhs[u]);
      for (std::size_t s = lo; s <= hi; ++s) {
        hold = std::min(hold, lhs[s]);
        const double v = std::min(rhs[s], hold);
        out[t] = s == lo ? v : std::max(out[t], v);
      }
    }
    return out;
  }

  const Trajectory& tau_;
  EvalMode mode_;
};

bool sat(const Formula& phi, const Trajectory& tau, std::size_t t) {
  const std::size_t n = tau.length();
  switch (phi.kind()) {
    case NodeKind::kTrue:
      return true;
    case NodeKind::kPredicate: {
      const double x = tau(phi.var(), t);
      return phi.direction() == Direction::kGreaterEqual ? x >= phi.threshold()
                                                          : x <= phi.threshold();
    }
    case NodeKind::kNot:
      return !sat(phi.left(), tau, t);
    case NodeKind::kAnd:
      return sat(phi.left(), tau, t) && sat(phi.right(), tau, t);
    case NodeKind::kOr:
      return sat(phi.left(), tau, t) || sat(phi.right(), tau, t);
    case NodeKind::kEventually:
    case NodeKind::kGlobally: {
      const bool ev = phi.kind() == NodeKind::kEventually;
      const Interval w = phi.window();
      for (std::size_t s = t + w.lower; s <= t + w.upper && s < n; ++s) {
        const bool v = sat(phi.left(), tau, s);
        if (ev && v) return true;
        if (!ev && !v) return false;
      }
      return !ev;
    }
    case NodeKind::kUntil: {
      const Interval w = phi.window();
      for (std::size_t s = t + w.lower; s <= t + w.upper && s < n; ++s) {
        if (!sat(phi.right(), tau, s)) continue;
        bool holds = true;
        for (std::size_t u = t; u <= s && holds; ++u) {
          holds = sat(phi.left(), tau, u);
        }
        if (holds) return true;
      }
      return false;
    }
  }
  return false;
}

std::vector<bool> bool_trace(const Formula& phi, const Trajectory& tau) {
  const std::size_t n = tau.length();
  switch (phi.kind()) {
    case NodeKind::kTrue:
      return std::vector<bool>(n, true);
    case NodeKind::kPredicate: {
      std::vector<bool> out(n);
      const auto row = tau.row(phi.var());
      for (std::size_t t = 0; t < n; ++t) {
        out[t] = phi.direction() == Direction::kGreaterEqual ? row[t] >= phi.threshold()
                                                              : row[t] <= phi.threshold();
      }
      return out;
    }
    case NodeKind::kNot: {
      auto out = bool_trace(phi.left(), tau);
      out.flip();
      return out;
    }
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      auto out = bool_trace(phi.left(), tau);
      const auto rhs = bool_trace(phi.right(), tau);
      const bool conj = phi.kind() == NodeKind::kAnd;
      for (std::size_t t = 0; t < n; ++t) out[t] = conj ? out[t] && rhs[t] : out[t] || rhs[t];
      return out;
    }
    case NodeKind::kEventually:
    case NodeKind::kGlobally: {
      // Count of true samples via prefix sums.
      const auto child = bool_trace(phi.left(), tau);
      std::vector<std::size_t> prefix(n + 1, 0);
      for (std::size_t t = 0; t < n; ++t) prefix[t + 1] = prefix[t] + child[t];
      const bool ev = phi.kind() == NodeKind::kEventually;
      std::vector<bool> out(n, !ev);
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = t + phi.window().lower;
        if (lo >= n) break;
        const std::size_t hi = std::min(t + phi.window().upper, n - 1);
        const std::size_t hits = prefix[hi + 1] - prefix[lo];
        out[t] = ev ? hits > 0 : hits == hi + 1 - lo;
      }
      return out;
    }
    case NodeKind::kUntil: {
      const auto lhs = bool_trace(phi.left(), tau);
      const auto rhs = bool_trace(phi.right(), tau);
      // holds_until[t]: first index >= t where lhs is false (n if none).
      std::vector<std::size_t> first_false(n + 1, n);
      for (std::size_t t = n; t-- > 0;) first_false[t] = lhs[t] ? first_false[t + 1] : t;
      std::vector<bool> out(n, false);
      for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = t + phi.window().lower;
        if (lo >= n) break;
        const std::size_t hi = std::min(t + phi.window().upper, n - 1);
        for (std::size_t s = lo; s <= hi && s < first_false[t]; ++s) {
          if (rhs[s]) {
            out[t] = true;
            break;
          }
        }
      }
      return out;
    }
  }
  return {};
}

void check_time(std::size_t t, const Trajectory& tau) {
  if (t >= tau.length()) {
    throw EvaluationError("time index " + std::to_string(t) +
                          " out of range for a trajectory of length " +
                          std::to_string(tau.length()));
  }
}

}  // namespace

std::vector<double> sliding_min(std::span<const double> values, Interval window) {
  return sliding_extremum(values, window, kLarge,
                          [](double a, double b) { return a < b; });
}

std::vector<double> sliding_max(std::span<const double> values, Interval window) {
  return sliding_extremum(values, window, -kLarge,
                          [](double a, double b) { return a > b; });
}

std::vector<double> robustness_trace(const Formula& phi, const Trajectory& tau,
                                     EvalMode mode) {
  check_variables(phi, tau);
  return Evaluator(tau, mode).eval(phi);
}

double robustness(const Formula& phi, const Trajectory& tau, std::size_t t,
                  EvalMode mode) {
  check_time(t, tau);
  return robustness_trace(phi, tau, mode)[t];
}

std::vector<bool> boolean_trace(const Formula& phi, const Trajectory& tau) {
  check_variables(phi, tau);
  return bool_trace(phi, tau);
}

bool boolean_sat(const Formula& phi, const Trajectory& tau, std::size_t t) {
  check_time(t, tau);
  check_variables(phi, tau);
  return sat(phi, tau, t);
}

}  // namespace stlcc
