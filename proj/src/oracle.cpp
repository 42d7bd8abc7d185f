#include "halftime/oracle.hpp"

#include <cmath>

namespace halftime::oracle {

Interval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double center = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::uint64_t chernoff_trials(double bound, double alpha) {
  // Multiplicative Chernoff with relative error 1: n ≥ 3·ln(2/alpha)/bound.
  return static_cast<std::uint64_t>(std::ceil(3.0 * std::log(2.0 / alpha) / bound));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::fail: return "fail";
  }
  return "?";
}

Verdict judge(double estimate, Interval ci, double bound) {
  if (ci.lower > bound) return Verdict::fail;
  if (estimate <= bound && ci.upper <= 2 * bound) return Verdict::pass;
  return Verdict::inconclusive;
}

}  // namespace halftime::oracle
