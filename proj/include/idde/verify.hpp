#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace idde {

struct PropertyResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<PropertyResult> properties;
  bool passed() const;
};

/// lemma1, transform-equivalence, threshold, comparison, corollary2, positivity.
const std::vector<std::string>& suite_names();

/// Throws ConfigError for an unknown suite.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);

/// Representation formula against solve() on `problems` random problems
/// (m <= 2, <= 4 impulses, horizon <= 10, nonzero f and phi, one additive
/// jump), `samples` times each, relative residual <= 1e-4.
SuiteResult verify_lemma1(std::uint64_t seed, std::size_t problems = 10, std::size_t samples = 20);

/// Conjugated impulsive solutions against direct simulation of the
/// impulse-free equation: sup-norm, continuity at impulses, sign counts.
SuiteResult verify_transform_equivalence(std::uint64_t seed);

/// Unit-lag threshold: A = 0.30 certified non-oscillating with quiet
/// simulations on [10, 200]; A = 0.40 certified oscillating with >= 10 sign
/// changes on [0, 200] for every random initial function.
SuiteResult verify_threshold(std::uint64_t seed);

/// Certificate transfer between ordered problems and the violating case.
SuiteResult verify_comparison(std::uint64_t seed);

/// Impulses with B_j >= 1 added to non-oscillating equations.
SuiteResult verify_corollary2(std::uint64_t seed);

/// X(t,s) > 0 on a 20x20 grid and X(t,t1) >= exp{-int u} prod B for
/// problems certified by the fixed-point iteration.
SuiteResult verify_positivity(std::uint64_t seed);

/// One line per property plus a summary line.
void write_suite(std::ostream& os, const SuiteResult& result);

}  // namespace idde
