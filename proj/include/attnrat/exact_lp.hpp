#pragma once

#include "attnrat/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace attnrat::lp {

using Matrix = std::vector<std::vector<Rational>>;

struct PhaseOneResult {
    bool feasible = false;
    std::vector<Rational> solution;  // z >= 0 with E z = f, when feasible
    std::size_t pivots = 0;
};

// Decides whether {z >= 0 : E z = f} is nonempty with the phase-one simplex
// method on an exact rational tableau. Bland's rule (lowest-index entering
// and leaving variables) guarantees termination without any tolerance.
PhaseOneResult find_nonnegative_solution(const Matrix& e, std::span<const Rational> f);

// Outcome for the system A x >= b with x free. Exactly one of the two
// certificates is populated (Farkas' lemma):
//   feasible:   point with A point >= b
//   infeasible: farkas y >= 0 with A^T y = 0 and b^T y = 1
struct InequalityResult {
    bool feasible = false;
    std::vector<Rational> point;
    std::vector<Rational> farkas;
    std::size_t pivots = 0;
};

InequalityResult solve_inequalities(const Matrix& a, std::span<const Rational> b);

// Independent certificate checks (plain matrix-vector arithmetic).
bool satisfies(const Matrix& a, std::span<const Rational> b, std::span<const Rational> x);
bool is_farkas_certificate(const Matrix& a, std::span<const Rational> b, std::span<const Rational> y);

}  // namespace attnrat::lp
