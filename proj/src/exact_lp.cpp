#include "attnrat/exact_lp.hpp"

#include "attnrat/errors.hpp"

#include <limits>
#include <optional>

namespace attnrat::lp {

namespace {

// Dense tableau for: minimize sum(artificials) s.t. E z + I a = f, z, a >= 0.
// Columns [0, cols) are the structural variables, [cols, cols + rows) the
// artificials. The last column holds the right-hand side.
class PhaseOneTableau {
public:
    PhaseOneTableau(const Matrix& e, std::span<const Rational> f)
        : rows_(e.size()), cols_(rows_ == 0 ? 0 : e.front().size()), width_(cols_ + rows_ + 1) {
        table_.assign(rows_, std::vector<Rational>(width_, Rational(0)));
        objective_.assign(width_, Rational(0));
        basis_.resize(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (e[i].size() != cols_) throw ValidationError("lp: ragged constraint matrix");
            // Flip rows so the right-hand side is nonnegative.
            const int flip = f[i] < 0 ? -1 : 1;
            for (std::size_t j = 0; j < cols_; ++j) table_[i][j] = flip * e[i][j];
            table_[i][cols_ + i] = 1;
            table_[i][width_ - 1] = flip * f[i];
            basis_[i] = cols_ + i;
            // Reduced costs: c_j - 1^T (row j), with c = 1 on artificials.
            for (std::size_t j = 0; j < cols_; ++j) objective_[j] -= table_[i][j];
            objective_[width_ - 1] -= table_[i][width_ - 1];
        }
    }

    std::size_t run() {
        std::size_t pivots = 0;
        for (;;) {
            auto entering = choose_entering();
            if (!entering) return pivots;
            auto leaving = choose_leaving(*entering);
            // Phase one is bounded below by 0, so a ratio-test failure cannot occur.
            if (!leaving) throw std::logic_error("lp: unbounded phase-one direction");
            pivot(*leaving, *entering);
            ++pivots;
        }
    }

    // Current objective value (sum of artificials).
    Rational objective_value() const { return -objective_[width_ - 1]; }

    std::vector<Rational> structural_solution() const {
        std::vector<Rational> z(cols_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            if (basis_[i] < cols_) z[basis_[i]] = table_[i][width_ - 1];
        }
        return z;
    }

private:
    std::optional<std::size_t> choose_entering() const {
        for (std::size_t j = 0; j + 1 < width_; ++j) {
            if (objective_[j] < 0) return j;
        }
        return std::nullopt;
    }

    std::optional<std::size_t> choose_leaving(std::size_t col) const {
        std::optional<std::size_t> best;
        Rational best_ratio;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (table_[i][col] <= 0) continue;
            Rational ratio = table_[i][width_ - 1] / table_[i][col];
            if (!best || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*best])) {
                best = i;
                best_ratio = ratio;
            }
        }
        return best;
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational pivot_value = table_[row][col];
        for (auto& entry : table_[row]) entry /= pivot_value;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == row || table_[i][col] == 0) continue;
            const Rational factor = table_[i][col];
            for (std::size_t j = 0; j < width_; ++j) table_[i][j] -= factor * table_[row][j];
        }
        if (objective_[col] != 0) {
            const Rational factor = objective_[col];
            for (std::size_t j = 0; j < width_; ++j) objective_[j] -= factor * table_[row][j];
        }
        basis_[row] = col;
    }

    std::size_t rows_;
    std::size_t cols_;
    std::size_t width_;
    std::vector<std::vector<Rational>> table_;
    std::vector<Rational> objective_;
    std::vector<std::size_t> basis_;
};

}  // namespace

PhaseOneResult find_nonnegative_solution(const Matrix& e, std::span<const Rational> f) {
    if (e.size() != f.size()) throw ValidationError("lp: matrix rows and right-hand side differ in length");
    PhaseOneTableau tableau(e, f);
    PhaseOneResult result;
    result.pivots = tableau.run();
    result.feasible = tableau.objective_value() == 0;
    if (result.feasible) result.solution = tableau.structural_solution();
    return result;
}

InequalityResult solve_inequalities(const Matrix& a, std::span<const Rational> b) {
    const std::size_t m = a.size();
    const std::size_t n = m == 0 ? 0 : a.front().size();
    if (b.size() != m) throw ValidationError("lp: matrix rows and right-hand side differ in length");

    // A x+ - A x- - s = b with x+, x-, s >= 0.
    Matrix primal(m, std::vector<Rational>(2 * n + m, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            primal[i][j] = a[i][j];
            primal[i][n + j] = -a[i][j];
        }
        primal[i][2 * n + i] = -1;
    }
    InequalityResult result;
    PhaseOneResult phase = find_nonnegative_solution(primal, b);
    result.pivots = phase.pivots;
    if (phase.feasible) {
        result.feasible = true;
        result.point.resize(n);
        for (std::size_t j = 0; j < n; ++j) result.point[j] = phase.solution[j] - phase.solution[n + j];
        return result;
    }

    // A^T y = 0, b^T y = 1, y >= 0.
    Matrix dual(n + 1, std::vector<Rational>(m, Rational(0)));
    std::vector<Rational> rhs(n + 1, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) dual[j][i] = a[i][j];
        dual[n][i] = b[i];
    }
    rhs[n] = 1;
    PhaseOneResult certificate = find_nonnegative_solution(dual, rhs);
    result.pivots += certificate.pivots;
    if (!certificate.feasible) throw std::logic_error("lp: neither a point nor a Farkas certificate was found");
    result.farkas = std::move(certificate.solution);
    return result;
}

bool satisfies(const Matrix& a, std::span<const Rational> b, std::span<const Rational> x) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != x.size()) return false;
        Rational lhs = 0;
        for (std::size_t j = 0; j < x.size(); ++j) lhs += a[i][j] * x[j];
        if (lhs < b[i]) return false;
    }
    return true;
}

bool is_farkas_certificate(const Matrix& a, std::span<const Rational> b, std::span<const Rational> y) {
    if (y.size() != a.size()) return false;
    const std::size_t n = a.empty() ? 0 : a.front().size();
    Rational by = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (y[i] < 0) return false;
        by += b[i] * y[i];
    }
    if (by <= 0) return false;
    for (std::size_t j = 0; j < n; ++j) {
        Rational column = 0;
        for (std::size_t i = 0; i < a.size(); ++i) column += a[i][j] * y[i];
        if (column != 0) return false;
    }
    return true;
}

}  // namespace attnrat::lp
