#include "tarifflab/lp.hpp"

namespace tarifflab {

namespace {

constexpr int kDegenerateSwitch = 40;

}  // namespace

LpResult solve_lp_max(const std::vector<Rat>& c, const std::vector<std::vector<Rat>>& A,
                      const std::vector<Rat>& b) {
    size_t rows = A.size();
    size_t n = c.size();
    if (b.size() != rows) throw std::invalid_argument("lp: row count mismatch");
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("lp: column count mismatch");
    for (const auto& bi : b)
        if (bi < 0) throw std::invalid_argument("lp: rhs must be nonnegative");

    size_t cols = n + rows;  // structural + slack
    // tableau[i]: constraint rows; z holds negated reduced costs; rhs separate
    std::vector<std::vector<Rat>> T(rows, std::vector<Rat>(cols, Rat(0)));
    std::vector<Rat> rhs = b;
    std::vector<Rat> z(cols, Rat(0));
    Rat objective = 0;
    for (size_t i = 0; i < rows; ++i) {
        for (size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
        T[i][n + i] = 1;
    }
    for (size_t j = 0; j < n; ++j) z[j] = -c[j];

    std::vector<size_t> basis(rows);
    for (size_t i = 0; i < rows; ++i) basis[i] = n + i;

    int degenerate_run = 0;
    while (true) {
        bool bland = degenerate_run >= kDegenerateSwitch;
        // entering column
        size_t enter = cols;
        if (bland) {
            for (size_t j = 0; j < cols; ++j)
                if (z[j] < 0) {
                    enter = j;
                    break;
                }
        } else {
            const Rat* best = nullptr;
            for (size_t j = 0; j < cols; ++j)
                if (z[j] < 0 && (!best || z[j] < *best)) {
                    best = &z[j];
                    enter = j;
                }
        }
        if (enter == cols) break;  // optimal

        // ratio test; ties by smallest basis variable index
        size_t leave = rows;
        Rat best_ratio;
        for (size_t i = 0; i < rows; ++i) {
            if (T[i][enter] <= 0) continue;
            Rat ratio = rhs[i] / T[i][enter];
            if (leave == rows || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == rows) {
            return LpResult{LpStatus::unbounded, Rat(0), {}};
        }
        degenerate_run = best_ratio == 0 ? degenerate_run + 1 : 0;

        // pivot on (leave, enter)
        Rat piv = T[leave][enter];
        for (size_t j = 0; j < cols; ++j)
            if (T[leave][j] != 0) T[leave][j] /= piv;
        rhs[leave] /= piv;
        T[leave][enter] = 1;
        for (size_t i = 0; i < rows; ++i) {
            if (i == leave) continue;
            if (T[i][enter] == 0) continue;
            Rat f = T[i][enter];
            for (size_t j = 0; j < cols; ++j)
                if (T[leave][j] != 0) T[i][j] -= f * T[leave][j];
            rhs[i] -= f * rhs[leave];
            T[i][enter] = 0;
        }
        if (z[enter] != 0) {
            Rat f = z[enter];
            for (size_t j = 0; j < cols; ++j)
                if (T[leave][j] != 0) z[j] -= f * T[leave][j];
            objective -= f * rhs[leave];
            z[enter] = 0;
        }
        basis[leave] = enter;
    }

    LpResult res;
    res.status = LpStatus::optimal;
    res.objective = objective;
    res.x.assign(n, Rat(0));
    for (size_t i = 0; i < rows; ++i)
        if (basis[i] < n) res.x[basis[i]] = rhs[i];
    return res;
}

}  // namespace tarifflab
