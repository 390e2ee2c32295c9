#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fliess/rational.hpp"

namespace fliess {

// Dense matrix over the rationals.  Everything in this header is exact
// Gaussian elimination; no pivoting strategy is needed beyond skipping
// zeros.
class RatMatrix {
public:
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rat& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rat& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

private:
    std::size_t rows_, cols_;
    std::vector<Rat> data_;
};

// Row-by-row independence analysis.  Rows are visited in order; each row
// is either the next independent row or is recorded together with its
// exact expansion over the independent rows seen so far.  This yields
// both a deterministic "first independent rows" selection and an
// echelonized basis of the left kernel (row i minus its expansion).
struct RowAnalysis {
    std::vector<std::size_t> independent;
    struct Dependent {
        std::size_t row;
        std::vector<Rat> combo;  // row = sum combo[k] * independent rows
    };
    std::vector<Dependent> dependents;
};

inline RowAnalysis analyze_rows(const RatMatrix& m) {
    struct Echelon {
        std::vector<Rat> vec;
        std::size_t pivot;
        std::vector<Rat> rep;  // vec = sum rep[k] * original independent rows
    };
    std::vector<Echelon> ech;
    RowAnalysis out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<Rat> cur(m.cols());
        for (std::size_t j = 0; j < m.cols(); ++j) cur[j] = m.at(i, j);
        std::vector<Rat> acc(out.independent.size(), Rat(0));
        for (const Echelon& e : ech) {
            if (cur[e.pivot] == 0) continue;
            Rat f = cur[e.pivot] / e.vec[e.pivot];
            for (std::size_t j = 0; j < m.cols(); ++j) cur[j] -= f * e.vec[j];
            for (std::size_t k = 0; k < e.rep.size(); ++k) acc[k] += f * e.rep[k];
        }
        std::size_t pivot = m.cols();
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (cur[j] != 0) {
                pivot = j;
                break;
            }
        if (pivot == m.cols()) {
            out.dependents.push_back({i, acc});
        } else {
            std::vector<Rat> rep(out.independent.size() + 1, Rat(0));
            for (std::size_t k = 0; k < acc.size(); ++k) rep[k] = -acc[k];
            rep.back() = 1;
            out.independent.push_back(i);
            ech.push_back({std::move(cur), pivot, std::move(rep)});
        }
    }
    return out;
}

inline std::size_t rat_rank(const RatMatrix& m) {
    return analyze_rows(m).independent.size();
}

// One exact solution of A x = b, or nullopt when inconsistent.  Free
// variables are set to zero.
inline std::optional<std::vector<Rat>> solve(const RatMatrix& A,
                                             const std::vector<Rat>& b) {
    std::size_t n = A.rows(), m = A.cols();
    RatMatrix aug(n, m + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, m) = b[i];
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = r; i < n; ++i)
            if (aug.at(i, c) != 0) {
                sel = i;
                break;
            }
        if (sel == n) continue;
        if (sel != r)
            for (std::size_t j = 0; j <= m; ++j) std::swap(aug.at(sel, j), aug.at(r, j));
        Rat inv = 1 / aug.at(r, c);
        for (std::size_t j = c; j <= m; ++j) aug.at(r, j) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || aug.at(i, c) == 0) continue;
            Rat f = aug.at(i, c);
            for (std::size_t j = c; j <= m; ++j) aug.at(i, j) -= f * aug.at(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < n; ++i)
        if (aug.at(i, m) != 0) return std::nullopt;
    std::vector<Rat> x(m, Rat(0));
    for (std::size_t k = 0; k < pivot_col.size(); ++k) x[pivot_col[k]] = aug.at(k, m);
    return x;
}

// Exact inverse, or nullopt when singular.
inline std::optional<RatMatrix> invert(const RatMatrix& A) {
    if (A.rows() != A.cols()) return std::nullopt;
    std::size_t n = A.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
        aug.at(i, n + i) = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t sel = n;
        for (std::size_t i = c; i < n; ++i)
            if (aug.at(i, c) != 0) {
                sel = i;
                break;
            }
        if (sel == n) return std::nullopt;
        if (sel != c)
            for (std::size_t j = 0; j < 2 * n; ++j) std::swap(aug.at(sel, j), aug.at(c, j));
        Rat inv = 1 / aug.at(c, c);
        for (std::size_t j = 0; j < 2 * n; ++j) aug.at(c, j) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || aug.at(i, c) == 0) continue;
            Rat f = aug.at(i, c);
            for (std::size_t j = 0; j < 2 * n; ++j) aug.at(i, j) -= f * aug.at(c, j);
        }
    }
    RatMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
    return out;
}

// Matrix-vector product.
inline std::vector<Rat> matvec(const RatMatrix& A, const std::vector<Rat>& x) {
    std::vector<Rat> y(A.rows(), Rat(0));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t j = 0; j < A.cols(); ++j) y[i] += A.at(i, j) * x[j];
    return y;
}

}  // namespace fliess
