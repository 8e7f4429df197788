// banded.hpp -- small banded-matrix helpers for the compact-scheme pairs.
//
// Tridiagonal carries an LU factorization without pivoting (the P matrices are
// diagonally dominant); Banded stores a general square band and supports
// apply / transpose-apply plus row and column sums for kernel checks.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"

namespace pfrss {

class Tridiagonal {
public:
    Tridiagonal() = default;
    explicit Tridiagonal(int n) : n_(n), lower_(n, 0.0), diag_(n, 1.0), upper_(n, 0.0) {}

    int size() const { return n_; }
    void set_row(int i, double lo, double d, double up) {
        if (i > 0) lower_[i] = lo;
        diag_[i] = d;
        if (i + 1 < n_) upper_[i] = up;
    }
    double lower(int i) const { return lower_[i]; }
    double diag(int i) const { return diag_[i]; }
    double upper(int i) const { return upper_[i]; }

    bool is_identity() const {
        for (int i = 0; i < n_; ++i)
            if (diag_[i] != 1.0 || lower_[i] != 0.0 || upper_[i] != 0.0) return false;
        return true;
    }

    // LU without pivoting; throws on a vanishing pivot.
    void factor() {
        piv_ = diag_;
        mult_.assign(n_, 0.0);
        for (int i = 1; i < n_; ++i) {
            if (piv_[i - 1] == 0.0) fail(ErrorCode::numerical, "Tridiagonal::factor: zero pivot");
            mult_[i] = lower_[i] / piv_[i - 1];
            piv_[i] = diag_[i] - mult_[i] * upper_[i - 1];
        }
        if (piv_[n_ - 1] == 0.0) fail(ErrorCode::numerical, "Tridiagonal::factor: zero pivot");
        factored_ = true;
    }

    // in-place solve of T x = b with strided access (line solves inside tensor fields)
    void solve(double* x, std::size_t stride = 1) const {
        for (int i = 1; i < n_; ++i) x[i * stride] -= mult_[i] * x[(i - 1) * stride];
        x[(n_ - 1) * stride] /= piv_[n_ - 1];
        for (int i = n_ - 2; i >= 0; --i)
            x[i * stride] = (x[i * stride] - upper_[i] * x[(i + 1) * stride]) / piv_[i];
    }

    // solve of T^T x = b
    void solve_transpose(double* x, std::size_t stride = 1) const {
        x[0] /= piv_[0];
        for (int i = 1; i < n_; ++i)
            x[i * stride] = (x[i * stride] - upper_[i - 1] * x[(i - 1) * stride]) / piv_[i];
        for (int i = n_ - 2; i >= 0; --i) x[i * stride] -= mult_[i + 1] * x[(i + 1) * stride];
    }

    bool factored() const { return factored_; }

private:
    int n_ = 0;
    std::vector<double> lower_, diag_, upper_;
    std::vector<double> piv_, mult_;
    bool factored_ = false;
};

// square band with fixed half-bandwidth; entry (i,j) stored when |i-j| <= bw
class Banded {
public:
    Banded() = default;
    Banded(int n, int bw) : n_(n), bw_(bw), data_(static_cast<std::size_t>(n) * (2 * bw + 1), 0.0) {}

    int size() const { return n_; }
    int bandwidth() const { return bw_; }

    double at(int i, int j) const {
        int off = j - i;
        if (off < -bw_ || off > bw_) return 0.0;
        return data_[static_cast<std::size_t>(i) * (2 * bw_ + 1) + (off + bw_)];
    }
    void set(int i, int j, double v) {
        int off = j - i;
        if (off < -bw_ || off > bw_) fail(ErrorCode::invalid_argument, "Banded::set: outside band");
        data_[static_cast<std::size_t>(i) * (2 * bw_ + 1) + (off + bw_)] = v;
    }

    // y = M x (strided)
    void apply(const double* x, double* y, std::size_t stride = 1) const {
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            int j0 = i - bw_ < 0 ? 0 : i - bw_;
            int j1 = i + bw_ >= n_ ? n_ - 1 : i + bw_;
            for (int j = j0; j <= j1; ++j) s += at(i, j) * x[j * stride];
            y[i * stride] = s;
        }
    }

    // y = M^T x (strided)
    void apply_transpose(const double* x, double* y, std::size_t stride = 1) const {
        for (int j = 0; j < n_; ++j) y[j * stride] = 0.0;
        for (int i = 0; i < n_; ++i) {
            int j0 = i - bw_ < 0 ? 0 : i - bw_;
            int j1 = i + bw_ >= n_ ? n_ - 1 : i + bw_;
            for (int j = j0; j <= j1; ++j) y[j * stride] += at(i, j) * x[i * stride];
        }
    }

    double row_sum(int i) const {
        double s = 0.0;
        for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j) s += at(i, j);
        return s;
    }
    double column_sum(int j) const {
        double s = 0.0;
        for (int i = std::max(0, j - bw_); i <= std::min(n_ - 1, j + bw_); ++i) s += at(i, j);
        return s;
    }

private:
    int n_ = 0;
    int bw_ = 0;
    std::vector<double> data_;
};

}  // namespace pfrss
