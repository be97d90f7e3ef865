// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the stripml Project.

// Reference implementations used only by tests. They share no code with the
// library and favor transparency over speed.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline double rbf(const std::vector<double>& a, const std::vector<double>& b, double sigma) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-d2 / (2.0 * sigma * sigma));
}

/// Gauss-Jordan elimination with partial pivoting in long double.
inline Matrix inverse(const Matrix& a) {
    const std::size_t n = a.size();
    std::vector<std::vector<long double>> w(n, std::vector<long double>(2 * n, 0.0L));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w[i][j] = a[i][j];
        w[i][n + i] = 1.0L;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(w[r][col]) > std::fabs(w[pivot][col])) pivot = r;
        }
        if (w[pivot][col] == 0.0L) throw std::runtime_error("singular matrix");
        std::swap(w[pivot], w[col]);
        const long double p = w[col][col];
        for (auto& v : w[col]) v /= p;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || w[r][col] == 0.0L) continue;
            const long double f = w[r][col];
            for (std::size_t j = 0; j < 2 * n; ++j) w[r][j] -= f * w[col][j];
        }
    }
    Matrix out(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) out[i][j] = static_cast<double>(w[i][n + j]);
    }
    return out;
}

struct LsSvmSolution {
    double bias = 0.0;
    std::vector<double> alphas;
};

/// Solves the bordered system [0 y'; y Omega + I/gamma][b; alpha] = [0; 1]
/// through an explicit inverse.
inline LsSvmSolution lssvm(const Matrix& x, const std::vector<int>& y, double sigma, double gamma) {
    const std::size_t m = x.size();
    Matrix a(m + 1, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        a[0][i + 1] = y[i];
        a[i + 1][0] = y[i];
        for (std::size_t j = 0; j < m; ++j) {
            a[i + 1][j + 1] = y[i] * y[j] * rbf(x[i], x[j], sigma) + (i == j ? 1.0 / gamma : 0.0);
        }
    }
    const Matrix inv = inverse(a);
    LsSvmSolution s;
    s.alphas.resize(m);
    for (std::size_t r = 0; r <= m; ++r) {
        long double v = 0.0L;
        for (std::size_t j = 1; j <= m; ++j) v += static_cast<long double>(inv[r][j]);
        if (r == 0) {
            s.bias = static_cast<double>(v);
        } else {
            s.alphas[r - 1] = static_cast<double>(v);
        }
    }
    return s;
}

inline double svm_objective(const Matrix& q, const std::vector<double>& a) {
    double lin = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        lin += a[i];
        for (std::size_t j = 0; j < a.size(); ++j) quad += a[i] * q[i][j] * a[j];
    }
    return lin - 0.5 * quad;
}

/// Euclidean projection onto {0 <= a <= c, y'a = 0} by bisection on the
/// multiplier of the equality constraint.
inline std::vector<double> project(const std::vector<double>& v, const std::vector<int>& y, double c) {
    auto at = [&](double mu) {
        std::vector<double> a(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::clamp(v[i] - mu * y[i], 0.0, c);
        return a;
    };
    auto residual = [&](double mu) {
        const auto a = at(mu);
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += y[i] * a[i];
        return s;
    };
    double lo = -1.0;
    double hi = 1.0;
    while (residual(lo) < 0.0) lo *= 2.0;
    while (residual(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    return at(0.5 * (lo + hi));
}

/// Maximizes the soft-margin dual by accelerated projected gradient ascent.
/// Returns the optimal objective.
inline double svm_dual_max(const Matrix& x, const std::vector<int>& y, double sigma, double c,
                           int iterations = 20000) {
    const std::size_t m = x.size();
    Matrix q(m, std::vector<double>(m));
    double lipschitz = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            q[i][j] = y[i] * y[j] * rbf(x[i], x[j], sigma);
            row += std::fabs(q[i][j]);
        }
        lipschitz = std::max(lipschitz, row);
    }
    std::vector<double> a(m, 0.0);
    std::vector<double> z = a;
    double t = 1.0;
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> step(m);
        for (std::size_t i = 0; i < m; ++i) {
            double g = 1.0;
            for (std::size_t j = 0; j < m; ++j) g -= q[i][j] * z[j];
            step[i] = z[i] + g / lipschitz;
        }
        const auto next = project(step, y, c);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        for (std::size_t i = 0; i < m; ++i) z[i] = next[i] + (t - 1.0) / t_next * (next[i] - a[i]);
        a = next;
        t = t_next;
    }
    return svm_objective(q, a);
}

/// P(s+ > s-) + P(s+ = s-)/2 by exhaustive pair counting.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] <= 0) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] > 0) continue;
            pairs += 1.0;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / pairs;
}

}  // namespace oracle
