#include "svr_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

std::vector<double> gram(const std::vector<double>& x, double gamma) {
    const std::size_t n = x.size();
    std::vector<double> k(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = x[i] - x[j];
            k[i * n + j] = std::exp(-gamma * d * d);
        }
    }
    return k;
}

double objective_2n(const std::vector<double>& v, const std::vector<double>& k, const std::vector<double>& y,
                    double eps) {
    const std::size_t n = y.size();
    double quad = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double bi = v[i] - v[n + i];
        for (std::size_t j = 0; j < n; ++j) quad += bi * (v[j] - v[n + j]) * k[i * n + j];
        lin += eps * (v[i] + v[n + i]) - y[i] * bi;
    }
    return 0.5 * quad + lin;
}

// Euclidean projection onto {0 <= v <= C, sum(v[:n]) - sum(v[n:]) = 0}.
void project(std::vector<double>& v, std::size_t n, double c) {
    const auto residual = [&](double mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += std::clamp(v[i] - mu, 0.0, c);
            s -= std::clamp(v[n + i] + mu, 0.0, c);
        }
        return s;
    };
    double bound = c;
    for (double x : v) bound = std::max(bound, std::abs(x) + c);
    double lo = -bound;
    double hi = bound;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * bound; ++it) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0.0 ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::clamp(v[i] - mu, 0.0, c);
        v[n + i] = std::clamp(v[n + i] + mu, 0.0, c);
    }
}

}  // namespace

Normalized normalize(const std::vector<double>& times, const std::vector<double>& values) {
    const auto scale = [](const std::vector<double>& v, std::vector<double>& out) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        double sd = std::sqrt(var / static_cast<double>(v.size()));
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) sd = 1.0;
        out.clear();
        for (double x : v) out.push_back((x - mean) / sd);
    };
    Normalized n;
    scale(times, n.inputs);
    scale(values, n.targets);
    return n;
}

double objective(const std::vector<double>& betas, const std::vector<double>& inputs,
                 const std::vector<double>& targets, double epsilon, double gamma) {
    const std::size_t n = betas.size();
    std::vector<double> v(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::max(betas[i], 0.0);
        v[n + i] = std::max(-betas[i], 0.0);
    }
    return objective_2n(v, gram(inputs, gamma), targets, epsilon);
}

DualSolution solve_dual(const std::vector<double>& inputs, const std::vector<double>& targets, double c,
                        double epsilon, double gamma, std::size_t max_iterations) {
    const std::size_t n = inputs.size();
    const auto k = gram(inputs, gamma);
    // Lipschitz constant of the gradient: 2 * lambda_max(K) <= 2 * max row sum.
    double row_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::abs(k[i * n + j]);
        row_max = std::max(row_max, s);
    }
    const double step = 1.0 / (2.0 * row_max);

    std::vector<double> x(2 * n, 0.0);
    std::vector<double> w = x;
    std::vector<double> next(2 * n);
    std::vector<double> kb(n);
    double momentum = 1.0;
    double f_prev = objective_2n(x, k, targets, epsilon);
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += k[i * n + j] * (w[j] - w[n + j]);
            kb[i] = s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = w[i] - step * (kb[i] + epsilon - targets[i]);
            next[n + i] = w[n + i] - step * (-kb[i] + epsilon + targets[i]);
        }
        project(next, n, c);

        const double f = objective_2n(next, k, targets, epsilon);
        double moved = 0.0;
        for (std::size_t i = 0; i < 2 * n; ++i) moved = std::max(moved, std::abs(next[i] - x[i]));
        if (f > f_prev) {
            // Adaptive restart: drop the momentum and retry from x.
            momentum = 1.0;
            w = x;
            continue;
        }
        const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        const double beta = (momentum - 1.0) / m_next;
        for (std::size_t i = 0; i < 2 * n; ++i) w[i] = next[i] + beta * (next[i] - x[i]);
        x = next;
        momentum = m_next;
        f_prev = f;
        if (moved < 1e-15 * std::max(1.0, c)) break;
    }

    DualSolution out;
    out.betas.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.betas[i] = x[i] - x[n + i];
    out.objective = objective_2n(x, k, targets, epsilon);
    out.iterations = it;
    return out;
}

}  // namespace oracle
