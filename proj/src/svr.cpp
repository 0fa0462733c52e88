#include "trajpred/svr.hpp"

#include "trajpred/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace trajpred::svr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounds that the KKT conditions of sample i place on the bias, given
// g = y_i - (K beta)_i.
struct BiasBounds {
    double lo = -kInf;
    double hi = kInf;
};

BiasBounds bias_bounds(double beta, double g, double c, double eps) {
    if (beta == 0.0) return {g - eps, g + eps};
    if (beta >= c) return {-kInf, g - eps};
    if (beta <= -c) return {g + eps, kInf};
    if (beta > 0.0) return {g - eps, g - eps};
    return {g + eps, g + eps};
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

std::vector<double> kernel_matrix(std::span<const double> z, double gamma) {
    const std::size_t n = z.size();
    std::vector<double> k(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        k[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            k[i * n + j] = k[j * n + i] = rbf_kernel(z[i], z[j], gamma);
        }
    }
    return k;
}

// Exact minimizer of
//   phi(t) = 1/2 eta t^2 + g t + eps (|bi + t| + |bj - t|)
// over t in [lo, hi]. Returns t and phi(t) - phi(0).
std::pair<double, double> solve_pair(double bi, double bj, double eta, double g, double eps, double lo, double hi) {
    const auto phi = [&](double t) {
        return 0.5 * eta * t * t + g * t + eps * (std::abs(bi + t) + std::abs(bj - t));
    };
    double knots[4] = {lo, hi, -bi, bj};
    std::sort(knots, knots + 4);

    const double base = phi(0.0);
    double best_t = 0.0;
    double best_val = base;
    const auto consider = [&](double t) {
        t = std::clamp(t, lo, hi);
        const double v = phi(t);
        if (v < best_val) {
            best_val = v;
            best_t = t;
        }
    };
    for (int k = 0; k < 4; ++k) consider(knots[k]);
    for (int k = 0; k < 3; ++k) {
        const double a = std::max(knots[k], lo);
        const double b = std::min(knots[k + 1], hi);
        if (!(a < b) || !(eta > 0.0)) continue;
        const double mid = 0.5 * (a + b);
        const double slope = g + eps * (sign(bi + mid) - sign(bj - mid));
        consider(std::clamp(-slope / eta, a, b));
    }
    return {best_t, best_val - base};
}

double snap(double beta, double c) {
    const double tiny = 1e-12 * c;
    if (std::abs(beta) <= tiny) return 0.0;
    if (std::abs(beta - c) <= tiny) return c;
    if (std::abs(beta + c) <= tiny) return -c;
    return beta;
}

}  // namespace

void SvrParams::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("SVR C must be positive and finite");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ValidationError("SVR epsilon must be non-negative");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("SVR gamma must be positive");
    if (!(tolerance > 0.0)) throw ValidationError("SVR tolerance must be positive");
    if (max_passes == 0) throw ValidationError("SVR max_passes must be positive");
}

Scaler Scaler::fit(std::span<const double> values) {
    Scaler s;
    if (values.empty()) return s;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    s.mean = mean;
    const double sd = std::sqrt(var);
    s.scale = (sd > 1e-12 * std::max(1.0, std::abs(mean))) ? sd : 1.0;
    return s;
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    if (a.size() != b.size()) throw ValidationError("rbf_kernel: dimension mismatch");
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

double rbf_kernel(double a, double b, double gamma) {
    const double d = a - b;
    return std::exp(-gamma * d * d);
}

double SvrModel::decision(double z) const {
    double f = bias;
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (betas[i] != 0.0) f += betas[i] * rbf_kernel(inputs[i], z, params.gamma);
    }
    return f;
}

double dual_objective(std::span<const double> betas, std::span<const double> inputs,
                      std::span<const double> targets, const SvrParams& params) {
    const std::size_t n = betas.size();
    double quad = 0.0;
    double lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            quad += betas[i] * betas[j] * rbf_kernel(inputs[i], inputs[j], params.gamma);
        }
        lin += params.epsilon * std::abs(betas[i]) - targets[i] * betas[i];
    }
    return 0.5 * quad + lin;
}

double kkt_violation(std::span<const double> betas, std::span<const double> inputs,
                     std::span<const double> targets, const SvrParams& params) {
    const std::size_t n = betas.size();
    double lo = -kInf;
    double hi = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        double kb = 0.0;
        for (std::size_t j = 0; j < n; ++j) kb += betas[j] * rbf_kernel(inputs[i], inputs[j], params.gamma);
        const auto bb = bias_bounds(betas[i], targets[i] - kb, params.c, params.epsilon);
        lo = std::max(lo, bb.lo);
        hi = std::min(hi, bb.hi);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) return 0.0;
    return lo - hi;
}

double kkt_residual(const SvrModel& model, std::span<const double> times, std::span<const double> values) {
    const double eps = model.params.epsilon;
    const double c = model.params.c;
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double residual =
            model.target_scaler.forward(values[i]) - model.decision(model.input_scaler.forward(times[i]));
        const double beta = model.betas[i];
        double v = 0.0;
        if (beta == 0.0) {
            v = std::abs(residual) - eps;
        } else if (beta >= c) {
            v = eps - residual;
        } else if (beta <= -c) {
            v = residual + eps;
        } else {
            v = std::abs(residual - eps * sign(beta));
        }
        worst = std::max(worst, v);
    }
    return worst;
}

SvrModel svr_train(std::span<const double> times, std::span<const double> values, const SvrParams& params,
                   std::vector<double>* objective_log) {
    params.validate();
    if (times.size() != values.size()) throw ValidationError("svr_train: times and values differ in length");
    const std::size_t n = times.size();
    if (n < 2) throw ValidationError("svr_train: need at least 2 samples");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i])) throw ValidationError("svr_train: non-finite sample");
        if (i > 0 && !(times[i] > times[i - 1])) throw ValidationError("svr_train: times must be strictly increasing");
    }

    SvrModel model;
    model.params = params;
    model.input_scaler = Scaler::fit(times);
    model.target_scaler = Scaler::fit(values);
    model.inputs.resize(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        model.inputs[i] = model.input_scaler.forward(times[i]);
        y[i] = model.target_scaler.forward(values[i]);
    }

    const double c = params.c;
    const double eps = params.epsilon;
    const auto kmat = kernel_matrix(model.inputs, params.gamma);
    const auto kat = [&](std::size_t i, std::size_t j) { return kmat[i * n + j]; };

    std::vector<double>& beta = model.betas;
    beta.assign(n, 0.0);
    // grad[i] = (K beta)_i - y_i, the gradient of the smooth part.
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) grad[i] = -y[i];
    double objective = 0.0;

    std::size_t iter = 0;
    double violation = 0.0;
    while (true) {
        std::size_t up = 0;
        std::size_t down = 0;
        double lo = -kInf;
        double hi = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            const auto bb = bias_bounds(beta[i], -grad[i], c, eps);
            if (bb.lo > lo) {
                lo = bb.lo;
                up = i;
            }
            if (bb.hi < hi) {
                hi = bb.hi;
                down = i;
            }
        }
        violation = (std::isfinite(lo) && std::isfinite(hi)) ? lo - hi : 0.0;
        if (violation < params.tolerance || up == down) break;
        if (iter >= params.max_passes) break;

        // Move beta_up by +t and beta_down by -t.
        const double bi = beta[up];
        const double bj = beta[down];
        const double eta = kat(up, up) + kat(down, down) - 2.0 * kat(up, down);
        const double g = grad[up] - grad[down];
        const double t_lo = std::max(-c - bi, bj - c);
        const double t_hi = std::min(c - bi, bj + c);
        const auto [t, delta] = solve_pair(bi, bj, eta, g, eps, t_lo, t_hi);
        ++iter;
        if (t == 0.0 || !(delta < 0.0)) break;  // no representable progress left

        const double new_i = snap(bi + t, c);
        const double new_j = snap(bj - t, c);
        const double di = new_i - bi;
        const double dj = new_j - bj;
        beta[up] = new_i;
        beta[down] = new_j;
        for (std::size_t k = 0; k < n; ++k) grad[k] += di * kat(k, up) + dj * kat(k, down);
        objective += delta;
        if (objective_log != nullptr) objective_log->push_back(objective);
    }

    model.stats.iterations = iter;
    model.stats.kkt_violation = std::max(0.0, violation);
    model.stats.objective = dual_objective(beta, model.inputs, y, params);
    if (violation > 10.0 * params.tolerance) {
        throw ConvergenceError("SVR solver stopped after " + std::to_string(iter) +
                                   " updates with KKT violation " + std::to_string(violation),
                               violation);
    }

    // Bias from free support vectors, else the midpoint of the feasible interval.
    double sum = 0.0;
    std::size_t free = 0;
    double lo = -kInf;
    double hi = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = -grad[i];
        if (beta[i] != 0.0 && std::abs(beta[i]) < c) {
            sum += g - eps * sign(beta[i]);
            ++free;
        }
        const auto bb = bias_bounds(beta[i], g, c, eps);
        lo = std::max(lo, bb.lo);
        hi = std::min(hi, bb.hi);
    }
    if (free > 0) {
        model.bias = sum / static_cast<double>(free);
    } else if (std::isfinite(lo) && std::isfinite(hi)) {
        model.bias = 0.5 * (lo + hi);
    } else if (std::isfinite(lo)) {
        model.bias = lo;
    } else if (std::isfinite(hi)) {
        model.bias = hi;
    }
    return model;
}

double svr_predict(const SvrModel& model, double t) {
    return model.target_scaler.inverse(model.decision(model.input_scaler.forward(t)));
}

}  // namespace trajpred::svr
