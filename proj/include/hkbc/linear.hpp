#pragma once

// L2-regularised linear classifiers: logistic regression and the
// squared-hinge linear SVC. Positive decision means OFF.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "features.hpp"
#include "label.hpp"
#include "detail/training_set.hpp"

namespace hkbc {

enum class LinearLoss : std::uint8_t { logistic, squared_hinge };

inline std::string_view to_string(LinearLoss l) { return l == LinearLoss::logistic ? "logistic" : "squared_hinge"; }

struct LinearConfig {
    LinearLoss loss = LinearLoss::squared_hinge;
    double C = 1.0;
    int max_iter = 1000;
    double tol = 1e-4;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(C > 0.0) || !std::isfinite(C)) throw UsageError("C must be positive");
        if (!(tol > 0.0)) throw UsageError("tol must be positive");
        if (max_iter < 0) throw UsageError("max_iter must be non-negative");
    }
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    LinearConfig config;
    double objective = 0.0;               // J at the returned parameters
    int iterations = 0;
    std::vector<double> objective_trace;  // J after every accepted step, starting at w = 0

    std::size_t dim() const { return weights.size(); }
};

struct ObjectiveGrad {
    double objective = 0.0;
    std::vector<double> grad_w;
    double grad_b = 0.0;
};

/// Loss and its derivative with respect to the decision value f, for a
/// target y in {-1, +1}.
inline std::pair<double, double> linear_loss(LinearLoss loss, double y, double f) {
    const double z = y * f;
    if (loss == LinearLoss::logistic) {
        // log(1 + exp(-z)) without overflow
        const double value = z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
        const double sig_neg = z > 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
        return {value, -y * sig_neg};
    }
    const double m = 1.0 - z;
    if (m > 0.0) return {m * m, -2.0 * y * m};
    return {0.0, 0.0};
}

/// J(w, b) = 0.5 |w|^2 + C * sum_i L(y_i, w.x_i + b) and its gradient.
/// The hinge subgradient takes the zero branch at exactly zero margin.
inline ObjectiveGrad linear_objective_grad(std::span<const double> w, double b, std::span<const SparseVector> X,
                                           std::span<const Label> y, const LinearConfig& cfg) {
    if (X.size() != y.size()) throw UsageError("feature and label counts differ");
    ObjectiveGrad out;
    out.grad_w.assign(w.begin(), w.end());
    double reg = 0.0;
    for (const double v : w) reg += v * v;
    double data = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (X[i].dim != w.size()) throw UsageError("linear model dimension mismatch");
        const double sign = label_sign(y[i]);
        const auto [l, dl] = linear_loss(cfg.loss, sign, dot(w, X[i]) + b);
        data += l;
        if (dl != 0.0) {
            const double scale = cfg.C * dl;
            for (const auto& e : X[i].entries) out.grad_w[e.index] += scale * e.value;
            out.grad_b += scale;
        }
    }
    out.objective = 0.5 * reg + cfg.C * data;
    return out;
}

inline ObjectiveGrad linear_objective_grad(const LinearModel& model, std::span<const SparseVector> X,
                                           std::span<const Label> y) {
    return linear_objective_grad(model.weights, model.bias, X, y, model.config);
}

namespace detail {

// Parameters are packed as [w..., b].
struct LbfgsMemory {
    std::deque<std::vector<double>> s, y;
    std::deque<double> rho;
    std::size_t capacity = 10;

    void clear() {
        s.clear();
        y.clear();
        rho.clear();
    }

    void push(std::vector<double> sv, std::vector<double> yv) {
        double sy = 0.0, yy = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < sv.size(); ++i) {
            sy += sv[i] * yv[i];
            yy += yv[i] * yv[i];
            ss += sv[i] * sv[i];
        }
        if (!(sy > 1e-12 * std::sqrt(ss * yy))) return;  // curvature condition
        s.push_back(std::move(sv));
        y.push_back(std::move(yv));
        rho.push_back(1.0 / sy);
        if (s.size() > capacity) {
            s.pop_front();
            y.pop_front();
            rho.pop_front();
        }
    }

    std::vector<double> direction(const std::vector<double>& g) const {
        std::vector<double> q(g);
        std::vector<double> alpha(s.size());
        for (std::size_t k = s.size(); k-- > 0;) {
            double a = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) a += s[k][i] * q[i];
            a *= rho[k];
            alpha[k] = a;
            for (std::size_t i = 0; i < q.size(); ++i) q[i] -= a * y[k][i];
        }
        if (!s.empty()) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                sy += s.back()[i] * y.back()[i];
                yy += y.back()[i] * y.back()[i];
            }
            const double gamma = sy / yy;
            for (auto& v : q) v *= gamma;
        }
        for (std::size_t k = 0; k < s.size(); ++k) {
            double b = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) b += y[k][i] * q[i];
            b *= rho[k];
            for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - b) * s[k][i];
        }
        for (auto& v : q) v = -v;
        return q;
    }
};

inline std::vector<double> pack(const ObjectiveGrad& og) {
    std::vector<double> g(og.grad_w);
    g.push_back(og.grad_b);
    return g;
}

}  // namespace detail

/// Minimises J with limited-memory BFGS and Armijo backtracking, starting
/// from w = 0, b = 0. Stops when |dJ| < tol * max(1, J) or after max_iter
/// accepted steps. Every accepted step decreases J.
inline LinearModel train_linear(std::span<const SparseVector> X, std::span<const Label> y,
                                const LinearConfig& cfg = {}) {
    cfg.validate();
    detail::check_training_set(X, y, 2);
    const std::size_t dim = detail::common_dim(X);
    const std::size_t n = X.size();

    LinearModel model;
    model.config = cfg;
    model.weights.assign(dim, 0.0);

    ObjectiveGrad cur = linear_objective_grad(model.weights, model.bias, X, y, cfg);
    if (!std::isfinite(cur.objective)) throw NumericError("linear objective is not finite at the origin");
    model.objective_trace.push_back(cur.objective);
    std::vector<double> g = detail::pack(cur);

    detail::LbfgsMemory memory;
    std::vector<double> margins(n, 0.0), dir_margins(n, 0.0);
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        std::vector<double> d = memory.direction(g);
        double gd = 0.0, gg = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            gd += g[i] * d[i];
            gg += g[i] * g[i];
        }
        if (!(gd < 0.0)) {
            memory.clear();
            for (std::size_t i = 0; i < g.size(); ++i) d[i] = -g[i];
            gd = -gg;
        }
        if (gg == 0.0) break;

        const std::span<const double> dw(d.data(), dim);
        const double db = d[dim];
        double ww = 0.0, wd = 0.0, dd = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            ww += model.weights[k] * model.weights[k];
            wd += model.weights[k] * dw[k];
            dd += dw[k] * dw[k];
        }
        for (std::size_t i = 0; i < n; ++i) {
            margins[i] = dot(model.weights, X[i]) + model.bias;
            dir_margins[i] = dot(dw, X[i]) + db;
        }
        const auto objective_at = [&](double t) {
            double data = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                data += linear_loss(cfg.loss, label_sign(y[i]), margins[i] + t * dir_margins[i]).first;
            }
            return 0.5 * (ww + 2.0 * t * wd + t * t * dd) + cfg.C * data;
        };

        double t = memory.s.empty() ? std::min(1.0, 1.0 / std::sqrt(gg)) : 1.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k, t *= 0.5) {
            const double trial = objective_at(t);
            if (std::isfinite(trial) && trial <= cur.objective + 1e-4 * t * gd) {
                accepted = true;
                break;
            }
        }
        if (!accepted) break;  // no further decrease representable

        for (std::size_t k = 0; k < dim; ++k) model.weights[k] += t * dw[k];
        model.bias += t * db;
        ObjectiveGrad next = linear_objective_grad(model.weights, model.bias, X, y, cfg);
        if (!std::isfinite(next.objective)) {
            throw NumericError("linear objective diverged at iteration " + std::to_string(iter));
        }
        std::vector<double> g_next = detail::pack(next);
        std::vector<double> s(d.size()), yv(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            s[i] = t * d[i];
            yv[i] = g_next[i] - g[i];
        }
        memory.push(std::move(s), std::move(yv));

        const double change = cur.objective - next.objective;
        cur = std::move(next);
        g = std::move(g_next);
        model.iterations = iter;
        model.objective_trace.push_back(cur.objective);
        if (std::abs(change) < cfg.tol * std::max(1.0, cur.objective)) break;
    }
    model.objective = cur.objective;
    return model;
}

struct LinearPrediction {
    Label label = Label::NOT;
    double decision = 0.0;
};

/// OFF iff w.x + b > 0; an exact zero is NOT.
inline LinearPrediction predict_linear(const LinearModel& model, const SparseVector& x) {
    if (x.dim != model.dim()) throw UsageError("linear model dimension mismatch");
    const double f = dot(model.weights, x) + model.bias;
    return {f > 0.0 ? Label::OFF : Label::NOT, f};
}

}  // namespace hkbc
