#include "riskscore/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "riskscore/errors.hpp"
#include "riskscore/scoring_table.hpp"

namespace riskscore {

double log1pexp(double z) {
    if (z > 35.0) return z;
    if (z < -35.0) return std::exp(z);
    return std::log1p(std::exp(z));
}

double LogisticModel::linear_score(std::span<const double> features) const {
    double s = intercept;
    for (size_t j = 0; j < coefficients.size(); ++j) s += coefficients[j] * features[j];
    return s;
}

double LogisticModel::probability(std::span<const double> features) const {
    return logistic(linear_score(features));
}

int LogisticModel::nonzero_count(double tol) const {
    int count = 0;
    for (double c : coefficients)
        if (std::abs(c) > tol) ++count;
    return count;
}

namespace {

std::vector<double> class_weights(std::span<const int> y, ClassWeight weighting) {
    size_t n = y.size();
    size_t positives = 0;
    for (int v : y) positives += v != 0;
    if (positives == 0 || positives == n)
        throw DegenerateLabelError("labels contain a single class");
    std::vector<double> w(n, 1.0);
    if (weighting == ClassWeight::Balanced) {
        double w_pos = static_cast<double>(n) / (2.0 * positives);
        double w_neg = static_cast<double>(n) / (2.0 * (n - positives));
        for (size_t i = 0; i < n; ++i) w[i] = y[i] ? w_pos : w_neg;
    }
    return w;
}

struct Problem {
    const MatrixView& X;
    std::span<const int> y;
    std::vector<double> weights;
    double l2_weight = 0;  // 1/C for L2, else 0
    double n = 0;

    double smooth(std::span<const double> beta, double intercept) const {
        double total = 0;
        for (size_t i = 0; i < X.rows; ++i) {
            double eta = intercept;
            const double* row = X.values + i * X.cols;
            for (size_t j = 0; j < X.cols; ++j) eta += beta[j] * row[j];
            double sign = y[i] ? 1.0 : -1.0;
            total += weights[i] * log1pexp(-sign * eta);
        }
        total /= n;
        if (l2_weight > 0) {
            double sq = 0;
            for (double b : beta) sq += b * b;
            total += 0.5 * l2_weight * sq;
        }
        return total;
    }

    void gradient(std::span<const double> beta, double intercept,
                  std::span<double> grad, double& grad_b) const {
        std::fill(grad.begin(), grad.end(), 0.0);
        grad_b = 0;
        for (size_t i = 0; i < X.rows; ++i) {
            double eta = intercept;
            const double* row = X.values + i * X.cols;
            for (size_t j = 0; j < X.cols; ++j) eta += beta[j] * row[j];
            double sign = y[i] ? 1.0 : -1.0;
            double g = -weights[i] * sign * logistic(-sign * eta);
            for (size_t j = 0; j < X.cols; ++j) grad[j] += g * row[j];
            grad_b += g;
        }
        for (size_t j = 0; j < X.cols; ++j) {
            grad[j] /= n;
            if (l2_weight > 0) grad[j] += l2_weight * beta[j];
        }
        grad_b /= n;
    }
};

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0;
}

}  // namespace

double logistic_objective_smooth(const MatrixView& X, std::span<const int> y,
                                 std::span<const double> beta, double intercept,
                                 const LogisticConfig& config) {
    Problem p{X, y, class_weights(y, config.weighting),
              config.penalty == Penalty::L2 ? 1.0 / config.C : 0.0,
              static_cast<double>(X.rows)};
    return p.smooth(beta, intercept);
}

void logistic_gradient_smooth(const MatrixView& X, std::span<const int> y,
                              std::span<const double> beta, double intercept,
                              const LogisticConfig& config, std::span<double> grad_beta,
                              double& grad_intercept) {
    Problem p{X, y, class_weights(y, config.weighting),
              config.penalty == Penalty::L2 ? 1.0 / config.C : 0.0,
              static_cast<double>(X.rows)};
    p.gradient(beta, intercept, grad_beta, grad_intercept);
}

double logistic_objective(const MatrixView& X, std::span<const int> y,
                          std::span<const double> beta, double intercept,
                          const LogisticConfig& config) {
    double value = logistic_objective_smooth(X, y, beta, intercept, config);
    if (config.penalty == Penalty::L1) {
        double l1 = 0;
        for (double b : beta) l1 += std::abs(b);
        value += l1 / config.C;
    }
    return value;
}

LogisticModel fit_logistic(const MatrixView& X, std::span<const int> y,
                           const LogisticConfig& config) {
    if (X.rows != y.size()) throw Error("row/label count mismatch");
    if (X.rows == 0) throw UserError("empty training data");
    if (!(config.C > 0)) throw ConfigError("C must be positive");
    if (!(config.tolerance > 0)) throw ConfigError("tolerance must be positive");
    for (size_t i = 0; i < X.rows * X.cols; ++i)
        if (!std::isfinite(X.values[i])) throw UserError("non-finite value in design matrix");

    // Optional standardization; coefficients are mapped back at the end.
    std::vector<double> mean(X.cols, 0.0), scale(X.cols, 1.0);
    std::vector<double> standardized;
    MatrixView work = X;
    if (config.standardize && X.cols > 0) {
        for (size_t j = 0; j < X.cols; ++j) {
            double m = 0;
            for (size_t i = 0; i < X.rows; ++i) m += X.at(i, j);
            m /= X.rows;
            double var = 0;
            for (size_t i = 0; i < X.rows; ++i) {
                double d = X.at(i, j) - m;
                var += d * d;
            }
            var /= X.rows;
            mean[j] = m;
            scale[j] = var > 0 ? std::sqrt(var) : 1.0;
        }
        standardized.resize(X.rows * X.cols);
        for (size_t i = 0; i < X.rows; ++i)
            for (size_t j = 0; j < X.cols; ++j)
                standardized[i * X.cols + j] = (X.at(i, j) - mean[j]) / scale[j];
        work = MatrixView{standardized.data(), X.rows, X.cols};
    }

    Problem p{work, y, class_weights(y, config.weighting),
              config.penalty == Penalty::L2 ? 1.0 / config.C : 0.0,
              static_cast<double>(X.rows)};
    double lambda = config.penalty == Penalty::L1 ? 1.0 / config.C : 0.0;

    std::vector<double> beta(X.cols, 0.0);
    double intercept = 0;
    std::vector<double> grad(X.cols, 0.0);
    double grad_b = 0;
    double step = 1.0;

    LogisticModel model;
    model.penalty = config.penalty;
    model.C = config.C;
    model.weighting = config.weighting;

    double smooth_value = p.smooth(beta, intercept);
    auto penalty_value = [&](std::span<const double> b) {
        double l1 = 0;
        for (double v : b) l1 += std::abs(v);
        return lambda * l1;
    };

    std::vector<double> candidate(X.cols, 0.0);
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        p.gradient(beta, intercept, grad, grad_b);

        // First-order residual: subgradient optimality for L1, plain gradient
        // otherwise. The intercept is always unpenalized.
        double residual = std::abs(grad_b);
        for (size_t j = 0; j < X.cols; ++j) {
            double r;
            if (lambda > 0 && beta[j] == 0.0)
                r = std::max(0.0, std::abs(grad[j]) - lambda);
            else if (lambda > 0)
                r = std::abs(grad[j] + (beta[j] > 0 ? lambda : -lambda));
            else
                r = std::abs(grad[j]);
            residual = std::max(residual, r);
        }
        model.first_order_residual = residual;
        if (residual <= config.tolerance) {
            model.converged = true;
            break;
        }

        // Backtracking proximal step; the quadratic upper-bound test keeps
        // the full objective monotone.
        double candidate_b = 0;
        double candidate_smooth = 0;
        while (true) {
            for (size_t j = 0; j < X.cols; ++j)
                candidate[j] = soft_threshold(beta[j] - step * grad[j], step * lambda);
            candidate_b = intercept - step * grad_b;
            candidate_smooth = p.smooth(candidate, candidate_b);
            double quad = smooth_value;
            double dist_sq = 0;
            for (size_t j = 0; j < X.cols; ++j) {
                double d = candidate[j] - beta[j];
                quad += grad[j] * d;
                dist_sq += d * d;
            }
            double db = candidate_b - intercept;
            quad += grad_b * db;
            dist_sq += db * db;
            quad += dist_sq / (2.0 * step);
            if (candidate_smooth <= quad + 1e-15 || step < 1e-12) break;
            step *= 0.5;
        }
        if (candidate_smooth + penalty_value(candidate) >
            smooth_value + penalty_value(beta) + 1e-15) {
            // Step size collapsed without an improving point; stop here.
            break;
        }
        beta.swap(candidate);
        intercept = candidate_b;
        smooth_value = candidate_smooth;
        step = std::min(step * 1.25, 1e6);
        if (config.record_trace)
            model.objective_trace.push_back(smooth_value + penalty_value(beta));
    }
    model.iterations = iter;
    model.objective = smooth_value + penalty_value(beta);

    if (config.standardize && X.cols > 0) {
        model.coefficients.resize(X.cols);
        double b0 = intercept;
        for (size_t j = 0; j < X.cols; ++j) {
            model.coefficients[j] = beta[j] / scale[j];
            b0 -= beta[j] * mean[j] / scale[j];
        }
        model.intercept = b0;
    } else {
        model.coefficients = std::move(beta);
        model.intercept = intercept;
    }
    return model;
}

}  // namespace riskscore
