#pragma once

#include <span>
#include <string>
#include <vector>

namespace riskscore {

// Row-major dense view shared by the trainers.
struct MatrixView {
    const double* values = nullptr;
    size_t rows = 0;
    size_t cols = 0;

    double at(size_t r, size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(size_t r) const { return {values + r * cols, cols}; }
};

enum class Penalty { L1, L2 };
enum class ClassWeight { None, Balanced };

struct LogisticConfig {
    Penalty penalty = Penalty::L2;
    double C = 1.0;  // inverse penalty strength; the penalty weight is 1/C
    ClassWeight weighting = ClassWeight::Balanced;
    int max_iterations = 5000;
    double tolerance = 1e-7;  // first-order (sub)optimality residual
    bool standardize = false;
    bool record_trace = true;
};

struct LogisticModel {
    std::vector<double> coefficients;  // original input scale
    double intercept = 0;
    Penalty penalty = Penalty::L2;
    double C = 1.0;
    ClassWeight weighting = ClassWeight::None;
    bool converged = false;
    int iterations = 0;
    double first_order_residual = 0;  // on the optimization scale
    double objective = 0;
    std::vector<double> objective_trace;  // one entry per iteration

    double linear_score(std::span<const double> features) const;
    double probability(std::span<const double> features) const;
    int nonzero_count(double tol = 0.0) const;
};

// Weighted penalized logistic regression by monotone proximal gradient with
// backtracking. Balanced weighting gives class c the weight n / (2 n_c) so
// each class carries half the total. The intercept is never penalized.
LogisticModel fit_logistic(const MatrixView& X, std::span<const int> y,
                           const LogisticConfig& config);

// Smooth part of the objective (weighted mean logistic loss, plus the L2 term
// when applicable) and its gradient; exposed for the oracle tests.
double logistic_objective_smooth(const MatrixView& X, std::span<const int> y,
                                 std::span<const double> beta, double intercept,
                                 const LogisticConfig& config);
void logistic_gradient_smooth(const MatrixView& X, std::span<const int> y,
                              std::span<const double> beta, double intercept,
                              const LogisticConfig& config, std::span<double> grad_beta,
                              double& grad_intercept);
double logistic_objective(const MatrixView& X, std::span<const int> y,
                          std::span<const double> beta, double intercept,
                          const LogisticConfig& config);

// log(1 + exp(z)) without overflow.
double log1pexp(double z);

}  // namespace riskscore
