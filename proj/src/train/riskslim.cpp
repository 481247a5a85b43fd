#include "riskscore/riskslim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include "riskscore/errors.hpp"

namespace riskscore {

namespace {

double mean_logistic_loss(const MatrixView& X, std::span<const int> y,
                          std::span<const double> margins, double intercept) {
    double total = 0;
    for (size_t i = 0; i < X.rows; ++i) {
        double sign = y[i] ? 1.0 : -1.0;
        total += log1pexp(-sign * (margins[i] + intercept));
    }
    return total / static_cast<double>(X.rows);
}

std::vector<double> margins_of(const MatrixView& X, std::span<const int> coefficients) {
    std::vector<double> margins(X.rows, 0.0);
    for (size_t i = 0; i < X.rows; ++i) {
        double s = 0;
        const double* row = X.values + i * X.cols;
        for (size_t j = 0; j < coefficients.size(); ++j) s += coefficients[j] * row[j];
        margins[i] = s;
    }
    return margins;
}

// Box-constrained relaxation over the free suffix [first_free, cols) plus the
// intercept, by projected gradient with backtracking. Returns the achieved
// point, its exact objective value, and a certified lower bound on the
// relaxed minimum from the gradient inequality.
struct Relaxation {
    std::vector<double> u;  // free coefficients
    double b = 0;
    double value = 0;
    double lower_bound = 0;
};

Relaxation solve_relaxation(const MatrixView& X, std::span<const int> y,
                            std::span<const double> fixed_margins, size_t first_free,
                            const IntegerSearchOptions& opt,
                            const std::vector<double>& warm_u, double warm_b) {
    size_t free_count = X.cols - first_free;
    double n = static_cast<double>(X.rows);
    std::vector<double> u = warm_u;
    u.resize(free_count, 0.0);
    for (auto& v : u) v = std::clamp(v, double(opt.coef_min), double(opt.coef_max));
    double b = std::clamp(warm_b, double(opt.offset_min), double(opt.offset_max));

    auto value_at = [&](const std::vector<double>& uu, double bb) {
        double total = 0;
        for (size_t i = 0; i < X.rows; ++i) {
            double eta = fixed_margins[i] + bb;
            const double* row = X.values + i * X.cols;
            for (size_t m = 0; m < free_count; ++m) eta += uu[m] * row[first_free + m];
            double sign = y[i] ? 1.0 : -1.0;
            total += log1pexp(-sign * eta);
        }
        return total / n;
    };

    std::vector<double> grad(free_count, 0.0);
    double grad_b = 0;
    auto gradient_at = [&](const std::vector<double>& uu, double bb) {
        std::fill(grad.begin(), grad.end(), 0.0);
        grad_b = 0;
        for (size_t i = 0; i < X.rows; ++i) {
            double eta = fixed_margins[i] + bb;
            const double* row = X.values + i * X.cols;
            for (size_t m = 0; m < free_count; ++m) eta += uu[m] * row[first_free + m];
            double sign = y[i] ? 1.0 : -1.0;
            double g = -sign * logistic(-sign * eta);
            for (size_t m = 0; m < free_count; ++m) grad[m] += g * row[first_free + m];
            grad_b += g;
        }
        for (auto& g : grad) g /= n;
        grad_b /= n;
    };

    double value = value_at(u, b);
    double step = 1.0;
    std::vector<double> candidate(free_count, 0.0);
    for (int iter = 0; iter < 400; ++iter) {
        gradient_at(u, b);
        // Projected-gradient residual.
        double residual = 0;
        auto coord_residual = [](double x, double g, double lo, double hi) {
            if (x <= lo) return std::max(0.0, -g);
            if (x >= hi) return std::max(0.0, g);
            return std::abs(g);
        };
        for (size_t m = 0; m < free_count; ++m)
            residual = std::max(residual, coord_residual(u[m], grad[m], opt.coef_min,
                                                         opt.coef_max));
        residual = std::max(residual,
                            coord_residual(b, grad_b, opt.offset_min, opt.offset_max));
        if (residual <= 1e-10) break;

        double candidate_b = 0, candidate_value = 0;
        while (true) {
            for (size_t m = 0; m < free_count; ++m)
                candidate[m] = std::clamp(u[m] - step * grad[m], double(opt.coef_min),
                                          double(opt.coef_max));
            candidate_b = std::clamp(b - step * grad_b, double(opt.offset_min),
                                     double(opt.offset_max));
            candidate_value = value_at(candidate, candidate_b);
            double quad = value, dist_sq = 0;
            for (size_t m = 0; m < free_count; ++m) {
                double d = candidate[m] - u[m];
                quad += grad[m] * d;
                dist_sq += d * d;
            }
            double db = candidate_b - b;
            quad += grad_b * db;
            dist_sq += db * db;
            quad += dist_sq / (2.0 * step);
            if (candidate_value <= quad + 1e-15 || step < 1e-12) break;
            step *= 0.5;
        }
        if (candidate_value > value + 1e-15) break;
        u.swap(candidate);
        b = candidate_b;
        value = candidate_value;
        step = std::min(step * 1.25, 1e6);
    }

    // Certified bound: f(z) >= f(x) + g(x)'(z - x) over the box.
    gradient_at(u, b);
    double bound = value;
    for (size_t m = 0; m < free_count; ++m)
        bound += std::min(grad[m] * (opt.coef_min - u[m]), grad[m] * (opt.coef_max - u[m]));
    bound += std::min(grad_b * (opt.offset_min - b), grad_b * (opt.offset_max - b));

    Relaxation out;
    out.u = std::move(u);
    out.b = b;
    out.value = value;
    out.lower_bound = bound;
    return out;
}

struct Node {
    std::vector<int> fixed;
    double bound = 0;
    std::vector<double> relaxed_u;
    double relaxed_b = 0;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const { return a.bound > b.bound; }
};

}  // namespace

double integer_objective(const MatrixView& X, std::span<const int> y,
                         std::span<const int> coefficients, int intercept,
                         double l0_weight) {
    auto margins = margins_of(X, coefficients);
    int nonzeros = 0;
    for (int c : coefficients) nonzeros += c != 0;
    return mean_logistic_loss(X, y, margins, intercept) + l0_weight * nonzeros;
}

int best_integer_intercept(const MatrixView& X, std::span<const int> y,
                           std::span<const int> coefficients, int offset_min,
                           int offset_max, double* loss_out) {
    auto margins = margins_of(X, coefficients);
    auto loss = [&](int b) { return mean_logistic_loss(X, y, margins, b); };
    int lo = offset_min, hi = offset_max;
    while (hi - lo > 2) {
        int m1 = lo + (hi - lo) / 3;
        int m2 = hi - (hi - lo) / 3;
        if (loss(m1) <= loss(m2))
            hi = m2;
        else
            lo = m1;
    }
    int best = lo;
    double best_loss = loss(lo);
    for (int b = lo + 1; b <= hi; ++b) {
        double v = loss(b);
        if (v < best_loss) {
            best_loss = v;
            best = b;
        }
    }
    if (loss_out) *loss_out = best_loss;
    return best;
}

IntegerFit solve_integer_logistic(const MatrixView& X, std::span<const int> y,
                                  const IntegerSearchOptions& opt) {
    if (opt.coef_min > opt.coef_max || opt.offset_min > opt.offset_max)
        throw ConfigError("integer search ranges are empty");
    if (X.rows == 0) throw UserError("empty training data");
    const auto start = std::chrono::steady_clock::now();
    auto elapsed_s = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    };
    const size_t d = X.cols;

    IntegerFit best;
    bool have_incumbent = false;

    auto consider = [&](std::vector<int> coefficients) {
        double loss = 0;
        int intercept = best_integer_intercept(X, y, coefficients, opt.offset_min,
                                               opt.offset_max, &loss);
        int nonzeros = 0;
        for (int c : coefficients) nonzeros += c != 0;
        double objective = loss + opt.l0_weight * nonzeros;
        if (!have_incumbent || objective < best.objective) {
            best.coefficients = std::move(coefficients);
            best.intercept = intercept;
            best.objective = objective;
            have_incumbent = true;
        }
    };

    if (d == 0) {
        consider({});
        best.lower_bound = best.objective;
        best.gap = 0;
        best.proven_optimal = true;
        return best;
    }

    auto round_free = [&](const std::vector<int>& fixed, const std::vector<double>& u) {
        std::vector<int> full = fixed;
        for (double v : u) {
            int r = static_cast<int>(std::lround(v));
            full.push_back(std::clamp(r, opt.coef_min, opt.coef_max));
        }
        return full;
    };

    std::vector<double> zero_margins(X.rows, 0.0);
    Relaxation root_relax =
        solve_relaxation(X, y, zero_margins, 0, opt, {}, 0.0);
    consider(round_free({}, root_relax.u));

    std::priority_queue<Node, std::vector<Node>, NodeOrder> frontier;
    Node root;
    root.bound = root_relax.lower_bound;
    root.relaxed_u = root_relax.u;
    root.relaxed_b = root_relax.b;
    frontier.push(std::move(root));

    double lb_global = root_relax.lower_bound;
    bool out_of_time = false;

    while (!frontier.empty()) {
        Node node = frontier.top();
        frontier.pop();
        lb_global = std::max(lb_global, node.bound);
        if (have_incumbent) {
            if (node.bound >= best.objective - 1e-12) {
                // Nothing left that could improve the incumbent.
                lb_global = best.objective;
                break;
            }
            double gap = (best.objective - lb_global) / std::max(best.objective, 1e-300);
            if (gap <= opt.target_gap) break;
        }
        if (elapsed_s() > opt.time_budget_s) {
            out_of_time = true;
            break;
        }

        size_t depth = node.fixed.size();
        if (depth == d) continue;  // exact value already folded into the incumbent

        // Margins of the fixed prefix.
        std::vector<double> fixed_margins(X.rows, 0.0);
        for (size_t i = 0; i < X.rows; ++i) {
            double s = 0;
            const double* row = X.values + i * X.cols;
            for (size_t j = 0; j < depth; ++j) s += node.fixed[j] * row[j];
            fixed_margins[i] = s;
        }

        // Children ordered by distance from the relaxed coordinate.
        double pivot = node.relaxed_u.empty() ? 0.0 : node.relaxed_u.front();
        std::vector<int> values;
        for (int v = opt.coef_min; v <= opt.coef_max; ++v) values.push_back(v);
        std::stable_sort(values.begin(), values.end(), [&](int a, int b) {
            return std::abs(a - pivot) < std::abs(b - pivot);
        });

        std::vector<double> warm(node.relaxed_u.begin() +
                                     (node.relaxed_u.empty() ? 0 : 1),
                                 node.relaxed_u.end());
        for (int v : values) {
            Node child;
            child.fixed = node.fixed;
            child.fixed.push_back(v);
            int fixed_nonzeros = 0;
            for (int c : child.fixed) fixed_nonzeros += c != 0;

            std::vector<double> child_margins = fixed_margins;
            if (v != 0)
                for (size_t i = 0; i < X.rows; ++i)
                    child_margins[i] += v * X.at(i, depth);

            if (depth + 1 == d) {
                // Fully assigned: exact evaluation, no relaxation needed.
                double loss = 0;
                int intercept = best_integer_intercept(X, y, child.fixed, opt.offset_min,
                                                       opt.offset_max, &loss);
                double objective = loss + opt.l0_weight * fixed_nonzeros;
                if (!have_incumbent || objective < best.objective) {
                    best.coefficients = child.fixed;
                    best.intercept = intercept;
                    best.objective = objective;
                    have_incumbent = true;
                }
                continue;
            }

            Relaxation relax = solve_relaxation(X, y, child_margins, depth + 1, opt,
                                                warm, node.relaxed_b);
            consider(round_free(child.fixed, relax.u));
            child.bound =
                std::max(relax.lower_bound + opt.l0_weight * fixed_nonzeros, node.bound);
            child.relaxed_u = std::move(relax.u);
            child.relaxed_b = relax.b;
            if (!have_incumbent || child.bound < best.objective - 1e-12)
                frontier.push(std::move(child));
        }
    }

    if (!have_incumbent)
        throw NoModelError("time budget exhausted before any feasible model was found");
    if (frontier.empty() && !out_of_time) lb_global = best.objective;
    best.lower_bound = std::min(lb_global, best.objective);
    best.gap = (best.objective - best.lower_bound) / std::max(best.objective, 1e-300);
    best.proven_optimal = best.gap <= 1e-12;
    return best;
}

RiskSlimModel fit_riskslim_lite(const Dataset& data, std::span<const int> rows,
                                const StumpBasis& basis, const std::string& label,
                                const TrainConfig& config) {
    config.validate();
    StumpMatrix matrix = expand(data, rows, basis);
    auto y = data.label_column(label, rows);
    MatrixView X{matrix.values.data(), matrix.rows, matrix.cols};

    // Stage 1: L1 screening, weakest qualifying penalty first so the integer
    // search sees the largest usable stump subset.
    std::vector<double> grid = config.penalty_grid;
    std::sort(grid.begin(), grid.end(), std::greater<double>());
    std::vector<size_t> selected;
    LogisticModel screen;
    double screening_C = 0;
    for (double C : grid) {
        screen = fit_logistic(X, y, config.logistic(Penalty::L1, C, false));
        selected.clear();
        for (size_t j = 0; j < matrix.cols; ++j)
            if (screen.coefficients[j] != 0.0) selected.push_back(j);
        screening_C = C;
        if (static_cast<int>(selected.size()) <= config.max_selected_stumps) break;
        selected.clear();
    }
    if (selected.empty() && config.max_selected_stumps > 0 && !grid.empty()) {
        // No grid value met the cap: keep the strongest penalty's largest
        // coefficients.
        std::vector<size_t> nonzero;
        for (size_t j = 0; j < matrix.cols; ++j)
            if (screen.coefficients[j] != 0.0) nonzero.push_back(j);
        std::stable_sort(nonzero.begin(), nonzero.end(), [&](size_t a, size_t b) {
            return std::abs(screen.coefficients[a]) > std::abs(screen.coefficients[b]);
        });
        if (static_cast<int>(nonzero.size()) > config.max_selected_stumps)
            nonzero.resize(config.max_selected_stumps);
        std::sort(nonzero.begin(), nonzero.end());
        selected = std::move(nonzero);
    }

    // Branch order: screening magnitude, largest first.
    std::stable_sort(selected.begin(), selected.end(), [&](size_t a, size_t b) {
        return std::abs(screen.coefficients[a]) > std::abs(screen.coefficients[b]);
    });

    RiskSlimModel model;
    model.screening_C = screening_C;
    for (size_t j : selected) model.screened_columns.push_back(matrix.columns[j]);

    std::vector<double> reduced(matrix.rows * selected.size());
    for (size_t r = 0; r < matrix.rows; ++r)
        for (size_t c = 0; c < selected.size(); ++c)
            reduced[r * selected.size() + c] = matrix.at(r, selected[c]);
    MatrixView Xs{reduced.data(), matrix.rows, selected.size()};

    IntegerSearchOptions opt;
    opt.coef_min = config.coef_min;
    opt.coef_max = config.coef_max;
    opt.offset_min = config.offset_min;
    opt.offset_max = config.offset_max;
    opt.l0_weight = config.l0_weight;
    opt.time_budget_s = config.time_budget_s;
    opt.target_gap = config.target_gap;
    model.fit = solve_integer_logistic(Xs, y, opt);

    model.table.coef_min = config.coef_min;
    model.table.coef_max = config.coef_max;
    model.table.intercept = model.fit.intercept;
    for (size_t c = 0; c < selected.size(); ++c) {
        if (model.fit.coefficients[c] == 0) continue;
        const StumpColumn& col = model.screened_columns[c];
        ScoringRow row;
        row.condition.feature = col.feature;
        switch (col.direction) {
            case StumpDirection::Decreasing:
                row.condition.op = Comparator::LessEq;
                row.condition.threshold = col.threshold;
                break;
            case StumpDirection::Binary:
                row.condition.op = Comparator::GreaterEq;
                row.condition.threshold = 1.0;
                break;
            default:
                row.condition.op = Comparator::GreaterEq;
                row.condition.threshold = col.threshold;
                break;
        }
        row.points = model.fit.coefficients[c];
        model.table.rows.push_back(std::move(row));
    }
    model.table.validate();
    return model;
}

}  // namespace riskscore
