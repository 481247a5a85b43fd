#include "riskscore/cart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riskscore/errors.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

namespace {

double entropy(size_t positives, size_t total) {
    if (total == 0) return 0;
    double p = static_cast<double>(positives) / total;
    double h = 0;
    if (p > 0) h -= p * std::log(p);
    if (p < 1) h -= (1 - p) * std::log(1 - p);
    return h;
}

struct Split {
    int feature = -1;
    double threshold = 0;
    double gain = -1;
};

struct Builder {
    const MatrixView& X;
    std::span<const int> y;
    const CartConfig& config;
    std::vector<CartNode>& nodes;

    Split best_split(std::span<const int> rows) const {
        size_t positives = 0;
        for (int r : rows) positives += y[r] != 0;
        double parent_entropy = entropy(positives, rows.size());
        Split best;
        std::vector<std::pair<double, int>> order(rows.size());
        for (size_t j = 0; j < X.cols; ++j) {
            for (size_t i = 0; i < rows.size(); ++i)
                order[i] = {X.at(rows[i], j), y[rows[i]] != 0 ? 1 : 0};
            std::sort(order.begin(), order.end());
            size_t left_pos = 0;
            for (size_t i = 0; i + 1 < order.size(); ++i) {
                left_pos += order[i].second;
                if (order[i].first == order[i + 1].first) continue;
                size_t left_n = i + 1;
                size_t right_n = order.size() - left_n;
                if (left_n < static_cast<size_t>(config.min_leaf) ||
                    right_n < static_cast<size_t>(config.min_leaf))
                    continue;
                double gain = parent_entropy -
                              (left_n * entropy(left_pos, left_n) +
                               right_n * entropy(positives - left_pos, right_n)) /
                                  rows.size();
                if (gain > best.gain) {
                    best.feature = static_cast<int>(j);
                    best.threshold = (order[i].first + order[i + 1].first) / 2.0;
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    int grow(std::vector<int> rows, int depth) {
        size_t positives = 0;
        for (int r : rows) positives += y[r] != 0;
        int index = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[index].probability = static_cast<double>(positives) / rows.size();
        nodes[index].count = static_cast<int>(rows.size());
        bool pure = positives == 0 || positives == rows.size();
        if (pure || depth >= config.max_depth) return index;

        Split split = best_split(rows);
        if (split.feature < 0 || split.gain < config.min_gain) return index;

        std::vector<int> left_rows, right_rows;
        for (int r : rows) {
            if (X.at(r, split.feature) <= split.threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        nodes[index].feature = split.feature;
        nodes[index].threshold = split.threshold;
        int left = grow(std::move(left_rows), depth + 1);
        nodes[index].left = left;
        int right = grow(std::move(right_rows), depth + 1);
        nodes[index].right = right;
        return index;
    }
};

}  // namespace

double CartModel::predict(std::span<const double> features) const {
    int i = 0;
    while (!nodes[i].is_leaf())
        i = features[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left
                                                             : nodes[i].right;
    return nodes[i].probability;
}

std::string CartModel::to_text() const {
    std::string out;
    auto emit = [&](auto&& self, int index, int depth) -> void {
        out.append(depth * 2, ' ');
        const CartNode& node = nodes[index];
        if (node.is_leaf()) {
            out += "leaf p=" + format_number(node.probability) +
                   " n=" + std::to_string(node.count) + "\n";
            return;
        }
        std::string name = node.feature < static_cast<int>(feature_names.size())
                               ? feature_names[node.feature]
                               : "x" + std::to_string(node.feature);
        out += "split " + name + " <= " + format_number(node.threshold) + "\n";
        self(self, node.left, depth + 1);
        self(self, node.right, depth + 1);
    };
    emit(emit, 0, 0);
    return out;
}

CartModel CartModel::from_text(const std::string& text) {
    CartModel model;
    struct Line {
        int depth;
        std::string body;
    };
    std::vector<Line> lines;
    for (const auto& raw : split(text, '\n')) {
        if (trim(raw).empty()) continue;
        int depth = 0;
        size_t i = 0;
        while (i + 1 < raw.size() && raw[i] == ' ' && raw[i + 1] == ' ') {
            ++depth;
            i += 2;
        }
        lines.push_back({depth, std::string(trim(raw))});
    }
    if (lines.empty()) throw ParseError("empty tree file");
    size_t cursor = 0;
    auto parse_node = [&](auto&& self, int depth) -> int {
        if (cursor >= lines.size() || lines[cursor].depth != depth)
            throw ParseError("malformed tree indentation");
        Line line = lines[cursor++];
        int index = static_cast<int>(model.nodes.size());
        model.nodes.emplace_back();
        std::istringstream tok(line.body);
        std::string kind;
        tok >> kind;
        if (kind == "leaf") {
            std::string p, n;
            tok >> p >> n;
            if (p.rfind("p=", 0) != 0 || n.rfind("n=", 0) != 0)
                throw ParseError("malformed leaf line: " + line.body);
            model.nodes[index].probability = parse_double(p.substr(2), "leaf p");
            model.nodes[index].count = static_cast<int>(parse_long(n.substr(2), "leaf n"));
            return index;
        }
        if (kind != "split") throw ParseError("expected split/leaf: " + line.body);
        std::string name, op, threshold;
        tok >> name >> op >> threshold;
        if (op != "<=") throw ParseError("expected '<=': " + line.body);
        int feature = -1;
        for (size_t j = 0; j < model.feature_names.size(); ++j)
            if (model.feature_names[j] == name) feature = static_cast<int>(j);
        if (feature < 0) {
            feature = static_cast<int>(model.feature_names.size());
            model.feature_names.push_back(name);
        }
        model.nodes[index].feature = feature;
        model.nodes[index].threshold = parse_double(threshold, "split threshold");
        int left = self(self, depth + 1);
        model.nodes[index].left = left;
        int right = self(self, depth + 1);
        model.nodes[index].right = right;
        return index;
    };
    parse_node(parse_node, 0);
    if (cursor != lines.size()) throw ParseError("trailing lines in tree file");
    return model;
}

CartModel fit_cart(const MatrixView& X, std::span<const int> y,
                   const std::vector<std::string>& feature_names,
                   const CartConfig& config) {
    if (X.rows == 0) throw UserError("empty training data");
    if (config.max_depth < 0) throw ConfigError("max_depth must be >= 0");
    if (config.min_leaf < 1) throw ConfigError("min_leaf must be >= 1");
    CartModel model;
    model.config = config;
    model.feature_names = feature_names;
    std::vector<int> rows(X.rows);
    for (size_t i = 0; i < X.rows; ++i) rows[i] = static_cast<int>(i);
    Builder builder{X, y, config, model.nodes};
    builder.grow(std::move(rows), 0);
    return model;
}

}  // namespace riskscore
