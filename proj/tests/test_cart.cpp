#include <doctest.h>

#include "riskscore/cart.hpp"
#include "riskscore/errors.hpp"

using namespace riskscore;

namespace {

MatrixView view_of(const std::vector<double>& X, size_t rows, size_t cols) {
    return {X.data(), rows, cols};
}

}  // namespace

TEST_CASE("pure labels produce a single leaf") {
    std::vector<double> X = {1, 2, 3, 4};
    std::vector<int> y = {1, 1, 1, 1};
    CartModel model = fit_cart(view_of(X, 4, 1), y, {"x"}, {});
    REQUIRE(model.nodes.size() == 1);
    CHECK(model.nodes[0].is_leaf());
    CHECK(model.nodes[0].probability == 1.0);

    std::vector<int> zeros = {0, 0, 0, 0};
    CartModel zero_model = fit_cart(view_of(X, 4, 1), zeros, {"x"}, {});
    CHECK(zero_model.nodes[0].probability == 0.0);
}

TEST_CASE("threshold-separable data recovers the separating cut at depth 1") {
    std::vector<double> X = {1, 2, 3, 10, 11, 12};
    std::vector<int> y = {0, 0, 0, 1, 1, 1};
    CartConfig config;
    config.max_depth = 1;
    CartModel model = fit_cart(view_of(X, 6, 1), y, {"x"}, config);
    REQUIRE(model.nodes.size() == 3);
    CHECK(model.nodes[0].feature == 0);
    CHECK(model.nodes[0].threshold == 6.5);  // midpoint of the separating gap
    CHECK(model.predict(std::vector<double>{2.0}) == 0.0);
    CHECK(model.predict(std::vector<double>{11.0}) == 1.0);
}

TEST_CASE("two-feature XOR at depth 2 gives four pure leaves") {
    std::vector<double> X = {0, 0, 0, 1, 1, 0, 1, 1};
    std::vector<int> y = {0, 1, 1, 0};
    CartConfig config;
    config.max_depth = 2;
    CartModel model = fit_cart(view_of(X, 4, 2), y, {"a", "b"}, config);
    int leaves = 0;
    for (const auto& node : model.nodes) {
        if (!node.is_leaf()) continue;
        ++leaves;
        CHECK((node.probability == 0.0 || node.probability == 1.0));
        CHECK(node.count == 1);
    }
    CHECK(leaves == 4);
    CHECK(model.predict(std::vector<double>{0, 0}) == 0.0);
    CHECK(model.predict(std::vector<double>{0, 1}) == 1.0);
    CHECK(model.predict(std::vector<double>{1, 0}) == 1.0);
    CHECK(model.predict(std::vector<double>{1, 1}) == 0.0);
}

TEST_CASE("a positive gain floor stops zero-gain splits") {
    std::vector<double> X = {0, 0, 0, 1, 1, 0, 1, 1};
    std::vector<int> y = {0, 1, 1, 0};
    CartConfig config;
    config.max_depth = 2;
    config.min_gain = 1e-6;  // XOR's first split has exactly zero gain
    CartModel model = fit_cart(view_of(X, 4, 2), y, {"a", "b"}, config);
    REQUIRE(model.nodes.size() == 1);
    CHECK(model.nodes[0].probability == 0.5);
}

TEST_CASE("ties break to the lowest feature index then smallest threshold") {
    // Both features split identically; feature 0 must win.
    std::vector<double> X = {0, 0, 0, 0, 1, 1, 1, 1};
    std::vector<int> y = {0, 0, 1, 1};
    CartConfig config;
    config.max_depth = 1;
    CartModel model = fit_cart(view_of(X, 4, 2), y, {"a", "b"}, config);
    CHECK(model.nodes[0].feature == 0);
}

TEST_CASE("max depth bounds the tree") {
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 32; ++i) {
        X.push_back(i);
        y.push_back(i % 2);
    }
    CartConfig config;
    config.max_depth = 3;
    CartModel model = fit_cart(view_of(X, 32, 1), y, {"x"}, config);
    // Depth-3 binary tree has at most 15 nodes.
    CHECK(model.nodes.size() <= 15);
    std::vector<int> depth(model.nodes.size(), 0);
    for (size_t i = 0; i < model.nodes.size(); ++i) {
        if (model.nodes[i].is_leaf()) continue;
        depth[model.nodes[i].left] = depth[i] + 1;
        depth[model.nodes[i].right] = depth[i] + 1;
        CHECK(depth[i] < 3);
    }
}

TEST_CASE("empty data is an error") {
    std::vector<double> X;
    std::vector<int> y;
    CHECK_THROWS_AS(fit_cart(view_of(X, 0, 1), y, {"x"}, {}), UserError);
}

TEST_CASE("tree text round trips") {
    std::vector<double> X = {1, 2, 3, 10, 11, 12};
    std::vector<int> y = {0, 0, 1, 1, 1, 0};
    CartConfig config;
    config.max_depth = 3;
    CartModel model = fit_cart(view_of(X, 6, 1), y, {"x"}, config);
    CartModel back = CartModel::from_text(model.to_text());
    CHECK(back.to_text() == model.to_text());
    for (double v : {0.5, 2.5, 5.0, 11.5, 20.0})
        CHECK(back.predict(std::vector<double>{v}) ==
              model.predict(std::vector<double>{v}));
}

TEST_CASE("repeated fits are identical") {
    std::vector<double> X;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
        X.push_back(i % 7);
        X.push_back((i * 3) % 5);
        y.push_back((i % 7 >= 3) ^ (i % 2));
    }
    CartConfig config;
    config.max_depth = 4;
    CartModel a = fit_cart({X.data(), 40, 2}, y, {"u", "v"}, config);
    CartModel b = fit_cart({X.data(), 40, 2}, y, {"u", "v"}, config);
    CHECK(a.to_text() == b.to_text());
}
