#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "smom/assignment.hpp"

using namespace smom;

namespace {

double assignment_cost(const Eigen::MatrixXd& cost,
                       const std::vector<int>& assign) {
    double total = 0.0;
    for (std::size_t i = 0; i < assign.size(); ++i) {
        total += cost(static_cast<Eigen::Index>(i), assign[i]);
    }
    return total;
}

double best_by_enumeration(const Eigen::MatrixXd& cost) {
    std::vector<int> perm(static_cast<std::size_t>(cost.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        best = std::min(best, assignment_cost(cost, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("known 3x3 optimum") {
    Eigen::MatrixXd cost(3, 3);
    cost << 4, 1, 3, 2, 0, 5, 3, 2, 2;
    auto assign = min_cost_assignment(cost);
    CHECK(assignment_cost(cost, assign) == doctest::Approx(5.0));
}

TEST_CASE("permutation matrix cost recovers the permutation") {
    Eigen::MatrixXd cost = Eigen::MatrixXd::Ones(4, 4);
    const int perm[] = {2, 0, 3, 1};
    for (int i = 0; i < 4; ++i) cost(i, perm[i]) = 0.0;
    auto assign = min_cost_assignment(cost);
    for (int i = 0; i < 4; ++i) CHECK(assign[i] == perm[i]);
}

TEST_CASE("matches exhaustive enumeration on random instances") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int round = 0; round < 50; ++round) {
        const int n = 2 + static_cast<int>(rng() % 5);
        Eigen::MatrixXd cost(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) cost(i, j) = unif(rng);
        }
        auto assign = min_cost_assignment(cost);
        // a bijection
        std::vector<int> seen(static_cast<std::size_t>(n), 0);
        for (int a : assign) ++seen[static_cast<std::size_t>(a)];
        for (int s : seen) CHECK(s == 1);
        CHECK(assignment_cost(cost, assign) ==
              doctest::Approx(best_by_enumeration(cost)).epsilon(1e-12));
    }
}

TEST_CASE("empty input") {
    CHECK(min_cost_assignment(Eigen::MatrixXd()).empty());
}
