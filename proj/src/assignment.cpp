#include "smom/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace smom {

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) {
        throw std::invalid_argument("cost matrix must be square");
    }
    if (n == 0) return {};

    const double inf = std::numeric_limits<double>::infinity();
    // 1-based with a dummy row/column 0
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0);  // match[col] = row

    for (int i = 1; i <= n; ++i) {
        std::vector<double> dist(n + 1, inf);
        std::vector<int> from(n + 1, 0);
        std::vector<bool> used(n + 1, false);
        int j0 = 0;
        match[0] = i;
        do {
            used[j0] = true;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = -1;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < dist[j]) {
                    dist[j] = cur;
                    from[j] = j0;
                }
                if (dist[j] < delta) {
                    delta = dist[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    dist[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        while (j0 != 0) {
            const int j1 = from[j0];
            match[j0] = match[j1];
            j0 = j1;
        }
    }

    std::vector<int> assign(n, -1);
    for (int j = 1; j <= n; ++j) {
        if (match[j] != 0) assign[match[j] - 1] = j - 1;
    }
    return assign;
}

}  // namespace smom
