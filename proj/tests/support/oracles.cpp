#include "oracles.hpp"

namespace oracle {

namespace {

std::size_t majority_count(std::size_t c0, std::size_t c1) {
    return c0 > c1 ? c0 : c1;
}

// Best depth-1 refinement of a row subset: either keep the majority leaf or
// split once on any (feature, midpoint) pair.
std::size_t best_child_correct(const facegate::LabeledMatrix& data,
                               const std::vector<std::size_t>& rows) {
    std::size_t c0 = 0, c1 = 0;
    for (std::size_t r : rows) data.labels[r] ? ++c1 : ++c0;
    std::size_t best = majority_count(c0, c1);
    if (rows.empty()) return 0;

    std::vector<std::pair<double, std::uint8_t>> vals(rows.size());
    for (std::size_t f = 0; f < data.n_cols; ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            vals[i] = {data.at(rows[i], f), data.labels[rows[i]]};
        std::sort(vals.begin(), vals.end());
        std::size_t l0 = 0, l1 = 0;
        for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
            vals[i].second ? ++l1 : ++l0;
            if (vals[i + 1].first > vals[i].first) {
                const std::size_t correct =
                    majority_count(l0, l1) + majority_count(c0 - l0, c1 - l1);
                best = std::max(best, correct);
            }
        }
    }
    return best;
}

}  // namespace

double best_depth2_accuracy(const facegate::LabeledMatrix& data) {
    const std::size_t n = data.n_rows;
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;

    // Depth 0 and depth 1 trees are special cases of a depth-2 tree with
    // no-split children, covered by best_child_correct on the full set.
    std::size_t best = best_child_correct(data, all);

    std::vector<std::pair<double, std::size_t>> vals(n);
    for (std::size_t f = 0; f < data.n_cols; ++f) {
        for (std::size_t i = 0; i < n; ++i) vals[i] = {data.at(i, f), i};
        std::sort(vals.begin(), vals.end());
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!(vals[i + 1].first > vals[i].first)) continue;
            std::vector<std::size_t> left, right;
            for (std::size_t j = 0; j <= i; ++j) left.push_back(vals[j].second);
            for (std::size_t j = i + 1; j < n; ++j) right.push_back(vals[j].second);
            const std::size_t correct =
                best_child_correct(data, left) + best_child_correct(data, right);
            best = std::max(best, correct);
        }
    }
    return static_cast<double>(best) / static_cast<double>(n);
}

double power_iteration_top_share(const std::vector<std::vector<double>>& sym, int iters) {
    const std::size_t d = sym.size();
    std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
    std::vector<double> w(d, 0.0);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += sym[i][j] * v[j];
            w[i] = acc;
        }
        double norm = 0.0;
        for (double x : w) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;
        lambda = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            lambda += v[i] * w[i];
            v[i] = w[i] / norm;
        }
    }
    double trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) trace += sym[i][i];
    return trace == 0.0 ? 0.0 : lambda / trace;
}

}  // namespace oracle
