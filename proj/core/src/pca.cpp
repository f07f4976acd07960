#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "facegate/error.hpp"
#include "facegate/eval.hpp"

namespace facegate {

PcaStudy pca_first_component_variance(const LabeledMatrix& data) {
    if (data.n_rows == 0 || data.n_cols == 0) throw InsufficientData("empty feature matrix");
    if (data.participants.size() != data.n_rows)
        throw InsufficientData("pca study needs a participant id per row");

    std::set<std::string> ids(data.participants.begin(), data.participants.end());
    const std::vector<std::string> order(ids.begin(), ids.end());

    PcaStudy study;
    std::vector<std::size_t> rows;
    for (std::size_t p = 0; p < order.size(); ++p) {
        for (std::size_t i = 0; i < data.n_rows; ++i)
            if (data.participants[i] == order[p]) rows.push_back(i);

        const std::size_t m = rows.size();
        Eigen::MatrixXd x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(data.n_cols));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < data.n_cols; ++c)
                x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data.at(rows[r], c);

        // Standardize columns; constant columns carry no variance direction
        // and are dropped with a warning.
        std::vector<Eigen::Index> keep;
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            const double mean = x.col(c).mean();
            const double var = (x.col(c).array() - mean).square().sum() / static_cast<double>(m);
            if (var <= 1e-24) {
                const std::string name = data.feature_names.empty()
                                             ? "column " + std::to_string(c)
                                             : data.feature_names[static_cast<std::size_t>(c)];
                study.warnings.push_back("prefix " + std::to_string(p + 1) + ": dropped constant " +
                                         name);
                continue;
            }
            x.col(c) = (x.col(c).array() - mean) / std::sqrt(var);
            keep.push_back(c);
        }
        if (keep.empty()) throw InsufficientData("all columns constant; covariance degenerate");

        Eigen::MatrixXd z(x.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) z.col(static_cast<Eigen::Index>(j)) = x.col(keep[j]);

        const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
        const Eigen::VectorXd evals = solver.eigenvalues();

        PcaRow row;
        row.participants = p + 1;
        row.n_cols_used = keep.size();
        row.eigenvalue_sum = evals.sum();
        row.first_component_share = evals.maxCoeff() / evals.sum();
        study.rows.push_back(row);
    }
    return study;
}

}  // namespace facegate
