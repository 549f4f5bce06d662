#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace locopath {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Design matrix plus response. No intercept column; callers that want
// centering/standardization apply it before construction (see preprocess()).
struct Dataset {
    MatrixXd X;                      // n x p
    VectorXd y;                      // n
    std::vector<std::string> names;  // p column labels

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index p() const { return X.cols(); }
};

inline void validate(const Dataset& data) {
    if (data.X.rows() != data.y.size()) throw std::invalid_argument("X/y row mismatch");
    if (data.X.rows() < 2) throw std::invalid_argument("need n >= 2");
    if (data.X.cols() < 1) throw std::invalid_argument("need p >= 1");
    if (!data.X.allFinite() || !data.y.allFinite()) throw std::invalid_argument("non-finite data");
    if (!data.names.empty() && static_cast<Eigen::Index>(data.names.size()) != data.X.cols())
        throw std::invalid_argument("names length != p");
}

// Default column labels x1..xp (1-based, matching report conventions).
inline std::vector<std::string> default_names(Eigen::Index p) {
    std::vector<std::string> out(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) out[static_cast<std::size_t>(j)] = "x" + std::to_string(j + 1);
    return out;
}

// Mean-center y and/or columns of X; standardize scales columns to unit
// sample standard deviation (constant columns are left alone).
inline Dataset preprocess(Dataset data, bool center, bool standardize) {
    if (center) {
        data.y.array() -= data.y.mean();
        data.X.rowwise() -= data.X.colwise().mean();
    }
    if (standardize) {
        const double dn = static_cast<double>(data.X.rows());
        for (Eigen::Index j = 0; j < data.X.cols(); ++j) {
            const double mu = data.X.col(j).mean();
            const double sd = std::sqrt((data.X.col(j).array() - mu).square().sum() / dn);
            if (sd > 0.0) data.X.col(j) /= sd;
        }
    }
    return data;
}

// Null hypothesis beta_j = values[k] for j = constrained[k] (0-based indices).
struct Hypothesis {
    std::vector<Eigen::Index> constrained;
    VectorXd values;
};

inline void validate(const Hypothesis& h, Eigen::Index p) {
    if (h.constrained.empty()) throw std::invalid_argument("empty hypothesis");
    if (h.values.size() != static_cast<Eigen::Index>(h.constrained.size()))
        throw std::invalid_argument("hypothesis index/value length mismatch");
    if (!h.values.allFinite()) throw std::invalid_argument("non-finite hypothesis value");
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    for (Eigen::Index j : h.constrained) {
        if (j < 0 || j >= p) throw std::invalid_argument("hypothesis index out of range");
        if (seen[static_cast<std::size_t>(j)]) throw std::invalid_argument("duplicate hypothesis index");
        seen[static_cast<std::size_t>(j)] = true;
    }
}

}  // namespace locopath
