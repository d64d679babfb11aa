#include "handclust/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "handclust/rng.hpp"

namespace handclust {

Vector fuzzy_memberships(const Vector& distances, double fuzzifier) {
    const auto c = distances.size();
    Vector u = Vector::Zero(c);
    for (Eigen::Index i = 0; i < c; ++i) {
        if (distances[i] == 0.0) {
            u[i] = 1.0; // crisp on the first coincident center
            return u;
        }
    }
    const double expo = -2.0 / (fuzzifier - 1.0);
    Vector powed(c);
    for (Eigen::Index i = 0; i < c; ++i) powed[i] = std::pow(distances[i], expo);
    return powed / powed.sum();
}

FuzzyModel cmeans(const Matrix& X, int c, const CmeansParams& params,
                  std::uint64_t seed) {
    const auto n = X.rows();
    const auto k = X.cols();
    if (c < 2) throw std::invalid_argument("cmeans: need at least 2 centers");
    if (n <= c) throw std::invalid_argument("cmeans: need more points than centers");
    if (params.fuzzifier <= 1.0) throw std::invalid_argument("cmeans: fuzzifier must exceed 1");

    FuzzyModel model;
    model.fuzzifier = params.fuzzifier;
    model.seed = seed;
    model.degenerate = true;
    for (Eigen::Index j = 1; j < n && model.degenerate; ++j) {
        model.degenerate = (X.row(j) - X.row(0)).squaredNorm() == 0.0;
    }

    // init: seeded uniform random memberships, column-normalized; the
    // stream depends only on (seed, c, n)
    RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(c),
                              static_cast<std::uint64_t>(n)));
    Matrix U(c, n);
    for (Eigen::Index i = 0; i < c; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) U(i, j) = rng.uniform();
    }
    for (Eigen::Index j = 0; j < n; ++j) U.col(j) /= U.col(j).sum();

    Matrix centers(c, k);
    Matrix dist(c, n);
    int iter = 0;
    for (; iter < params.max_iter; ++iter) {
        const Matrix Um = U.array().pow(params.fuzzifier).matrix();
        centers = Um * X;
        for (Eigen::Index i = 0; i < c; ++i) {
            const double w = Um.row(i).sum();
            centers.row(i) /= w;
        }
        for (Eigen::Index i = 0; i < c; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                dist(i, j) = (X.row(j) - centers.row(i)).norm();
            }
        }
        Matrix U_new(c, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            U_new.col(j) = fuzzy_memberships(dist.col(j), params.fuzzifier);
        }
        double objective = 0.0;
        for (Eigen::Index i = 0; i < c; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                objective += std::pow(U_new(i, j), params.fuzzifier) * dist(i, j) * dist(i, j);
            }
        }
        model.objective_trace.push_back(objective);
        const double delta = (U_new - U).cwiseAbs().maxCoeff();
        U = U_new;
        if (delta < params.tol) {
            ++iter;
            break;
        }
    }

    model.centers = centers;
    model.memberships = U;
    model.iterations = iter;
    model.fpc = fpc(U);
    return model;
}

double fpc(const Matrix& U) {
    const auto n = static_cast<double>(U.cols());
    return U.array().square().sum() / n;
}

bool fpc_acceptable(double value, int centers) {
    if (centers == 2) return value >= 0.7;
    if (centers == 3) return value >= 0.6;
    return value >= 1.0 / centers + 0.1; // no paper threshold beyond 3 centers
}

std::vector<int> hard_assign(const Matrix& U) {
    std::vector<int> labels(U.cols());
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        int best = 0;
        for (Eigen::Index i = 1; i < U.rows(); ++i) {
            if (U(i, j) > U(best, j)) best = static_cast<int>(i);
        }
        labels[j] = best;
    }
    return labels;
}

std::vector<int> canonical_order(const Matrix& centers) {
    std::vector<int> order(centers.rows());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        for (Eigen::Index c = 0; c < centers.cols(); ++c) {
            if (centers(a, c) != centers(b, c)) return centers(a, c) < centers(b, c);
        }
        return false; // coincident centers keep input order
    });
    return order;
}

void canonicalize(FuzzyModel& model) {
    const auto order = canonical_order(model.centers);
    Matrix centers(model.centers.rows(), model.centers.cols());
    Matrix U(model.memberships.rows(), model.memberships.cols());
    for (std::size_t i = 0; i < order.size(); ++i) {
        centers.row(static_cast<Eigen::Index>(i)) = model.centers.row(order[i]);
        U.row(static_cast<Eigen::Index>(i)) = model.memberships.row(order[i]);
    }
    model.centers = std::move(centers);
    model.memberships = std::move(U);
}

HandMembershipReport hand_memberships(const std::vector<int>& labels,
                                      const std::vector<std::string>& tags,
                                      int centers, double fpc_value) {
    if (labels.size() != tags.size()) {
        throw std::invalid_argument("hand_memberships: labels and tags disagree");
    }
    HandMembershipReport report;
    report.fpc = fpc_value;
    std::vector<std::vector<int>> counts; // per hand, per cluster
    std::vector<std::string> order;
    bool skipped_untagged = false;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (tags[i].empty()) {
            skipped_untagged = true;
            continue;
        }
        auto it = std::find(order.begin(), order.end(), tags[i]);
        std::size_t h;
        if (it == order.end()) {
            order.push_back(tags[i]);
            counts.emplace_back(centers, 0);
            h = order.size() - 1;
        } else {
            h = static_cast<std::size_t>(it - order.begin());
        }
        if (labels[i] < 0 || labels[i] >= centers) {
            throw std::invalid_argument("hand_memberships: label out of range");
        }
        ++counts[h][labels[i]];
    }
    if (skipped_untagged) {
        report.warnings.push_back("rows with empty hand tags were excluded");
    }
    for (std::size_t h = 0; h < order.size(); ++h) {
        HandMembershipReport::Entry entry;
        entry.hand = order[h];
        entry.rows = std::accumulate(counts[h].begin(), counts[h].end(), 0);
        entry.cluster_pct.resize(centers);
        for (int c = 0; c < centers; ++c) {
            entry.cluster_pct[c] = 100.0 * counts[h][c] / entry.rows;
        }
        report.hands.push_back(std::move(entry));
    }
    return report;
}

} // namespace handclust
