#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "handclust/reduce.hpp"

namespace handclust {

struct FuzzyModel {
    Matrix centers;     // c x k
    Matrix memberships; // c x n, columns sum to 1
    double fpc = 0.0;
    double fuzzifier = 2.0;
    int iterations = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;              // all points coincide
    std::vector<double> objective_trace;  // sum u^m d^2 per iteration
};

struct CmeansParams {
    double fuzzifier = 2.0;
    double tol = 1e-5; // on max |delta U|
    int max_iter = 1000;
};

/// Membership update for one distance column: u_i = 1 / sum_l
/// (d_i / d_l)^(2/(m-1)). A zero distance makes the point crisp on the
/// first coincident center.
Vector fuzzy_memberships(const Vector& distances, double fuzzifier);

/// Fuzzy c-means on row-major points, initialized from a seeded random
/// column-normalized membership matrix. The init stream depends only on
/// (seed, c, n), never on the data.
FuzzyModel cmeans(const Matrix& X, int c, const CmeansParams& params,
                  std::uint64_t seed);

/// Fuzzy partition coefficient: (1/n) sum u^2; 1 for crisp partitions,
/// 1/c for uniform memberships.
double fpc(const Matrix& U);

/// Paper-anchored acceptance thresholds: 0.7 for 2 centers, 0.6 for 3.
/// Reported as a verdict, never enforced as an error.
bool fpc_acceptable(double value, int centers);

/// argmax membership per column; ties go to the lower cluster index.
std::vector<int> hard_assign(const Matrix& U);

/// Permutation sorting clusters lexicographically by center coordinates;
/// coincident centers keep their original order.
std::vector<int> canonical_order(const Matrix& centers);

/// Reorders centers and membership rows into canonical order.
void canonicalize(FuzzyModel& model);

struct HandMembershipReport {
    struct Entry {
        std::string hand;
        std::vector<double> cluster_pct; // per cluster, sums to 100
        int rows = 0;
    };
    std::vector<Entry> hands; // in first-appearance order of the tags
    double fpc = 0.0;
    std::vector<std::string> warnings;
};

/// Per hand tag: the percentage of that hand's rows hard-assigned to each
/// cluster. Rows with empty tags are excluded with a warning.
HandMembershipReport hand_memberships(const std::vector<int>& labels,
                                      const std::vector<std::string>& tags,
                                      int centers, double fpc_value);

} // namespace handclust
