#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace handclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Per-column mean and population standard deviation (divisor N).
/// Zero-variance columns record a scale of 1 so they transform to zero.
struct ScalerParams {
    Vector means;
    Vector stds;
};

std::pair<ScalerParams, Matrix> scaler_fit_transform(const Matrix& X);
Matrix scaler_transform(const ScalerParams& params, const Matrix& X);

enum class ReducerId { Pca, Ica, KpcaCosine, KpcaRbf };

std::string_view reducer_name(ReducerId id);
std::optional<ReducerId> reducer_from_name(std::string_view name);

enum class Kernel { Cosine, Rbf, Linear };

/// Component scores plus everything needed to transform new rows the same
/// way. Only the fields relevant to the fitted reducer are populated.
struct ReducedData {
    Matrix scores; // rows x k
    ReducerId reducer = ReducerId::Pca;
    int k = 0;
    std::uint64_t seed = 0;
    bool converged = true; // ICA fixed-point iteration status

    // pca
    Matrix loadings;            // cols x k, right singular vectors
    Vector explained_variance;  // non-increasing

    // ica
    Matrix unmixing; // cols x k; scores = Z * unmixing

    // kpca
    Kernel kernel = Kernel::Linear;
    double gamma = 0.0;
    Matrix training;        // rows used to fit
    Matrix eigenvectors;    // n x k, unit columns
    Vector eigenvalues;     // positive, descending
    Vector kernel_col_mean; // column means of the uncentered kernel matrix
    double kernel_mean = 0.0;
};

/// Projection onto the top-k right singular vectors of the (already
/// centered) matrix. Component signs are fixed so each loading vector's
/// largest-magnitude entry is positive.
ReducedData pca_fit_transform(const Matrix& Z, int k);

/// FastICA: PCA whitening to k dimensions, then symmetric fixed-point
/// iteration with the logcosh contrast. Non-convergence within 200
/// iterations is reported through `converged`, not an error.
ReducedData ica_fit_transform(const Matrix& Z, int k, std::uint64_t seed);

/// Kernel PCA with a double-centered kernel matrix; scores are the top-k
/// eigenvectors scaled by sqrt(eigenvalue). gamma < 0 selects the default
/// 1 / columns for the rbf kernel.
ReducedData kpca_fit_transform(const Matrix& Z, int k, Kernel kernel,
                               double gamma = -1.0);

/// Dispatch by reducer id (kpca gamma at its default).
ReducedData reduce(const Matrix& Z, ReducerId reducer, int k, std::uint64_t seed);

/// Applies a fitted reducer to new rows; on the training data this equals
/// the fit output.
Matrix reduce_transform(const ReducedData& fitted, const Matrix& Z);

} // namespace handclust
