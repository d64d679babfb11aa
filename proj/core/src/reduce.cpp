#include "handclust/reduce.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "handclust/rng.hpp"

namespace handclust {

std::string_view reducer_name(ReducerId id) {
    switch (id) {
    case ReducerId::Pca: return "pca";
    case ReducerId::Ica: return "ica";
    case ReducerId::KpcaCosine: return "kpca-cosine";
    case ReducerId::KpcaRbf: return "kpca-rbf";
    }
    return "?";
}

std::optional<ReducerId> reducer_from_name(std::string_view name) {
    if (name == "pca") return ReducerId::Pca;
    if (name == "ica") return ReducerId::Ica;
    if (name == "kpca-cosine" || name == "kpca_cosine") return ReducerId::KpcaCosine;
    if (name == "kpca-rbf" || name == "kpca_rbf") return ReducerId::KpcaRbf;
    return std::nullopt;
}

std::pair<ScalerParams, Matrix> scaler_fit_transform(const Matrix& X) {
    if (X.rows() < 2) throw std::invalid_argument("scaler: need at least 2 rows");
    ScalerParams params;
    const auto n = static_cast<double>(X.rows());
    params.means = X.colwise().mean();
    params.stds.resize(X.cols());
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        const double var = (X.col(c).array() - params.means[c]).square().sum() / n;
        const double std = std::sqrt(var);
        params.stds[c] = std > 0.0 ? std : 1.0;
    }
    return {params, scaler_transform(params, X)};
}

Matrix scaler_transform(const ScalerParams& params, const Matrix& X) {
    if (X.cols() != params.means.size()) {
        throw std::invalid_argument("scaler_transform: column count mismatch");
    }
    Matrix Z = X;
    Z.rowwise() -= params.means.transpose();
    for (Eigen::Index c = 0; c < Z.cols(); ++c) Z.col(c) /= params.stds[c];
    return Z;
}

namespace {

// Flip each column so its largest-magnitude entry is positive; ties go to
// the lowest index. Applied to loadings / eigenvectors for reproducibility.
void fix_signs(Matrix& vectors, Matrix* paired = nullptr) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        Eigen::Index at = 0;
        vectors.col(c).cwiseAbs().maxCoeff(&at);
        if (vectors(at, c) < 0.0) {
            vectors.col(c) = -vectors.col(c);
            if (paired) paired->col(c) = -paired->col(c);
        }
    }
}

} // namespace

ReducedData pca_fit_transform(const Matrix& Z, int k) {
    const Eigen::Index max_k = std::min(Z.rows() - 1, Z.cols());
    if (k < 1 || k > max_k) {
        throw std::invalid_argument("pca: k must be in [1, min(rows-1, cols)]");
    }
    Eigen::BDCSVD<Matrix> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    ReducedData out;
    out.reducer = ReducerId::Pca;
    out.k = k;
    out.loadings = svd.matrixV().leftCols(k);
    fix_signs(out.loadings);
    out.scores = Z * out.loadings;
    out.explained_variance =
        svd.singularValues().head(k).array().square() / static_cast<double>(Z.rows());
    return out;
}

ReducedData ica_fit_transform(const Matrix& Z, int k, std::uint64_t seed) {
    const Eigen::Index max_k = std::min(Z.rows() - 1, Z.cols());
    if (k < 1 || k > max_k) {
        throw std::invalid_argument("ica: k must be in [1, min(rows-1, cols)]");
    }
    const auto n = static_cast<double>(Z.rows());

    // whiten via PCA
    Eigen::BDCSVD<Matrix> svd(Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector sv = svd.singularValues().head(k);
    if (sv.minCoeff() <= 0.0) {
        throw std::invalid_argument("ica: data rank below requested components");
    }
    const Matrix whitening =
        svd.matrixV().leftCols(k) * sv.cwiseInverse().asDiagonal() * std::sqrt(n);
    const Matrix Xw = Z * whitening; // unit population covariance

    RngStream rng(seed);
    Matrix W(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) W(i, j) = rng.normal();
    }
    auto decorrelate = [](const Matrix& M) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(M * M.transpose());
        const Vector inv_sqrt = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        return Matrix(es.eigenvectors() * inv_sqrt.asDiagonal() *
                      es.eigenvectors().transpose() * M);
    };
    W = decorrelate(W);

    bool converged = false;
    constexpr int kMaxIter = 200;
    constexpr double kTol = 1e-4;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        const Matrix Y = Xw * W.transpose();          // n x k
        const Matrix G = Y.array().tanh().matrix();   // logcosh contrast, alpha = 1
        const Matrix Gprime = (1.0 - G.array().square()).matrix();
        Matrix W_new = (G.transpose() * Xw) / n;
        for (int i = 0; i < k; ++i) {
            W_new.row(i) -= Gprime.col(i).mean() * W.row(i);
        }
        W_new = decorrelate(W_new);
        const double lim =
            ((W_new * W.transpose()).diagonal().cwiseAbs().array() - 1.0).abs().maxCoeff();
        W = W_new;
        if (lim < kTol) {
            converged = true;
            break;
        }
    }

    ReducedData out;
    out.reducer = ReducerId::Ica;
    out.k = k;
    out.seed = seed;
    out.converged = converged;
    out.unmixing = whitening * W.transpose(); // cols x k
    out.scores = Z * out.unmixing;
    return out;
}

namespace {

Matrix kernel_matrix(const Matrix& A, const Matrix& B, Kernel kernel, double gamma) {
    Matrix K(A.rows(), B.rows());
    switch (kernel) {
    case Kernel::Linear:
        K = A * B.transpose();
        break;
    case Kernel::Cosine: {
        Vector na = A.rowwise().norm();
        Vector nb = B.rowwise().norm();
        for (Eigen::Index i = 0; i < na.size(); ++i) {
            if (na[i] == 0.0) na[i] = 1.0;
        }
        for (Eigen::Index i = 0; i < nb.size(); ++i) {
            if (nb[i] == 0.0) nb[i] = 1.0;
        }
        K = A * B.transpose();
        for (Eigen::Index i = 0; i < K.rows(); ++i) {
            for (Eigen::Index j = 0; j < K.cols(); ++j) {
                K(i, j) /= na[i] * nb[j];
            }
        }
        break;
    }
    case Kernel::Rbf:
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            for (Eigen::Index j = 0; j < B.rows(); ++j) {
                K(i, j) = std::exp(-gamma * (A.row(i) - B.row(j)).squaredNorm());
            }
        }
        break;
    }
    return K;
}

} // namespace

ReducedData kpca_fit_transform(const Matrix& Z, int k, Kernel kernel, double gamma) {
    if (Z.rows() < k + 1) {
        throw std::invalid_argument("kpca: need at least k + 1 rows");
    }
    if (gamma < 0.0) gamma = 1.0 / static_cast<double>(Z.cols());

    const auto n = Z.rows();
    const Matrix K = kernel_matrix(Z, Z, kernel, gamma);
    const Vector col_mean = K.colwise().mean();
    const double total_mean = K.mean();
    Matrix Kc = K;
    Kc.rowwise() -= col_mean.transpose();
    Kc.colwise() -= col_mean; // K is symmetric: row means equal column means
    Kc.array() += total_mean;

    Eigen::SelfAdjointEigenSolver<Matrix> es(Kc);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("kpca: eigendecomposition failed");
    }
    // ascending from Eigen; keep the positive tail, descending
    const Vector evals = es.eigenvalues();
    const double cutoff = 1e-10 * std::max(evals.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        if (evals[i] > cutoff) keep.push_back(i);
    }
    if (static_cast<int>(keep.size()) < k) {
        throw std::runtime_error("kpca: only " + std::to_string(keep.size()) +
                                 " positive eigenvalues, need " + std::to_string(k));
    }

    ReducedData out;
    out.reducer = kernel == Kernel::Rbf ? ReducerId::KpcaRbf : ReducerId::KpcaCosine;
    out.k = k;
    out.kernel = kernel;
    out.gamma = gamma;
    out.training = Z;
    out.kernel_col_mean = col_mean;
    out.kernel_mean = total_mean;
    out.eigenvalues.resize(k);
    out.eigenvectors.resize(n, k);
    for (int j = 0; j < k; ++j) {
        out.eigenvalues[j] = evals[keep[j]];
        out.eigenvectors.col(j) = es.eigenvectors().col(keep[j]);
    }
    fix_signs(out.eigenvectors);
    out.scores = out.eigenvectors * out.eigenvalues.cwiseSqrt().asDiagonal();
    return out;
}

ReducedData reduce(const Matrix& Z, ReducerId reducer, int k, std::uint64_t seed) {
    switch (reducer) {
    case ReducerId::Pca: return pca_fit_transform(Z, k);
    case ReducerId::Ica: return ica_fit_transform(Z, k, seed);
    case ReducerId::KpcaCosine: return kpca_fit_transform(Z, k, Kernel::Cosine);
    case ReducerId::KpcaRbf: return kpca_fit_transform(Z, k, Kernel::Rbf);
    }
    throw std::logic_error("reduce: unknown reducer");
}

Matrix reduce_transform(const ReducedData& fitted, const Matrix& Z) {
    switch (fitted.reducer) {
    case ReducerId::Pca: return Z * fitted.loadings;
    case ReducerId::Ica: return Z * fitted.unmixing;
    case ReducerId::KpcaCosine:
    case ReducerId::KpcaRbf: {
        const Matrix Kx =
            kernel_matrix(Z, fitted.training, fitted.kernel, fitted.gamma);
        Matrix Kc = Kx;
        Kc.rowwise() -= fitted.kernel_col_mean.transpose();
        const Vector row_mean = Kx.rowwise().mean();
        Kc.colwise() -= row_mean;
        Kc.array() += fitted.kernel_mean;
        return Kc * fitted.eigenvectors *
               fitted.eigenvalues.cwiseSqrt().cwiseInverse().asDiagonal();
    }
    }
    throw std::logic_error("reduce_transform: unknown reducer");
}

} // namespace handclust
