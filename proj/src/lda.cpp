#include "dbcsp/lda.hpp"

#include <Eigen/Cholesky>

namespace dbcsp::classify {

LdaModel lda_fit(const Eigen::MatrixXd& features, const std::vector<int>& class_index,
                 const std::string& label1, const std::string& label2) {
    const Eigen::Index n = features.rows();
    const Eigen::Index p = features.cols();
    if (static_cast<Eigen::Index>(class_index.size()) != n) {
        throw ArgumentError("feature rows and class index length differ");
    }
    Eigen::Index n1 = 0;
    Eigen::Index n2 = 0;
    for (int idx : class_index) {
        if (idx == 0) {
            ++n1;
        } else if (idx == 1) {
            ++n2;
        } else {
            throw ArgumentError("class index must be 0 or 1");
        }
    }
    if (n1 < 2 || n2 < 2) {
        throw DataError("insufficient data: each class needs at least 2 samples, got " +
                        std::to_string(n1) + " and " + std::to_string(n2));
    }

    Eigen::VectorXd mean1 = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd mean2 = Eigen::VectorXd::Zero(p);
    for (Eigen::Index i = 0; i < n; ++i) {
        (class_index[i] == 0 ? mean1 : mean2) += features.row(i).transpose();
    }
    mean1 /= static_cast<double>(n1);
    mean2 /= static_cast<double>(n2);

    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd centered =
            features.row(i).transpose() - (class_index[i] == 0 ? mean1 : mean2);
        scatter += centered * centered.transpose();
    }
    linalg::SymMatrix pooled(scatter / static_cast<double>(n - 2));

    const linalg::EigenPairs spectrum = linalg::sym_eigen(pooled, "pooled covariance");
    const double max_value = spectrum.values(0);
    const double min_value = spectrum.values(spectrum.values.size() - 1);
    double ridge = 0.0;
    if (min_value <= 0.0 || max_value > 1e10 * min_value) {
        const double trace = pooled.mat().trace();
        ridge = 1e-8 * (trace > 0.0 ? trace / static_cast<double>(p) : 1.0);
        while (min_value + ridge <= 0.0) ridge *= 2.0;
    }

    return LdaModel{std::move(mean1),
                    std::move(mean2),
                    std::move(pooled),
                    static_cast<double>(n1) / static_cast<double>(n),
                    static_cast<double>(n2) / static_cast<double>(n),
                    label1,
                    label2,
                    ridge};
}

LdaPrediction lda_predict(const LdaModel& model, const Eigen::MatrixXd& features) {
    const Eigen::Index p = model.dim();
    if (features.cols() != p) {
        throw ArgumentError("features have " + std::to_string(features.cols()) +
                            " columns but the model expects " + std::to_string(p));
    }
    Eigen::MatrixXd regularized = model.pooled_cov.mat();
    regularized.diagonal().array() += model.ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() != Eigen::Success) {
        throw NumericError("pooled covariance is not positive definite even after ridge");
    }

    const Eigen::VectorXd w1 = llt.solve(model.mean1);
    const Eigen::VectorXd w2 = llt.solve(model.mean2);
    const double c1 = -0.5 * model.mean1.dot(w1) + std::log(model.prior1);
    const double c2 = -0.5 * model.mean2.dot(w2) + std::log(model.prior2);

    const Eigen::Index n = features.rows();
    LdaPrediction out;
    out.scores.resize(n, 2);
    out.class_index.reserve(static_cast<std::size_t>(n));
    out.labels.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s1 = features.row(i).dot(w1) + c1;
        const double s2 = features.row(i).dot(w2) + c2;
        out.scores(i, 0) = s1;
        out.scores(i, 1) = s2;
        const int idx = s2 > s1 ? 1 : 0;  // tie goes to the first label
        out.class_index.push_back(idx);
        out.labels.push_back(idx == 0 ? model.label1 : model.label2);
    }
    return out;
}

} // namespace dbcsp::classify
