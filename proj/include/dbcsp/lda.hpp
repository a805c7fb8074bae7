#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "dbcsp/linalg.hpp"

namespace dbcsp::classify {

/// Two-class Gaussian linear discriminant with pooled within-class
/// covariance. `ridge` is the diagonal loading actually applied to keep
/// the pooled covariance invertible (0 when none was needed).
struct LdaModel {
    Eigen::VectorXd mean1;
    Eigen::VectorXd mean2;
    linalg::SymMatrix pooled_cov;
    double prior1 = 0.5;
    double prior2 = 0.5;
    std::string label1;
    std::string label2;
    double ridge = 0.0;

    Eigen::Index dim() const { return mean1.size(); }
};

struct LdaPrediction {
    std::vector<int> class_index;        // 0 = label1, 1 = label2
    std::vector<std::string> labels;
    Eigen::MatrixXd scores;              // n x 2 discriminant values
};

/// Fits class means, pooled covariance (denominator n - 2) and priors
/// from class proportions. When the pooled covariance is singular or has
/// condition number above 1e10, a ridge of 1e-8 * trace/p is added and
/// doubled until the spectrum is positive.
LdaModel lda_fit(const Eigen::MatrixXd& features, const std::vector<int>& class_index,
                 const std::string& label1, const std::string& label2);

/// Assigns each row the class maximizing
/// x' S^-1 mu_k - 1/2 mu_k' S^-1 mu_k + ln pi_k; ties go to label1.
LdaPrediction lda_predict(const LdaModel& model, const Eigen::MatrixXd& features);

} // namespace dbcsp::classify
