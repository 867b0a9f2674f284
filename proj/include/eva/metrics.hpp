#pragma once

#include "eva/matrix.hpp"

namespace eva {

/// Accuracy summary of a secure regression run against labels and the
/// plaintext-trained baseline.
struct MetricsReport {
    double mae = 0.0;
    double mse = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    double lnre = 0.0;  // ||beta - beta_plain||_2 / ||beta||_2
    double rrs = 0.0;   // |R^2 - R^2_plain| / R^2_plain
    double mre = 0.0;   // max elementwise error of beta, relative to max|beta_plain|
};

/// Coefficient of determination of predictions against labels.
double r_squared(const Matrix& y_hat, const Matrix& y);

MetricsReport evaluate(const Matrix& y_hat, const Matrix& y, const Matrix& beta,
                       const Matrix& beta_plain, double r2_plain);

}  // namespace eva
