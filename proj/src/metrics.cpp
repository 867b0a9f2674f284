#include "eva/metrics.hpp"

#include <cmath>

#include "eva/errors.hpp"

namespace eva {

double r_squared(const Matrix& y_hat, const Matrix& y) {
    if (!y_hat.same_shape(y) || y.cols() != 1) {
        throw ShapeError("r_squared: expected matching n x 1 columns");
    }
    const std::size_t n = y.rows();
    double mean = 0.0;
    for (double v : y.data()) mean += v;
    mean /= static_cast<double>(n);
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y(i, 0) - y_hat(i, 0);
        const double t = y(i, 0) - mean;
        ss_res += r * r;
        ss_tot += t * t;
    }
    if (ss_tot == 0.0) {
        throw UndefinedMetricError("r_squared: labels are constant");
    }
    return 1.0 - ss_res / ss_tot;
}

MetricsReport evaluate(const Matrix& y_hat, const Matrix& y, const Matrix& beta,
                       const Matrix& beta_plain, double r2_plain) {
    if (!y_hat.same_shape(y)) throw ShapeError("evaluate: prediction/label shape mismatch");
    if (!beta.same_shape(beta_plain)) throw ShapeError("evaluate: beta shape mismatch");

    MetricsReport rep;
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = y_hat.data()[i] - y.data()[i];
        rep.mae += std::fabs(d);
        rep.mse += d * d;
    }
    rep.mae /= static_cast<double>(n);
    rep.mse /= static_cast<double>(n);
    rep.rmse = std::sqrt(rep.mse);
    rep.r2 = r_squared(y_hat, y);

    const double beta_norm = beta.frobenius_norm();
    if (beta_norm == 0.0) {
        throw UndefinedMetricError("evaluate: secure beta has zero norm");
    }
    Matrix diff = beta;
    diff -= beta_plain;
    rep.lnre = diff.frobenius_norm() / beta_norm;
    if (r2_plain == 0.0) {
        throw UndefinedMetricError("evaluate: plaintext R^2 is zero");
    }
    rep.rrs = std::fabs(rep.r2 - r2_plain) / std::fabs(r2_plain);
    rep.mre = max_abs_diff(beta, beta_plain) / beta_plain.max_abs();
    return rep;
}

}  // namespace eva
