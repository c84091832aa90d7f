#include "lsts/covmatrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include "lsts/errors.hpp"

namespace lsts {

const char* to_string(CovFlavor flavor) {
    switch (flavor) {
        case CovFlavor::stationary: return "stationary";
        case CovFlavor::local: return "local";
        case CovFlavor::tapered: return "tapered";
        case CovFlavor::pd_corrected: return "pd_corrected";
    }
    return "?";
}

double BandedCovariance::entry(int i, int j) const {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw DomainError("matrix index out of range");
    if (dense_backed_) return dense_(i, j);
    const int d = std::abs(i - j);
    if (d > half_width_) return 0.0;
    return diagonals_[static_cast<std::size_t>(d)][static_cast<std::size_t>(std::min(i, j))];
}

Eigen::MatrixXd BandedCovariance::to_dense() const {
    if (dense_backed_) return dense_;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim_, dim_);
    for (int d = 0; d <= half_width_; ++d) {
        const auto& diag = diagonals_[static_cast<std::size_t>(d)];
        for (int i = 0; i + d < dim_; ++i) {
            out(i, i + d) = diag[static_cast<std::size_t>(i)];
            out(i + d, i) = diag[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

void BandedCovariance::write_csv(std::ostream& out) const {
    out << "i,j,value\n";
    char buf[64];
    if (dense_backed_) {
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) {
                std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", i + 1, j + 1, dense_(i, j));
                out << buf;
            }
        return;
    }
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j <= std::min(dim_ - 1, i + half_width_); ++j) {
            std::snprintf(buf, sizeof(buf), "%d,%d,%.17g\n", i + 1, j + 1, entry(i, j));
            out << buf;
        }
}

BandedCovariance BandedCovariance::from_diagonals(std::vector<std::vector<double>> diagonals,
                                                  int dim, CovFlavor flavor) {
    BandedCovariance cov;
    cov.dim_ = dim;
    cov.half_width_ = static_cast<int>(diagonals.size()) - 1;
    cov.flavor_ = flavor;
    cov.diagonals_ = std::move(diagonals);
    return cov;
}

BandedCovariance BandedCovariance::from_dense(Eigen::MatrixXd dense, CovFlavor flavor) {
    BandedCovariance cov;
    cov.dim_ = static_cast<int>(dense.rows());
    cov.half_width_ = cov.dim_ - 1;
    cov.flavor_ = flavor;
    cov.dense_ = std::move(dense);
    cov.dense_backed_ = true;
    return cov;
}

BandedCovariance banded_stationary(const ResidualSeries& res, int half_width) {
    const int N = res.window();
    if (half_width < 0 || half_width >= N) throw DomainError("half width outside [0, N)");
    std::vector<std::vector<double>> diagonals(static_cast<std::size_t>(half_width) + 1);
    for (int d = 0; d <= half_width; ++d) {
        double sum = 0.0;
        for (int s = 1; s <= N - d; ++s) sum += res.at(s) * res.at(s + d);
        diagonals[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(N - d),
                                                      sum / (N - d));
    }
    return BandedCovariance::from_diagonals(std::move(diagonals), N, CovFlavor::stationary);
}

BandedCovariance banded_local(const std::vector<LagCurve>& curves, int dim, int n,
                              int half_width) {
    if (half_width < 0 || half_width >= dim) throw DomainError("half width outside [0, dim)");
    std::vector<std::vector<double>> diagonals(static_cast<std::size_t>(half_width) + 1);
    for (int d = 0; d <= half_width; ++d) {
        if (d >= static_cast<int>(curves.size()) || curves[static_cast<std::size_t>(d)].lag != d)
            throw MissingMidpoint("no curve supplied for lag " + std::to_string(d));
        const auto& curve = curves[static_cast<std::size_t>(d)];
        auto& diag = diagonals[static_cast<std::size_t>(d)];
        diag.resize(static_cast<std::size_t>(dim - d));
        for (int i = 1; i <= dim - d; ++i)
            diag[static_cast<std::size_t>(i - 1)] =
                curve.value_at(static_cast<double>(2 * i + d) / (2.0 * n));
    }
    return BandedCovariance::from_diagonals(std::move(diagonals), dim, CovFlavor::local);
}

double taper_weight(double x) {
    const double a = std::fabs(x);
    if (a < 1.0) return 1.0;
    if (a <= 2.0) return 2.0 - a;
    return 0.0;
}

BandedCovariance taper_local(const std::vector<LagCurve>& curves, int dim, int n,
                             int half_width) {
    if (half_width < 0 || half_width >= dim) throw DomainError("half width outside [0, dim)");
    const int effective = half_width == 0 ? 0 : std::min(2 * half_width - 1, dim - 1);
    std::vector<std::vector<double>> diagonals(static_cast<std::size_t>(effective) + 1);
    for (int d = 0; d <= effective; ++d) {
        if (d >= static_cast<int>(curves.size()) || curves[static_cast<std::size_t>(d)].lag != d)
            throw MissingMidpoint("no curve supplied for lag " + std::to_string(d));
        const auto& curve = curves[static_cast<std::size_t>(d)];
        const double w =
            half_width == 0 ? 1.0 : taper_weight(static_cast<double>(d) / half_width);
        auto& diag = diagonals[static_cast<std::size_t>(d)];
        diag.resize(static_cast<std::size_t>(dim - d));
        for (int i = 1; i <= dim - d; ++i)
            diag[static_cast<std::size_t>(i - 1)] =
                w * curve.value_at(static_cast<double>(2 * i + d) / (2.0 * n));
    }
    return BandedCovariance::from_diagonals(std::move(diagonals), dim, CovFlavor::tapered);
}

double SpectralFloorParams::floor() const {
    return multiplier * gamma0_integral / std::pow(static_cast<double>(window), beta);
}

SpectralFloorParams make_floor_params(const LagCurve& gamma0, int m, int n, double beta,
                                      double multiplier) {
    const double upper = static_cast<double>(m) / n;
    if (gamma0.grid.empty() || gamma0.grid.front() > 1e-12 ||
        gamma0.grid.back() < upper - 1e-12)
        throw GridMismatch("lag-0 curve grid does not cover [0, m/n]");
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < gamma0.grid.size(); ++i) {
        const double t0 = gamma0.grid[i];
        const double t1 = std::min(gamma0.grid[i + 1], upper);
        if (t1 <= t0) break;
        integral += 0.5 * (gamma0.values[i] + gamma0.values[i + 1]) * (t1 - t0);
    }
    SpectralFloorParams params;
    params.beta = beta;
    params.multiplier = multiplier;
    params.gamma0_integral = integral;
    params.window = m;
    return params;
}

BandedCovariance pd_correct(const BandedCovariance& A, const SpectralFloorParams& params) {
    const double floor = params.floor();
    if (!std::isfinite(floor)) throw DomainError("eigenvalue floor is not finite");
    Eigen::MatrixXd dense = A.to_dense();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> values_only;
    values_only.compute(dense, Eigen::EigenvaluesOnly);
    if (values_only.info() != Eigen::Success)
        throw EigenFailure("symmetric eigendecomposition did not converge");
    if (values_only.eigenvalues().minCoeff() >= floor)
        return BandedCovariance::from_dense(std::move(dense), CovFlavor::pd_corrected);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success)
        throw EigenFailure("symmetric eigendecomposition did not converge");
    Eigen::VectorXd floored = solver.eigenvalues().cwiseMax(floor);
    Eigen::MatrixXd out =
        solver.eigenvectors() * floored.asDiagonal() * solver.eigenvectors().transpose();
    out = 0.5 * (out + out.transpose().eval()); // kill round-off asymmetry
    return BandedCovariance::from_dense(std::move(out), CovFlavor::pd_corrected);
}

double operator_norm(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    if (n == 0) return 0.0;
    const bool symmetric = (A - A.transpose()).cwiseAbs().maxCoeff() <=
                           1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());
    if (!symmetric) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
        return svd.singularValues()(0);
    }
    if (n <= 2000) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.compute(A, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw EigenFailure("symmetric eigensolve failed in operator_norm");
        return solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    // power iteration on the symmetric matrix; Rayleigh quotient of A^2
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
    double norm = 0.0;
    for (int it = 0; it < 10000; ++it) {
        Eigen::VectorXd w = A * v;
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        w /= wn;
        const double estimate = (A * w).norm();
        if (std::fabs(estimate - norm) <= 1e-10 * std::max(1.0, estimate)) return estimate;
        norm = estimate;
        v = w;
    }
    return norm;
}

} // namespace lsts
