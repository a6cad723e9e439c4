#include "omem/state.hpp"

#include <complex>

namespace omem {

double GaussianState::symmetry_defect() const {
    return (cov - cov.transpose()).cwiseAbs().maxCoeff();
}

void GaussianState::symmetrize() { cov = ((cov + cov.transpose()) / 2.0).eval(); }

Mat4 symplectic_form() {
    Mat4 omega = Mat4::Zero();
    omega(kX1, kP1) = 1.0;
    omega(kP1, kX1) = -1.0;
    omega(kX2, kP2) = 1.0;
    omega(kP2, kX2) = -1.0;
    return omega;
}

double GaussianState::min_uncertainty_eigenvalue() const {
    using CMat4 = Eigen::Matrix4cd;
    const std::complex<double> im(0.0, 1.0);
    CMat4 h = cov_physical().cast<std::complex<double>>() +
              (im / 4.0) * symplectic_form().cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<CMat4> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool GaussianState::physical(double tol) const {
    if (symmetry_defect() > 1e-12) return false;
    if (cov(kPsi, kPsi) < -tol) return false;
    return min_uncertainty_eigenvalue() >= -tol;
}

}  // namespace omem
