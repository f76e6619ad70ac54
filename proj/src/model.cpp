#include "carma/model.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>

namespace carma {

namespace {

constexpr double kStationarityTol = 1e-8;

Eigen::VectorXcd eigenvalues_of(const Matrix& A) {
    Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigenvalue solver failed on companion matrix");
    return solver.eigenvalues();
}

}  // namespace

ModelFamily ModelFamily::car1() {
    ModelFamily fam;
    fam.name = "car1";
    fam.p = 1;
    fam.dim = 1;
    fam.map = [](const Vector& theta, Vector& ar, Vector& ma) {
        ar.resize(1);
        ma.resize(1);
        ar[0] = -theta[0];  // z + a1 with a1 = -theta, eigenvalue theta
        ma[0] = 1.0;
    };
    return fam;
}

ModelFamily ModelFamily::carma31() {
    ModelFamily fam;
    fam.name = "carma31";
    fam.p = 3;
    fam.dim = 5;
    fam.map = [](const Vector& theta, Vector& ar, Vector& ma) {
        ar.resize(3);
        ma.resize(3);
        // last companion row is (theta1, theta2, theta3) = (-a3, -a2, -a1)
        ar[0] = -theta[2];
        ar[1] = -theta[1];
        ar[2] = -theta[0];
        ma[0] = theta[3];
        ma[1] = theta[4];
        ma[2] = 0.0;
    };
    return fam;
}

ModelFamily ModelFamily::by_name(const std::string& name) {
    if (name == "car1") return car1();
    if (name == "carma31") return carma31();
    throw std::invalid_argument("unknown model family: " + name);
}

CarmaSpec build_state_space(const Vector& theta, const ModelFamily& family, double sigma_L2) {
    if (theta.size() != family.dim)
        throw std::invalid_argument("build_state_space: parameter dimension " +
                                    std::to_string(theta.size()) + " does not match family " +
                                    family.name);
    if (sigma_L2 <= 0.0) throw std::invalid_argument("build_state_space: sigma_L2 must be > 0");

    Vector ar, ma;
    family.map(theta, ar, ma);
    const int p = family.p;
    if (ar.size() != p || ma.size() != p)
        throw std::invalid_argument("build_state_space: family map returned wrong sizes");
    if (ar[p - 1] == 0.0)
        throw std::invalid_argument("build_state_space: a_p(theta) = 0 violates the model");
    if (ma.isZero(0.0))
        throw std::invalid_argument("build_state_space: c(theta) = 0 violates the model");

    CarmaSpec spec;
    spec.p = p;
    spec.sigma_L2 = sigma_L2;
    spec.A = Matrix::Zero(p, p);
    for (int i = 0; i + 1 < p; ++i) spec.A(i, i + 1) = 1.0;
    for (int j = 0; j < p; ++j) spec.A(p - 1, j) = -ar[p - 1 - j];
    spec.c = ma;
    spec.q = 0;
    for (int j = 0; j < p; ++j)
        if (ma[j] != 0.0) spec.q = j;
    return spec;
}

CarmaSpec build_state_space(const ThetaParam& theta, const ModelFamily& family, double sigma_L2) {
    return build_state_space(theta.values, family, sigma_L2);
}

bool check_stationarity(const CarmaSpec& spec) {
    const auto lambda = eigenvalues_of(spec.A);
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (lambda[i].real() > -kStationarityTol) return false;
    return true;
}

bool check_sampling_identifiability(const CarmaSpec& spec, double h) {
    const double cutoff = M_PI / h;
    const auto lambda = eigenvalues_of(spec.A);
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (std::abs(lambda[i].imag()) >= cutoff) return false;
    return true;
}

double feasibility_violation(const CarmaSpec& spec, double h) {
    const double cutoff = M_PI / h;
    double v = 0.0;
    const auto lambda = eigenvalues_of(spec.A);
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        const double re_excess = lambda[i].real() + kStationarityTol;
        if (re_excess > 0.0) v += re_excess * re_excess;
        const double im_excess = std::abs(lambda[i].imag()) - cutoff;
        if (im_excess > 0.0) v += im_excess * im_excess;
    }
    return v;
}

Matrix stationary_state_cov(const CarmaSpec& spec) {
    const int p = spec.p;
    // vec form of A S + S A^T = -Q with Q = sigma_L2 e_p e_p^T:
    // (I (x) A + A (x) I) vec(S) = vec(-Q)
    Matrix K = Matrix::Zero(p * p, p * p);
    const Matrix I = Matrix::Identity(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k)
                for (int l = 0; l < p; ++l) {
                    // (I (x) A): block (i, j) of p x p is I(i, j) * A
                    K(i * p + k, j * p + l) += I(i, j) * spec.A(k, l) + spec.A(i, j) * I(k, l);
                }
    Vector rhs = Vector::Zero(p * p);
    rhs[(p - 1) * p + (p - 1)] = -spec.sigma_L2;

    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible())
        throw std::runtime_error(
            "stationary_state_cov: Lyapunov system singular (non-stationary spec?)");
    const Vector s = lu.solve(rhs);
    Matrix S(p, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < p; ++i) S(i, j) = s[j * p + i];
    // enforce exact symmetry against round-off
    S = 0.5 * (S + S.transpose()).eval();
    return S;
}

double autocovariance(const CarmaSpec& spec, double t) {
    if (t < 0.0) throw std::invalid_argument("autocovariance: lag must be nonnegative");
    const Matrix S = stationary_state_cov(spec);
    const Matrix E = (spec.A * t).exp();
    return spec.c.dot(E * S * spec.c);
}

AcfTable acf_table(const CarmaSpec& spec, double h, int r) {
    AcfTable table;
    table.h = h;
    table.values.resize(static_cast<std::size_t>(r) + 1);
    const Matrix S = stationary_state_cov(spec);
    const Matrix Eh = (spec.A * h).exp();
    Matrix Ek = Matrix::Identity(spec.p, spec.p);
    const Vector Sc = S * spec.c;
    for (int k = 0; k <= r; ++k) {
        table.values[static_cast<std::size_t>(k)] = spec.c.dot(Ek * Sc);
        Ek = (Eh * Ek).eval();
    }
    return table;
}

}  // namespace carma
