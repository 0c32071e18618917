#include "calab/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

#include "calab/error.hpp"

namespace calab {

double SystemParams::omega_max() const {
    double out = big_omega;
    for (double w : omegas) out = std::max(out, w);
    return out;
}

double SystemParams::omega_min() const {
    double out = big_omega;
    for (double w : omegas) out = std::min(out, w);
    return out;
}

void validate(const SystemParams& params, bool allow_no_peripherals) {
    if (!(params.big_omega > 0.0) || !std::isfinite(params.big_omega)) {
        throw InvalidInput("central frequency must be positive and finite");
    }
    if (!(params.xi_sq >= 0.0) || !std::isfinite(params.xi_sq)) {
        throw InvalidInput("coupling xi_sq must be non-negative and finite");
    }
    if (params.omegas.empty() && !allow_no_peripherals) {
        throw InvalidInput("at least one peripheral oscillator is required");
    }
    for (std::size_t j = 0; j < params.omegas.size(); ++j) {
        const double w = params.omegas[j];
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw InvalidInput("peripheral frequency " + std::to_string(j + 1) + " must be positive and finite");
        }
    }
}

std::string_view to_string(EigenMethod method) {
    return method == EigenMethod::perturbative ? "perturbative" : "exact";
}

CouplingMatrix build_coupling_matrix(const SystemParams& params) {
    validate(params);
    const auto n = static_cast<Eigen::Index>(params.n());
    const double xi = params.xi_sq;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n + 1, n + 1);
    c(0, 0) = params.big_omega * params.big_omega + static_cast<double>(n) * xi;
    for (Eigen::Index j = 1; j <= n; ++j) {
        const double w = params.omegas[static_cast<std::size_t>(j - 1)];
        c(0, j) = -xi;
        c(j, 0) = -xi;
        c(j, j) = w * w + xi;
    }
    return {std::move(c)};
}

RegimeReport validate_regime(const SystemParams& params, const RegimeThresholds& thresholds) {
    RegimeReport report;
    const double omega_sq = params.big_omega * params.big_omega;
    const double min_freq = params.omega_min();
    report.weak_coupling_ratio = params.xi_sq / (min_freq * min_freq);
    report.extensive_ratio = static_cast<double>(params.n()) * params.xi_sq / omega_sq;

    double gap = std::numeric_limits<double>::infinity();
    for (double w : params.omegas) gap = std::min(gap, std::abs(w * w - omega_sq));
    report.off_resonance_gap = gap;
    report.gap_ratio = params.xi_sq > 0.0 ? gap / params.xi_sq : std::numeric_limits<double>::infinity();

    report.weak_coupling_ok = report.weak_coupling_ratio <= thresholds.weak_coupling;
    report.extensive_ok = report.extensive_ratio <= thresholds.extensive;
    report.off_resonance_ok = gap >= thresholds.gap_factor * params.xi_sq && gap > 0.0;
    return report;
}

EigenDecomposition perturbative_eigendecomposition(const SystemParams& params,
                                                   const RegimeThresholds& thresholds) {
    validate(params);
    const auto n = static_cast<Eigen::Index>(params.n());
    const double omega_sq = params.big_omega * params.big_omega;
    const double xi = params.xi_sq;

    EigenDecomposition eig;
    eig.method = EigenMethod::perturbative;
    eig.lambdas.resize(n + 1);
    eig.mode_matrix = Eigen::MatrixXd::Identity(n + 1, n + 1);
    eig.lambdas(0) = omega_sq + static_cast<double>(n) * xi;

    for (Eigen::Index j = 1; j <= n; ++j) {
        const double w = params.omegas[static_cast<std::size_t>(j - 1)];
        const double detuning = w * w - omega_sq;
        if (std::abs(detuning) < thresholds.gap_factor * xi || (detuning == 0.0 && xi > 0.0)) {
            throw DegenerateSpectrum("peripheral oscillator " + std::to_string(j) +
                                     " is within the resonance gap: |omega_j^2 - Omega^2| = " +
                                     std::to_string(std::abs(detuning)));
        }
        eig.lambdas(j) = w * w + xi;
        const double mixing = xi == 0.0 ? 0.0 : xi / detuning;
        eig.mode_matrix(j, 0) = mixing;
        eig.mode_matrix(0, j) = -mixing;
    }
    return eig;
}

EigenDecomposition exact_eigendecomposition(const CouplingMatrix& matrix) {
    const Eigen::Index dim = matrix.entries.rows();
    if (dim == 0 || matrix.entries.cols() != dim) throw InvalidInput("coupling matrix must be square and non-empty");
    if ((matrix.entries - matrix.entries.transpose()).cwiseAbs().maxCoeff() != 0.0) {
        throw InvalidInput("coupling matrix must be symmetric");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix.entries);
    if (solver.info() != Eigen::Success) {
        throw ConvergenceFailure("symmetric eigensolver did not converge");
    }
    const Eigen::MatrixXd& vectors = solver.eigenvectors();
    const Eigen::VectorXd& values = solver.eigenvalues();

    // Greedy global matching: take (coordinate, eigenvector) pairs in order of
    // decreasing overlap, each side used once.
    std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> overlaps;
    overlaps.reserve(static_cast<std::size_t>(dim * dim));
    for (Eigen::Index col = 0; col < dim; ++col) {
        for (Eigen::Index row = 0; row < dim; ++row) {
            overlaps.emplace_back(std::abs(vectors(row, col)), row, col);
        }
    }
    std::stable_sort(overlaps.begin(), overlaps.end(),
                     [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });

    std::vector<Eigen::Index> column_for_mode(static_cast<std::size_t>(dim), -1);
    std::vector<bool> column_used(static_cast<std::size_t>(dim), false);
    Eigen::Index assigned = 0;
    for (const auto& [overlap, row, col] : overlaps) {
        auto& slot = column_for_mode[static_cast<std::size_t>(row)];
        if (slot >= 0 || column_used[static_cast<std::size_t>(col)]) continue;
        slot = col;
        column_used[static_cast<std::size_t>(col)] = true;
        if (++assigned == dim) break;
    }

    EigenDecomposition eig;
    eig.method = EigenMethod::exact;
    eig.lambdas.resize(dim);
    eig.mode_matrix.resize(dim, dim);
    for (Eigen::Index mode = 0; mode < dim; ++mode) {
        const Eigen::Index col = column_for_mode[static_cast<std::size_t>(mode)];
        const double sign = vectors(mode, col) < 0.0 ? -1.0 : 1.0;
        eig.lambdas(mode) = values(col);
        eig.mode_matrix.col(mode) = sign * vectors.col(col);
    }
    return eig;
}

double reconstruction_residual(const CouplingMatrix& matrix, const EigenDecomposition& eig) {
    const Eigen::MatrixXd rebuilt = eig.mode_matrix * eig.lambdas.asDiagonal() * eig.mode_matrix.transpose();
    return (matrix.entries - rebuilt).cwiseAbs().maxCoeff();
}

double orthogonality_residual(const EigenDecomposition& eig) {
    const auto dim = eig.mode_matrix.cols();
    return (eig.mode_matrix.transpose() * eig.mode_matrix - Eigen::MatrixXd::Identity(dim, dim))
        .cwiseAbs()
        .maxCoeff();
}

bool is_positive_definite(const CouplingMatrix& matrix) {
    Eigen::LLT<Eigen::MatrixXd> llt(matrix.entries);
    return llt.info() == Eigen::Success;
}

}  // namespace calab
