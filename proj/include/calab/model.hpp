#pragma once

// Central oscillator (index 0, frequency big_omega) harmonically coupled with
// strength xi_sq to N peripheral oscillators. All masses are 1.

#include <Eigen/Dense>
#include <cstddef>
#include <string_view>
#include <vector>

namespace calab {

struct SystemParams {
    double big_omega = 1.0;
    std::vector<double> omegas;
    double xi_sq = 0.0;

    std::size_t n() const { return omegas.size(); }
    std::size_t dimension() const { return omegas.size() + 1; }
    double omega_max() const;
    double omega_min() const;
};

/// Throws InvalidInput on non-positive frequencies, negative or non-finite
/// coupling, or an empty peripheral set (unless allow_no_peripherals).
void validate(const SystemParams& params, bool allow_no_peripherals = false);

struct CouplingMatrix {
    Eigen::MatrixXd entries;

    std::size_t dimension() const { return static_cast<std::size_t>(entries.rows()); }
};

enum class EigenMethod { perturbative, exact };
std::string_view to_string(EigenMethod method);

/// Column k of mode_matrix is eigenmode k with squared frequency lambdas[k];
/// index 0 is the (perturbed) central mode, index j the mode of oscillator j.
struct EigenDecomposition {
    Eigen::VectorXd lambdas;
    Eigen::MatrixXd mode_matrix;
    EigenMethod method = EigenMethod::exact;
};

struct RegimeThresholds {
    double weak_coupling = 1e-2;  ///< xi^2 / min(omega^2) upper limit
    double extensive = 1e-1;      ///< N xi^2 / Omega^2 upper limit
    double gap_factor = 100.0;    ///< |omega_j^2 - Omega^2| >= gap_factor * xi^2
};

struct RegimeReport {
    bool weak_coupling_ok = true;
    bool extensive_ok = true;
    bool off_resonance_ok = true;
    double off_resonance_gap = 0.0;  ///< min_j |omega_j^2 - Omega^2|
    double weak_coupling_ratio = 0.0;
    double extensive_ratio = 0.0;
    double gap_ratio = 0.0;  ///< off_resonance_gap / xi^2 (infinite when xi^2 == 0)

    bool ok() const { return weak_coupling_ok && extensive_ok && off_resonance_ok; }
};

CouplingMatrix build_coupling_matrix(const SystemParams& params);

/// First-order perturbation theory in xi^2: lambda_0 = Omega^2 + N xi^2,
/// lambda_l = omega_l^2 + xi^2, and the mode matrix with unit diagonal and
/// first row/column entries -/+ xi^2 / (omega_j^2 - Omega^2).
/// Throws DegenerateSpectrum when some |omega_j^2 - Omega^2| < gap_factor * xi^2.
EigenDecomposition perturbative_eigendecomposition(const SystemParams& params,
                                                   const RegimeThresholds& thresholds = {});

/// Full-precision symmetric eigendecomposition of C. Eigenpairs are matched to
/// unperturbed coordinates by maximal overlap and signed so U(k,k) > 0.
/// Throws ConvergenceFailure if the eigensolver does not converge.
EigenDecomposition exact_eigendecomposition(const CouplingMatrix& matrix);

RegimeReport validate_regime(const SystemParams& params, const RegimeThresholds& thresholds = {});

/// max |C - U diag(lambda) U^T|
double reconstruction_residual(const CouplingMatrix& matrix, const EigenDecomposition& eig);

/// max |U^T U - I|
double orthogonality_residual(const EigenDecomposition& eig);

/// True when C admits a Cholesky factorization.
bool is_positive_definite(const CouplingMatrix& matrix);

}  // namespace calab
