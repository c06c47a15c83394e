#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace windatc::wind {

/// Thrown when a matrix that must be positive semidefinite is not.
/// Carries the offending eigenvalue in the message.
class NotPsdError : public std::runtime_error {
public:
    NotPsdError(const std::string& what, double eigenvalue)
        : std::runtime_error(what), eigenvalue_(eigenvalue) {}
    double eigenvalue() const { return eigenvalue_; }

private:
    double eigenvalue_;
};

struct ScenarioDims {
    int n_farms = 0;
    int n_hours = 0;

    ScenarioDims(int farms, int hours) : n_farms(farms), n_hours(hours) {
        if (farms < 1 || hours < 1)
            throw std::invalid_argument("ScenarioDims: need at least one farm and one hour");
    }
};

/// Predicted wind speeds, rows = farms, columns = hours, m/s.
struct ForecastMatrix {
    Eigen::MatrixXd values;

    explicit ForecastMatrix(Eigen::MatrixXd v);
    ScenarioDims dims() const {
        return ScenarioDims(static_cast<int>(values.rows()), static_cast<int>(values.cols()));
    }
};

/// Inter-farm correlation of wind speed prediction errors.
/// Symmetric, unit diagonal, entries in [-1,1], PSD (checked at construction).
class SpatialCorrelation {
public:
    explicit SpatialCorrelation(Eigen::MatrixXd m);
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    int n_farms() const { return static_cast<int>(matrix_.rows()); }

private:
    Eigen::MatrixXd matrix_;
};

/// Equicorrelation matrix: unit diagonal, all off-diagonals equal to rho.
SpatialCorrelation build_spatial_correlation(double rho, int n_farms);

/// Per-farm temporal error statistics: autocorrelation by lag (autocorr[0]
/// is lag 0 and must be 1) and per-hour standard deviation in m/s.
struct TemporalProfile {
    Eigen::VectorXd autocorr;
    Eigen::VectorXd stddev;

    TemporalProfile(Eigen::VectorXd ac, Eigen::VectorXd sd);
    int n_hours() const { return static_cast<int>(autocorr.size()); }
};

/// Toeplitz correlation matrix, variance diagonal and their product K = V*R*V.
struct TemporalCovariance {
    Eigen::MatrixXd toeplitz_corr;
    Eigen::VectorXd variance_diag;  // diagonal of V, i.e. the stddev vector
    Eigen::MatrixXd covariance;
};

TemporalCovariance build_temporal_covariance(const TemporalProfile& profile);

/// Symmetric eigendecomposition M = U * Sigma * U^T with Sigma >= 0.
struct SymmetricFactor {
    Eigen::MatrixXd unitary;
    Eigen::VectorXd singular_values;

    /// U * Sigma^{1/2}, the "coloring" transform.
    Eigen::MatrixXd half() const {
        return unitary * singular_values.cwiseSqrt().asDiagonal();
    }
};

/// Factor a symmetric PSD matrix. Eigenvalues in [-1e-10, 0) are clamped to
/// zero; anything below that raises NotPsdError.
SymmetricFactor factor_symmetric(const Eigen::MatrixXd& m);

enum class ErrorStage { Raw, Spatial, Spatiotemporal };

struct ErrorMatrix {
    Eigen::MatrixXd values;  // farms x hours, m/s
    ErrorStage stage = ErrorStage::Raw;
};

/// i.i.d. standard normal draws, farms x hours. Same seed, same matrix.
ErrorMatrix sample_raw_errors(const ScenarioDims& dims, std::uint64_t seed);

/// Color each hour-column with the spatial factor: W_S = U*Sigma^{1/2}*W.
ErrorMatrix apply_spatial(const SymmetricFactor& factor, const ErrorMatrix& raw);

/// Color one farm's row with the temporal factor: row_out = row * (U*Sigma^{1/2})^T.
Eigen::VectorXd apply_temporal(const SymmetricFactor& factor, const Eigen::VectorXd& spatial_row);

struct WindScenarioSet {
    ScenarioDims dims;
    ForecastMatrix forecast;
    ErrorMatrix errors;      // stage Spatiotemporal
    Eigen::MatrixXd speeds;  // max(0, forecast + errors)
    std::uint64_t rng_seed = 0;
};

/// Full pipeline: raw Gaussian errors -> spatial coloring -> per-farm
/// temporal coloring -> superposition with the forecast, clamped at zero.
WindScenarioSet generate_scenarios(const ForecastMatrix& forecast,
                                   const SpatialCorrelation& spatial,
                                   const std::vector<TemporalProfile>& profiles,
                                   std::uint64_t seed);

/// CSV with header farm,hour,forecast,error,speed.
void write_scenarios_csv(const WindScenarioSet& set, std::ostream& out);

/// Forecast matrix from CSV: one row per farm, comma-separated speeds.
ForecastMatrix read_forecast_csv(const std::string& path);

/// Per-farm profiles from CSV rows farm,hour,autocorr,stddev (farm from 1).
std::vector<TemporalProfile> read_profiles_csv(const std::string& path, int n_farms);

}  // namespace windatc::wind
