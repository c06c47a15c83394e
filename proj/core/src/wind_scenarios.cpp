#include "windatc/wind_scenarios.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace windatc::wind {

namespace {

constexpr double kPsdTol = 1e-10;
constexpr double kSymTol = 1e-12;

/// Deterministic standard-normal sampler. Box-Muller on top of mt19937_64 so
/// the stream does not depend on the standard library's distribution
/// implementation.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    // 53-bit uniform in [0, 1)
    double uniform01() { return (rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace

ForecastMatrix::ForecastMatrix(Eigen::MatrixXd v) : values(std::move(v)) {
    if (values.rows() < 1 || values.cols() < 1)
        throw std::invalid_argument("ForecastMatrix: empty matrix");
    if (!values.allFinite() || (values.array() < 0.0).any())
        throw std::invalid_argument("ForecastMatrix: entries must be finite and nonnegative");
}

SpatialCorrelation::SpatialCorrelation(Eigen::MatrixXd m) : matrix_(std::move(m)) {
    const auto n = matrix_.rows();
    if (n < 1 || matrix_.cols() != n)
        throw std::invalid_argument("SpatialCorrelation: matrix must be square");
    if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > kSymTol)
        throw std::invalid_argument("SpatialCorrelation: matrix must be symmetric");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(matrix_(i, i) - 1.0) > kSymTol)
            throw std::invalid_argument("SpatialCorrelation: diagonal must be 1");
    }
    if ((matrix_.array().abs() > 1.0 + kSymTol).any())
        throw std::invalid_argument("SpatialCorrelation: entries must lie in [-1, 1]");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix_, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kPsdTol) {
        std::ostringstream msg;
        msg << "SpatialCorrelation: matrix is not positive semidefinite (eigenvalue "
            << min_eig << ")";
        throw NotPsdError(msg.str(), min_eig);
    }
}

SpatialCorrelation build_spatial_correlation(double rho, int n_farms) {
    if (rho < 0.0 || rho > 1.0)
        throw std::invalid_argument("build_spatial_correlation: rho must be in [0, 1]");
    if (n_farms < 1)
        throw std::invalid_argument("build_spatial_correlation: need at least one farm");
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n_farms, n_farms, rho);
    m.diagonal().setOnes();
    return SpatialCorrelation(std::move(m));
}

TemporalProfile::TemporalProfile(Eigen::VectorXd ac, Eigen::VectorXd sd)
    : autocorr(std::move(ac)), stddev(std::move(sd)) {
    if (autocorr.size() < 1 || autocorr.size() != stddev.size())
        throw std::invalid_argument("TemporalProfile: autocorr/stddev size mismatch");
    if (std::abs(autocorr(0) - 1.0) > kSymTol)
        throw std::invalid_argument("TemporalProfile: lag-0 autocorrelation must be 1");
    if ((autocorr.array().abs() > 1.0 + kSymTol).any())
        throw std::invalid_argument("TemporalProfile: |autocorr| must be <= 1");
    if ((stddev.array() < 0.0).any())
        throw std::invalid_argument("TemporalProfile: stddev must be nonnegative");
}

TemporalCovariance build_temporal_covariance(const TemporalProfile& profile) {
    const int n = profile.n_hours();
    TemporalCovariance cov;
    cov.toeplitz_corr.resize(n, n);
    for (int p = 0; p < n; ++p)
        for (int f = 0; f < n; ++f)
            cov.toeplitz_corr(p, f) = profile.autocorr(std::abs(p - f));
    cov.variance_diag = profile.stddev;
    cov.covariance = profile.stddev.asDiagonal() * cov.toeplitz_corr *
                     profile.stddev.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov.covariance, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -kPsdTol) {
        std::ostringstream msg;
        msg << "build_temporal_covariance: autocorrelation vector yields a non-PSD "
               "covariance (eigenvalue " << min_eig << ")";
        throw NotPsdError(msg.str(), min_eig);
    }
    return cov;
}

SymmetricFactor factor_symmetric(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("factor_symmetric: matrix must be square");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymTol)
        throw std::invalid_argument("factor_symmetric: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd vals = es.eigenvalues();
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < -kPsdTol) {
            std::ostringstream msg;
            msg << "factor_symmetric: matrix is not positive semidefinite (eigenvalue "
                << vals(i) << ")";
            throw NotPsdError(msg.str(), vals(i));
        }
        if (vals(i) < 0.0) vals(i) = 0.0;
    }
    return SymmetricFactor{es.eigenvectors(), std::move(vals)};
}

ErrorMatrix sample_raw_errors(const ScenarioDims& dims, std::uint64_t seed) {
    NormalSampler sampler(seed);
    Eigen::MatrixXd m(dims.n_farms, dims.n_hours);
    for (int w = 0; w < dims.n_farms; ++w)
        for (int h = 0; h < dims.n_hours; ++h)
            m(w, h) = sampler.next();
    return ErrorMatrix{std::move(m), ErrorStage::Raw};
}

ErrorMatrix apply_spatial(const SymmetricFactor& factor, const ErrorMatrix& raw) {
    if (raw.stage != ErrorStage::Raw)
        throw std::invalid_argument("apply_spatial: input must be a raw error matrix");
    if (factor.unitary.rows() != raw.values.rows())
        throw std::invalid_argument("apply_spatial: factor/raw dimension mismatch");
    return ErrorMatrix{factor.half() * raw.values, ErrorStage::Spatial};
}

Eigen::VectorXd apply_temporal(const SymmetricFactor& factor, const Eigen::VectorXd& spatial_row) {
    if (factor.unitary.rows() != spatial_row.size())
        throw std::invalid_argument("apply_temporal: factor/row dimension mismatch");
    return factor.half() * spatial_row;
}

WindScenarioSet generate_scenarios(const ForecastMatrix& forecast,
                                   const SpatialCorrelation& spatial,
                                   const std::vector<TemporalProfile>& profiles,
                                   std::uint64_t seed) {
    const ScenarioDims dims = forecast.dims();
    if (spatial.n_farms() != dims.n_farms)
        throw std::invalid_argument("generate_scenarios: spatial correlation size mismatch");
    if (static_cast<int>(profiles.size()) != dims.n_farms)
        throw std::invalid_argument("generate_scenarios: need one temporal profile per farm");
    for (const auto& p : profiles)
        if (p.n_hours() != dims.n_hours)
            throw std::invalid_argument("generate_scenarios: profile hour count mismatch");

    ErrorMatrix raw = sample_raw_errors(dims, seed);
    ErrorMatrix spat = apply_spatial(factor_symmetric(spatial.matrix()), raw);

    Eigen::MatrixXd st(dims.n_farms, dims.n_hours);
    for (int w = 0; w < dims.n_farms; ++w) {
        SymmetricFactor tf = factor_symmetric(build_temporal_covariance(profiles[w]).covariance);
        st.row(w) = apply_temporal(tf, spat.values.row(w).transpose()).transpose();
    }

    WindScenarioSet set{dims, forecast, ErrorMatrix{st, ErrorStage::Spatiotemporal},
                        (forecast.values + st).cwiseMax(0.0), seed};
    return set;
}

void write_scenarios_csv(const WindScenarioSet& set, std::ostream& out) {
    out << "farm,hour,forecast,error,speed\n";
    char buf[128];
    for (int w = 0; w < set.dims.n_farms; ++w) {
        for (int h = 0; h < set.dims.n_hours; ++h) {
            std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f,%.6f\n", w + 1, h + 1,
                          set.forecast.values(w, h), set.errors.values(w, h),
                          set.speeds(w, h));
            out << buf;
        }
    }
}

ForecastMatrix read_forecast_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_forecast_csv: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("read_forecast_csv: ragged rows in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("read_forecast_csv: no data in " + path);
    Eigen::MatrixXd m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return ForecastMatrix(std::move(m));
}

std::vector<TemporalProfile> read_profiles_csv(const std::string& path, int n_farms) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_profiles_csv: cannot open " + path);
    // farm -> (lag -> value)
    std::vector<std::vector<double>> ac(n_farms), sd(n_farms);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("farm,", 0) == 0) continue;  // header
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> fields;
        while (std::getline(ss, cell, ',')) fields.push_back(std::stod(cell));
        if (fields.size() != 4)
            throw std::runtime_error("read_profiles_csv: expected farm,hour,autocorr,stddev at " +
                                     path + ":" + std::to_string(lineno));
        int farm = static_cast<int>(fields[0]) - 1;
        if (farm < 0 || farm >= n_farms)
            throw std::runtime_error("read_profiles_csv: farm index out of range at " + path +
                                     ":" + std::to_string(lineno));
        ac[farm].push_back(fields[2]);
        sd[farm].push_back(fields[3]);
    }
    std::vector<TemporalProfile> profiles;
    profiles.reserve(n_farms);
    for (int w = 0; w < n_farms; ++w) {
        if (ac[w].empty())
            throw std::runtime_error("read_profiles_csv: no rows for farm " + std::to_string(w + 1));
        profiles.emplace_back(
            Eigen::Map<Eigen::VectorXd>(ac[w].data(), static_cast<Eigen::Index>(ac[w].size())),
            Eigen::Map<Eigen::VectorXd>(sd[w].data(), static_cast<Eigen::Index>(sd[w].size())));
    }
    return profiles;
}

}  // namespace windatc::wind
