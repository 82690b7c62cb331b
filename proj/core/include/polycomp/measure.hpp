#pragma once

#include "polycomp/contact.hpp"
#include "polycomp/poly.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polycomp {

// Counter-based generator: the k-th draw of a stream depends only on (seed, stream, k).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter = 0);
    std::uint64_t next_u64();
    // uniform on [0, 1)
    double uniform();
    void seek(std::uint64_t counter) { ctr_ = counter; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

std::uint64_t mix64(std::uint64_t x);

int default_threads();
// 2^-3, ..., 2^-12
std::vector<double> default_deltas();

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t n = 0;
};

// Equal cubes in the angles of the support axes of phi_I whose union contains the
// torus window. Cubes are discarded only when a Taylor bound proves them disjoint from it.
struct TorusCover {
    std::vector<int> axes;
    std::vector<std::vector<double>> centers;
    double half_width = 0.0;
    int level = 0;
    // lambda_d of the union, including the free axes
    double volume = 0.0;
};

TorusCover torus_cover(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta,
                       const DeltaVector& delta, std::size_t max_boxes = 1 << 14);

// lambda_d of {theta in [-pi,pi)^d : |phi_j(theta) - eta_j| < delta_j, j in I}, unnormalized.
// With localize the samples are drawn from torus_cover instead of the whole torus.
Estimate torus_measure(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta,
                       const DeltaVector& delta, std::uint64_t n_samples, std::uint64_t seed, int threads = 0,
                       std::uint64_t stream = 0, bool localize = true);

// V_beta (total mass 1) of the preimage of the Carleson box. With importance
// sampling the radii are drawn from a heavier boundary weight and reweighted.
Estimate bergman_mass(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta,
                      const DeltaVector& delta, double beta, std::uint64_t n_samples, std::uint64_t seed,
                      int threads = 0, std::uint64_t stream = 0, bool importance = true);

// radius of a point drawn from (beta+1)(1-r^2)^beta 2r dr given u in [0,1)
double bergman_radius(double u, double beta);
// V_beta of the annulus {1 - delta < |z| < 1} in one variable
double bergman_annulus_mass(double delta, double beta);
Estimate bergman_annulus_estimate(double delta, double beta, std::uint64_t n_samples, std::uint64_t seed,
                                  int threads = 0);

// lambda_2 of {(x,y) in [-M/2,M/2]^2 : |x^2 - y^2 - a| < delta}
Estimate hyperbola_measure(double a, double delta, double M, std::uint64_t n_samples, std::uint64_t seed,
                           int threads = 0);
double hyperbola_measure_exact(double a, double delta, double M);

struct SeriesPoint {
    double delta = 0.0;
    Estimate est;
    std::uint64_t stream = 0;
    bool used = false;
    std::string dropped;
};

struct Fit {
    double a = 0.0;
    double b = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double a_stderr = 0.0;
    bool log_term = false;
    int points = 0;
};

struct MeasureSeries {
    std::string kind;  // "torus" or "bergman"
    std::vector<int> I;
    std::vector<cplx> eta;
    double beta = -1.0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::vector<SeriesPoint> points;
    std::optional<Fit> fit;
};

// Equal-delta torus windows delta_bar = (delta, ..., delta); stream k for the k-th delta.
MeasureSeries torus_series(const Symbol& phi, const std::vector<int>& I, const std::vector<cplx>& eta,
                           const std::vector<double>& deltas, std::uint64_t n_samples, std::uint64_t seed,
                           int threads = 0, bool localize = true);

// Least squares of log(value) = c + a log(delta) [+ b log log(1/delta)].
Fit fit_exponent(const std::vector<double>& deltas, const std::vector<double>& values, bool log_term = false);
// Drops points with fewer than min_hits hits or estimate <= 3 stderr; needs at least 4 left.
Fit fit_exponent(MeasureSeries& series, bool log_term = false, std::uint64_t min_hits = 100);

struct VerifyResult {
    double fitted_a = 0.0;
    double a_min = 0.0;
    double slack = 0.05;
    bool consistent = false;
    double beta1 = 0.0;
    double beta2 = 0.0;
    int I_size = 0;
    int P_I_size = 0;
    MeasureSeries series;
};

double required_exponent(const ContactRecord& rec, double beta1, double beta2);

VerifyResult verify_scaling(const Symbol& phi, const ContactRecord& rec, double beta1, double beta2,
                            const std::vector<double>& deltas, std::uint64_t n_samples, std::uint64_t seed,
                            int threads = 0, double slack = 0.05);
// Reuses an already fitted torus series for the window of rec.
VerifyResult verify_scaling(const MeasureSeries& series, const ContactRecord& rec, double beta1, double beta2,
                            double slack = 0.05);

struct ScanRow {
    double delta = 0.0;
    std::vector<cplx> eta;
    Estimate mass;
    double box = 0.0;
    double ratio = 0.0;
};

struct ScanReport {
    double beta1 = 0.0;
    double beta2 = 0.0;
    std::vector<int> I;
    std::vector<ScanRow> rows;
    std::vector<double> deltas;
    std::vector<double> worst;
    double trend_exponent = 0.0;
    std::string trend;  // "bounded" or "divergent"
    int trend_points = 0;
};

// 2^-2, ..., 2^-5
std::vector<double> default_scan_deltas();

// sup over the grid of V_beta2(preimage) / prod delta^(2+beta1), with the trend
// fitted as worst ratio ~ delta^e on rows with at least min_hits hits.
ScanReport carleson_scan(const Symbol& phi, double beta1, double beta2, const std::vector<std::vector<cplx>>& eta_grid,
                         const std::vector<double>& deltas, std::uint64_t n_samples, std::uint64_t seed,
                         int threads = 0, std::vector<int> I = {}, std::uint64_t min_hits = 100);

} // namespace polycomp
