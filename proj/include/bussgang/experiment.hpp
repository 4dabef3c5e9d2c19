#ifndef BUSSGANG_EXPERIMENT_HPP
#define BUSSGANG_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bussgang/types.hpp"

namespace bussgang::experiment {

// Quantized-MIMO distortion-correlation study: i.i.d. Rayleigh H, x = H s with
// s ~ CN(0, I), per-component b-bit ADCs, CDF of |rho_ij| over realizations.
struct ExperimentConfig {
    int m_rx = 4;
    int m_tx = 4;
    std::vector<int> bits_list = {1, 2, 3, 4, 5, 6};
    int realizations = 200;
    size_t samples_per_realization = 100000;
    uint64_t seed = 42;
    // quantizer step policy: fixed_step > 0 uses that step for every antenna,
    // otherwise the range covers +-4 per-component standard deviations
    // (wide enough that clipping error stays negligible next to granular
    // noise through 6-bit resolution)
    double fixed_step = 0.0;

    void validate() const;
};

struct CdfSummary {
    double median = 0.0;
    double p90 = 0.0;
    double max = 0.0;
};

struct CdfSeries {
    int bits = 0;
    std::vector<double> sorted_values;  // ascending |rho_ij|
    CdfSummary summary;
};

std::vector<CdfSeries> run_fig3(const ExperimentConfig& cfg);

// CSV `bits,abs_rho,cdf` with cdf = rank/count, one block per bit depth
void emit_cdf_csv(const std::vector<CdfSeries>& series, const std::string& path);
std::string cdf_csv_string(const std::vector<CdfSeries>& series);

// per-bit summary plus the full config, for provenance
std::string summary_json_string(const std::vector<CdfSeries>& series, const ExperimentConfig& cfg);
void emit_summary_json(const std::vector<CdfSeries>& series, const ExperimentConfig& cfg,
                       const std::string& path);

// worker cap from BUSSGANG_THREADS (output-invariant); defaults to hardware
int worker_count();

}  // namespace bussgang::experiment

#endif
