#include "bussgang/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "bussgang/linalg.hpp"
#include "bussgang/rng.hpp"

#include "json.hpp"

namespace bussgang::experiment {

using linalg::ComplexMatrix;

void ExperimentConfig::validate() const {
    if (m_rx < 1 || m_tx < 1) fail(errc::config_error, "fig3: antenna counts must be >= 1");
    if (m_rx > 64) fail(errc::config_error, "fig3: M_rx must be <= 64");
    if (realizations < 1) fail(errc::config_error, "fig3: realizations must be >= 1");
    if (samples_per_realization < 1000) fail(errc::config_error, "fig3: samples must be >= 1000");
    if (bits_list.empty()) fail(errc::config_error, "fig3: bits list must be nonempty");
    for (int b : bits_list)
        if (b < 0 || b > 12) fail(errc::config_error, "fig3: bits must be in 1..12 (0 = none)");
}

int worker_count() {
    if (const char* env = std::getenv("BUSSGANG_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return std::min(v, 64);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

namespace {

inline double quantize(double u, double step, double kmin, double kmax) {
    double k = std::floor(u / step);
    if (k < kmin) k = kmin;
    if (k > kmax) k = kmax;
    return (k + 0.5) * step;
}

// |rho_ij| values per bit depth for one channel realization
std::vector<std::vector<double>> run_realization(const ExperimentConfig& cfg, RandomStream base) {
    const int m = cfg.m_rx;
    const int mt = cfg.m_tx;
    const int nb = static_cast<int>(cfg.bits_list.size());
    const size_t n = cfg.samples_per_realization;

    RandomStream hstream = base.substream(0);
    RandomStream xstream = base.substream(1);

    ComplexMatrix h(m, mt);
    const double s = std::sqrt(0.5);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < mt; ++c) {
            double a, b;
            hstream.next_normal_pair(a, b);
            h(r, c) = cplx(s * a, s * b);
        }
    const ComplexMatrix c_x = linalg::multiply(h, h.adjoint());

    // per-bit, per-antenna step and clamp range
    std::vector<double> step(static_cast<size_t>(nb) * m), kmin(nb), kmax(nb);
    bool any_quantized = false;
    for (int bi = 0; bi < nb; ++bi) {
        const int bits = cfg.bits_list[bi];
        if (bits == 0) continue;  // no quantization: C_eta is zero, series stays empty
        any_quantized = true;
        const int half = 1 << (bits - 1);
        kmin[bi] = -half;
        kmax[bi] = half - 1.0;
        for (int a = 0; a < m; ++a) {
            const double sigma_comp = std::sqrt(c_x(a, a).real() / 2.0);
            step[static_cast<size_t>(bi) * m + a] =
                cfg.fixed_step > 0.0 ? cfg.fixed_step
                                     : 8.0 * sigma_comp / static_cast<double>(1 << bits);
        }
    }

    std::vector<std::vector<double>> out(nb);
    if (!any_quantized && nb > 0) return out;

    // fused sample loop: one Gaussian draw feeds every bit depth
    std::vector<cplx> w(mt), x(m), z(m);
    std::vector<cplx> sum_zx(static_cast<size_t>(nb) * m * m);
    std::vector<cplx> sum_zz(static_cast<size_t>(nb) * m * m);  // upper triangle only
    std::vector<cplx> sum_xx(static_cast<size_t>(m) * m);       // upper triangle only
    for (size_t i = 0; i < n; ++i) {
        for (int t = 0; t < mt; ++t) {
            double a, b;
            xstream.next_normal_pair(a, b);
            w[t] = cplx(s * a, s * b);
        }
        for (int r = 0; r < m; ++r) {
            cplx acc = 0.0;
            for (int t = 0; t < mt; ++t) acc += h(r, t) * w[t];
            x[r] = acc;
        }
        for (int r = 0; r < m; ++r)
            for (int c = r; c < m; ++c) sum_xx[r * m + c] += x[r] * std::conj(x[c]);
        for (int bi = 0; bi < nb; ++bi) {
            if (cfg.bits_list[bi] == 0) continue;
            const double* st = step.data() + static_cast<size_t>(bi) * m;
            for (int r = 0; r < m; ++r)
                z[r] = cplx(quantize(x[r].real(), st[r], kmin[bi], kmax[bi]),
                            quantize(x[r].imag(), st[r], kmin[bi], kmax[bi]));
            cplx* szx = sum_zx.data() + static_cast<size_t>(bi) * m * m;
            cplx* szz = sum_zz.data() + static_cast<size_t>(bi) * m * m;
            for (int r = 0; r < m; ++r) {
                for (int c = 0; c < m; ++c) szx[r * m + c] += z[r] * std::conj(x[c]);
                for (int c = r; c < m; ++c) szz[r * m + c] += z[r] * std::conj(z[c]);
            }
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    ComplexMatrix c_x_hat(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            c_x_hat(r, c) = ((r <= c) ? sum_xx[r * m + c] : std::conj(sum_xx[c * m + r])) * inv_n;
    // least-squares gain (sample C_x): the residual z - Bx is then exactly
    // orthogonal to x in-sample, so no input leakage inflates C_eta
    const ComplexMatrix c_x_inv = linalg::pseudo_inverse(c_x_hat);
    for (int bi = 0; bi < nb; ++bi) {
        if (cfg.bits_list[bi] == 0) continue;
        ComplexMatrix c_zx(m, m), c_z(m, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                c_zx(r, c) = sum_zx[static_cast<size_t>(bi) * m * m + r * m + c] * inv_n;
                const cplx v = (r <= c) ? sum_zz[static_cast<size_t>(bi) * m * m + r * m + c]
                                        : std::conj(sum_zz[static_cast<size_t>(bi) * m * m + c * m + r]);
                c_z(r, c) = v * inv_n;
            }
        const ComplexMatrix b = linalg::multiply(c_zx, c_x_inv);
        // residual correlation of eta = z - Bx: noise scales with the
        // distortion power, so fine quantizers keep usable diagonals
        const ComplexMatrix bxz = linalg::multiply(b, c_zx.adjoint());
        ComplexMatrix c_eta = linalg::subtract(c_z, linalg::add(bxz, bxz.adjoint()));
        c_eta = linalg::symmetrize(
            linalg::add(c_eta, linalg::multiply(linalg::multiply(b, c_x_hat), b.adjoint())));
        const double diag_floor = 1e-12 * std::abs(c_eta.trace());
        for (int i2 = 0; i2 < m; ++i2)
            for (int j2 = i2 + 1; j2 < m; ++j2) {
                const double di = c_eta(i2, i2).real();
                const double dj = c_eta(j2, j2).real();
                if (di < diag_floor || dj < diag_floor) continue;  // degenerate pair, skip
                out[bi].push_back(std::abs(c_eta(i2, j2)) / std::sqrt(di * dj));
            }
    }
    return out;
}

CdfSummary summarize(const std::vector<double>& sorted) {
    CdfSummary s;
    if (sorted.empty()) return s;
    const size_t k = sorted.size();
    s.median = (k % 2 == 1) ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
    s.p90 = sorted[static_cast<size_t>(std::llround(0.9 * static_cast<double>(k - 1)))];
    s.max = sorted.back();
    return s;
}

}  // namespace

std::vector<CdfSeries> run_fig3(const ExperimentConfig& cfg) {
    cfg.validate();
    const int nb = static_cast<int>(cfg.bits_list.size());
    const RandomStream root(cfg.seed);

    std::vector<std::vector<std::vector<double>>> per_real(cfg.realizations);
    const int workers = std::min(worker_count(), cfg.realizations);
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= cfg.realizations) return;
            per_real[r] = run_realization(cfg, root.substream(static_cast<uint64_t>(r)));
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<CdfSeries> series(nb);
    for (int bi = 0; bi < nb; ++bi) {
        series[bi].bits = cfg.bits_list[bi];
        for (int r = 0; r < cfg.realizations; ++r)
            series[bi].sorted_values.insert(series[bi].sorted_values.end(),
                                            per_real[r][bi].begin(), per_real[r][bi].end());
        std::sort(series[bi].sorted_values.begin(), series[bi].sorted_values.end());
        series[bi].summary = summarize(series[bi].sorted_values);
    }
    return series;
}

std::string cdf_csv_string(const std::vector<CdfSeries>& series) {
    if (series.empty()) fail(errc::invalid_argument, "emit_cdf_csv: empty series list");
    std::string out = "bits,abs_rho,cdf\n";
    char buf[96];
    for (const CdfSeries& s : series) {
        const size_t k = s.sorted_values.size();
        for (size_t i = 0; i < k; ++i) {
            std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g\n", s.bits, s.sorted_values[i],
                          static_cast<double>(i + 1) / static_cast<double>(k));
            out += buf;
        }
    }
    return out;
}

void emit_cdf_csv(const std::vector<CdfSeries>& series, const std::string& path) {
    const std::string body = cdf_csv_string(series);
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(errc::io_error, "emit_cdf_csv: cannot open " + path);
    f << body;
    if (!f) fail(errc::io_error, "emit_cdf_csv: write failed for " + path);
}

std::string summary_json_string(const std::vector<CdfSeries>& series, const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["config"] = {{"m_rx", cfg.m_rx},
                   {"m_tx", cfg.m_tx},
                   {"bits", cfg.bits_list},
                   {"realizations", cfg.realizations},
                   {"samples_per_realization", cfg.samples_per_realization},
                   {"seed", cfg.seed},
                   {"step_policy", cfg.fixed_step > 0.0 ? "fixed" : "four_sigma"},
                   {"fixed_step", cfg.fixed_step}};
    j["series"] = nlohmann::ordered_json::array();
    for (const CdfSeries& s : series) {
        j["series"].push_back({{"bits", s.bits},
                               {"count", s.sorted_values.size()},
                               {"median", s.summary.median},
                               {"p90", s.summary.p90},
                               {"max", s.summary.max}});
    }
    return j.dump(2) + "\n";
}

void emit_summary_json(const std::vector<CdfSeries>& series, const ExperimentConfig& cfg,
                       const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail(errc::io_error, "emit_summary_json: cannot open " + path);
    f << summary_json_string(series, cfg);
    if (!f) fail(errc::io_error, "emit_summary_json: write failed for " + path);
}

}  // namespace bussgang::experiment
