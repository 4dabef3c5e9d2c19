#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bussgang/experiment.hpp"
#include "bussgang/json_io.hpp"
#include "bussgang/mimo.hpp"
#include "bussgang/nonlinearity.hpp"
#include "bussgang/scalar.hpp"
#include "bussgang/types.hpp"

namespace {

using bussgang::cplx;
using bussgang::errc;
using bussgang::Error;
using bussgang::Nonlinearity;
using bussgang::RandomStream;
using json = nlohmann::ordered_json;

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

json base_config(const std::string& nl, double c_x, uint64_t seed, size_t samples) {
    return json{{"nonlinearity", nl}, {"C_x", c_x}, {"seed", seed}, {"samples", samples}};
}

int run_gain(const std::string& nl_spec, double c_x, const std::string& method, uint64_t seed,
             size_t samples) {
    const Nonlinearity u = bussgang::parse_nonlinearity(nl_spec, c_x);
    std::vector<bussgang::scalar::GainEstimate> results;
    if (method == "closed" || method == "all") {
        if (method == "closed" || u.has_closed_form_gain())
            results.push_back(bussgang::scalar::gain_closed_form(u, c_x));
    }
    if (method == "correlation" || method == "all")
        results.push_back(bussgang::scalar::gain_correlation(u, c_x, RandomStream(seed, 1), samples));
    if (method == "derivative" || method == "all") {
        if (method == "derivative" || u.has_derivative())
            results.push_back(bussgang::scalar::gain_derivative(u, c_x, RandomStream(seed, 2), samples));
    }
    json out;
    out["config"] = base_config(nl_spec, c_x, seed, samples);
    out["config"]["method"] = method;
    out["results"] = json::array();
    for (const auto& g : results) out["results"].push_back(bussgang::json_io::to_json(g));
    if (method == "all" && results.size() > 1) {
        double max_dev = 0.0, max_combined = 0.0;
        for (size_t i = 0; i < results.size(); ++i)
            for (size_t k = i + 1; k < results.size(); ++k) {
                max_dev = std::max(max_dev, std::abs(results[i].value - results[k].value));
                const double c = std::hypot(results[i].std_error, results[k].std_error);
                max_combined = std::max(max_combined, c);
            }
        out["agreement"] = {{"max_deviation", max_dev}, {"combined_std_error", max_combined}};
    }
    print(out);
    return 0;
}

int run_decompose(const std::string& nl_spec, double c_x, double sigma2, bool with_rate,
                  uint64_t seed, size_t samples) {
    const Nonlinearity u = bussgang::parse_nonlinearity(nl_spec, c_x);
    const auto d = bussgang::scalar::decompose(u, c_x, RandomStream(seed, 1), samples);
    json out;
    out["config"] = base_config(nl_spec, c_x, seed, samples);
    out["decomposition"] = bussgang::json_io::to_json(d);
    if (with_rate) {
        out["config"]["sigma2"] = sigma2;
        out["rate_bits_per_use"] = bussgang::scalar::rate_lower_bound(d, sigma2);
    }
    print(out);
    return 0;
}

int run_theorem_check(const std::string& nl_spec, double c_x, double c_y, cplx rho, uint64_t seed,
                      size_t samples) {
    const Nonlinearity u = bussgang::parse_nonlinearity(nl_spec, c_x);
    const auto r =
        bussgang::scalar::verify_cross_correlation_theorem(u, c_x, c_y, rho, RandomStream(seed, 1), samples);
    json out;
    out["config"] = base_config(nl_spec, c_x, seed, samples);
    out["config"]["C_y"] = c_y;
    out["config"]["rho"] = bussgang::json_io::complex_to_json(rho);
    out["report"] = {{"C_zy_hat", bussgang::json_io::complex_to_json(r.c_zy_hat)},
                     {"B_hat", bussgang::json_io::complex_to_json(r.b_hat)},
                     {"C_xy_hat", bussgang::json_io::complex_to_json(r.c_xy_hat)},
                     {"B_hat_times_C_xy_hat", bussgang::json_io::complex_to_json(r.rhs)},
                     {"deviation", r.deviation},
                     {"combined_std_error", r.combined_std_error},
                     {"within_tolerance", r.within_tolerance}};
    print(out);
    return 0;
}

int run_aqnm(int bits, double c_x, uint64_t seed, size_t samples) {
    const Nonlinearity q = bussgang::quantizer_design_lloyd_max(bits, c_x);
    const auto r = bussgang::scalar::aqnm_check(q, c_x, RandomStream(seed, 1), samples);
    json out;
    out["config"] = {{"bits", bits}, {"C_x", c_x}, {"seed", seed}, {"samples", samples}};
    out["report"] = {{"beta_hat", r.beta_hat},
                     {"one_minus_beta", r.one_minus_beta},
                     {"B_hat", bussgang::json_io::complex_to_json(r.b_hat)},
                     {"B_closed_form", bussgang::json_io::complex_to_json(q.closed_form_gain(c_x))},
                     {"C_zx_hat", bussgang::json_io::complex_to_json(r.c_zx_hat)},
                     {"C_z_hat", r.c_z_hat},
                     {"se_b", r.se_b},
                     {"se_beta", r.se_beta},
                     {"se_czx_cz", r.se_czx_cz}};
    print(out);
    return 0;
}

int run_mimo(const std::string& config_path) {
    std::ifstream f(config_path);
    if (!f) throw Error(errc::io_error, "mimo: cannot open config file " + config_path);
    nlohmann::json cfg;
    try {
        f >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::config_error, std::string("mimo: config parse error: ") + e.what());
    }
    if (!cfg.contains("C_x")) throw Error(errc::config_error, "mimo: config field 'C_x' is required");
    const auto c_x = bussgang::json_io::matrix_from_json(cfg["C_x"]);
    {
        const auto rep = bussgang::linalg::check_hermitian(c_x);
        if (rep.max_asymmetry > 1e-10 * std::max(1.0, c_x.max_abs()))
            throw Error(errc::config_error, "mimo: config field 'C_x' is not Hermitian");
    }
    if (!cfg.contains("nonlinearities"))
        throw Error(errc::config_error, "mimo: config field 'nonlinearities' is required");
    bussgang::mimo::ElementwiseDistortion dist;
    for (const auto& s : cfg["nonlinearities"]) {
        const int m = dist.dim();
        const double c_m = (m < c_x.rows) ? c_x(m, m).real() : 1.0;
        dist.per_antenna.push_back(bussgang::parse_nonlinearity(s.get<std::string>(), c_m));
    }
    if (dist.dim() != c_x.rows)
        throw Error(errc::config_error, "mimo: nonlinearity count must equal dim(C_x)");
    const uint64_t seed = cfg.value("seed", 42ull);
    const size_t samples = cfg.value("samples", 100000ull);
    const std::string source = cfg.value("source", "gaussian");

    bussgang::mimo::MimoDecomposition d;
    if (source == "gaussian") {
        d = bussgang::mimo::distortion_correlation(dist, c_x, RandomStream(seed, 1), samples);
    } else if (source == "channel_qpsk") {
        if (!cfg.contains("H"))
            throw Error(errc::config_error, "mimo: source 'channel_qpsk' requires field 'H'");
        const auto h = bussgang::json_io::matrix_from_json(cfg["H"]);
        d = bussgang::mimo::decompose_general(
            dist.as_map(), bussgang::sampling::SignalSource::ChannelQpsk(h), RandomStream(seed, 1),
            samples);
    } else {
        throw Error(errc::config_error, "mimo: unknown source '" + source + "'");
    }
    json out;
    out["config"] = {{"file", config_path}, {"source", source}, {"seed", seed}, {"samples", samples}};
    out["decomposition"] = bussgang::json_io::to_json(d);
    print(out);
    return 0;
}

int run_fig3(const bussgang::experiment::ExperimentConfig& cfg, const std::string& csv_path,
             const std::string& summary_path) {
    const auto series = bussgang::experiment::run_fig3(cfg);
    bussgang::experiment::emit_cdf_csv(series, csv_path);
    bussgang::experiment::emit_summary_json(series, cfg, summary_path);
    std::cout << bussgang::experiment::summary_json_string(series, cfg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bussgang decomposition toolkit"};
    app.require_subcommand(1);

    std::string nl_spec = "identity";
    double c_x = 1.0, c_y = 1.0, sigma2 = 1.0, rho_re = 0.0, rho_im = 0.0;
    uint64_t seed = 42;
    double samples_arg = 1000000;  // double so 1e6-style values parse
    std::string method = "all";
    int bits = 1;
    std::string config_path, csv_path = "fig3_cdf.csv", summary_path = "fig3_summary.json";

    auto* gain = app.add_subcommand("gain", "Bussgang gain of a scalar nonlinearity");
    gain->add_option("--nl", nl_spec, "nonlinearity spec, e.g. third_order or soft_clipper(amax=1)")
        ->required();
    gain->add_option("--cx", c_x, "input power C_x")->check(CLI::PositiveNumber);
    gain->add_option("--method", method)->check(CLI::IsMember({"closed", "correlation", "derivative", "all"}));
    gain->add_option("--seed", seed);
    gain->add_option("--samples", samples_arg)->check(CLI::PositiveNumber);

    auto* dec = app.add_subcommand("decompose", "full scalar decomposition with SDR");
    dec->add_option("--nl", nl_spec)->required();
    dec->add_option("--cx", c_x)->check(CLI::PositiveNumber);
    dec->add_option("--seed", seed);
    dec->add_option("--samples", samples_arg)->check(CLI::PositiveNumber);

    auto* rate = app.add_subcommand("rate", "achievable-rate lower bound with thermal noise");
    rate->add_option("--nl", nl_spec)->required();
    rate->add_option("--cx", c_x)->check(CLI::PositiveNumber);
    rate->add_option("--sigma2", sigma2, "thermal noise power")->required()->check(CLI::PositiveNumber);
    rate->add_option("--seed", seed);
    rate->add_option("--samples", samples_arg)->check(CLI::PositiveNumber);

    auto* thm = app.add_subcommand("theorem-check", "cross-correlation theorem check");
    thm->add_option("--nl", nl_spec)->required();
    thm->add_option("--cx", c_x)->check(CLI::PositiveNumber);
    thm->add_option("--cy", c_y)->check(CLI::PositiveNumber);
    thm->add_option("--rho", rho_re, "correlation coefficient (real part)");
    thm->add_option("--rho-im", rho_im, "correlation coefficient (imaginary part)");
    thm->add_option("--seed", seed);
    thm->add_option("--samples", samples_arg)->check(CLI::PositiveNumber);

    auto* aqnm = app.add_subcommand("aqnm", "AQNM equivalence check for a Lloyd-Max quantizer");
    aqnm->add_option("--bits", bits)->check(CLI::Range(1, 12));
    aqnm->add_option("--cx", c_x)->check(CLI::PositiveNumber);
    aqnm->add_option("--seed", seed);
    aqnm->add_option("--samples", samples_arg)->check(CLI::PositiveNumber);

    auto* mimo = app.add_subcommand("mimo", "MIMO decomposition from a JSON config file");
    mimo->add_option("--config", config_path, "JSON config path")->required();

    bussgang::experiment::ExperimentConfig ecfg;
    double fig3_samples_arg = static_cast<double>(ecfg.samples_per_realization);
    std::vector<int> bits_list;
    auto* fig3 = app.add_subcommand("fig3", "distortion-correlation CDF experiment");
    fig3->add_option("--bits", bits_list, "comma-separated bit depths")->delimiter(',');
    fig3->add_option("--mrx", ecfg.m_rx);
    fig3->add_option("--mtx", ecfg.m_tx);
    fig3->add_option("--realizations", ecfg.realizations);
    fig3->add_option("--samples", fig3_samples_arg)->check(CLI::PositiveNumber);
    fig3->add_option("--seed", ecfg.seed);
    fig3->add_option("--step", ecfg.fixed_step, "fixed quantizer step (default: four-sigma coverage)");
    fig3->add_option("--csv", csv_path);
    fig3->add_option("--summary", summary_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return static_cast<int>(errc::invalid_argument);
    }

    const size_t samples = static_cast<size_t>(std::llround(samples_arg));
    ecfg.samples_per_realization = static_cast<size_t>(std::llround(fig3_samples_arg));

    try {
        if (gain->parsed()) return run_gain(nl_spec, c_x, method, seed, samples);
        if (dec->parsed()) return run_decompose(nl_spec, c_x, 0.0, false, seed, samples);
        if (rate->parsed()) return run_decompose(nl_spec, c_x, sigma2, true, seed, samples);
        if (thm->parsed())
            return run_theorem_check(nl_spec, c_x, c_y, cplx(rho_re, rho_im), seed, samples);
        if (aqnm->parsed()) return run_aqnm(bits, c_x, seed, samples);
        if (mimo->parsed()) return run_mimo(config_path);
        if (fig3->parsed()) {
            if (!bits_list.empty()) ecfg.bits_list = bits_list;
            for (int b : ecfg.bits_list)
                if (b < 1 || b > 12)
                    throw Error(errc::invalid_argument, "fig3: --bits values must be in 1..12");
            return run_fig3(ecfg, csv_path, summary_path);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
