#include "bussgang/json_io.hpp"

namespace bussgang::json_io {

json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

json matrix_to_json(const linalg::ComplexMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return cplx(j[0].get<double>(), j[1].get<double>());
    fail(errc::config_error, "expected a number or [re, im] pair");
}

linalg::ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) fail(errc::config_error, "matrix: expected nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    linalg::ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            fail(errc::config_error, "matrix: ragged rows at row " + std::to_string(i));
        for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
    }
    return m;
}

json to_json(const scalar::GainEstimate& g) {
    return json{{"value", complex_to_json(g.value)},
                {"method", g.method},
                {"n_samples", g.n_samples},
                {"std_error", g.std_error}};
}

json to_json(const scalar::ScalarDecomposition& d) {
    json j{{"B", complex_to_json(d.b)},
           {"C_x", d.c_x},
           {"C_z_hat", d.c_z_hat},
           {"C_zx_hat", complex_to_json(d.c_zx_hat)},
           {"distortion_power", d.distortion_power},
           {"distortion_clamped", d.distortion_clamped},
           {"sdr_infinite", d.sdr_infinite},
           {"orthogonality_residual", d.orthogonality_residual},
           {"std_error", d.std_error},
           {"n_samples", d.n_samples}};
    j["sdr"] = d.sdr_infinite ? json(nullptr) : json(d.sdr);
    return j;
}

json to_json(const mimo::MimoDecomposition& d) {
    return json{{"B", matrix_to_json(d.b)},
                {"C_x", matrix_to_json(d.c_x)},
                {"C_z_hat", matrix_to_json(d.c_z_hat)},
                {"C_zx_hat", matrix_to_json(d.c_zx_hat)},
                {"C_eta", matrix_to_json(d.c_eta)},
                {"diagnostics",
                 {{"diagonality_defect", d.diagonality_defect},
                  {"psd_margin", d.psd_margin},
                  {"orthogonality_residual", d.orthogonality_residual},
                  {"std_error", d.std_error},
                  {"used_pseudo_inverse", d.used_pseudo_inverse}}},
                {"n_samples", d.n_samples}};
}

}  // namespace bussgang::json_io
