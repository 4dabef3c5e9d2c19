#ifndef BUSSGANG_JSON_IO_HPP
#define BUSSGANG_JSON_IO_HPP

#include "json.hpp"

#include "bussgang/linalg.hpp"
#include "bussgang/mimo.hpp"
#include "bussgang/scalar.hpp"

namespace bussgang::json_io {

using json = nlohmann::ordered_json;

// complex scalars as [re, im]; matrices as nested arrays of [re, im] pairs
json complex_to_json(cplx v);
json matrix_to_json(const linalg::ComplexMatrix& m);
cplx complex_from_json(const nlohmann::json& j);
linalg::ComplexMatrix matrix_from_json(const nlohmann::json& j);

json to_json(const scalar::GainEstimate& g);
json to_json(const scalar::ScalarDecomposition& d);
json to_json(const mimo::MimoDecomposition& d);

}  // namespace bussgang::json_io

#endif
