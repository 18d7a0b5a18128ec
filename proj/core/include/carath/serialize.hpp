#pragma once

#include <nlohmann/json.hpp>

#include "carath/herglotz.hpp"
#include "carath/kernel.hpp"
#include "carath/realization.hpp"

// JSON artifact schemas. Complex numbers are [re,im] pairs; matrices are
// nested row-major arrays of pairs. Emission order is fixed so that
// serialize -> deserialize -> serialize is byte-identical.
namespace carath {

using json = nlohmann::ordered_json;

json to_json(Complex z);
json to_json(const Matrix& m);
Complex complex_from_json(const json& j);
Matrix matrix_from_json(const json& j);

// {"dim", "atoms":[{"t","mass"}], "density":[{"t0","t1","m"}], "D"}
json to_json(const HerglotzMeasure& mu);
HerglotzMeasure measure_from_json(const json& j);

// {"d", "V", "C", "D"}
json to_json(const Realization& r);
Realization realization_from_json(const json& j);

// {"points":[[re,im],...], "vectors":[...]?, "values":[matrix,...]?}
struct SamplesFile {
  SampleSet samples;
  std::vector<Matrix> values;  // empty when the file carries points only
};
json to_json(const SamplesFile& s);
SamplesFile samples_from_json(const json& j);

// {"variant":"rational"|"table"|"realization"|"measure", ...}
FunctionSpec function_from_json(const json& j);

DualityTag tag_from_json(const json& j);
json to_json(DualityTag tag);

}  // namespace carath
