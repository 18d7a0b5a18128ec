#include "carath/serialize.hpp"

namespace carath {

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("expected [re,im] pair, got: " + j.dump());
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected matrix (array of rows)");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols)
      throw std::invalid_argument("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
  }
  return m;
}

json to_json(DualityTag tag) { return json(to_string(tag)); }

DualityTag tag_from_json(const json& j) {
  const std::string s = j.get<std::string>();
  if (s == to_string(DualityTag::BToDual)) return DualityTag::BToDual;
  if (s == to_string(DualityTag::DualToB)) return DualityTag::DualToB;
  throw std::invalid_argument("unknown duality tag: " + s);
}

json to_json(const HerglotzMeasure& mu) {
  json j;
  j["dim"] = mu.dim;
  json atoms = json::array();
  for (const auto& a : mu.atoms) {
    json ja;
    ja["t"] = a.t;
    ja["mass"] = to_json(a.mass);
    atoms.push_back(std::move(ja));
  }
  j["atoms"] = std::move(atoms);
  json cells = json::array();
  for (const auto& c : mu.density) {
    json jc;
    jc["t0"] = c.t0;
    jc["t1"] = c.t1;
    jc["m"] = to_json(c.m);
    cells.push_back(std::move(jc));
  }
  j["density"] = std::move(cells);
  j["D"] = to_json(mu.D);
  j["tag"] = to_json(mu.tag);
  return j;
}

HerglotzMeasure measure_from_json(const json& j) {
  HerglotzMeasure mu;
  mu.dim = j.at("dim").get<Eigen::Index>();
  for (const auto& ja : j.at("atoms"))
    mu.atoms.push_back({ja.at("t").get<double>(), matrix_from_json(ja.at("mass"))});
  for (const auto& jc : j.at("density"))
    mu.density.push_back({jc.at("t0").get<double>(), jc.at("t1").get<double>(),
                          matrix_from_json(jc.at("m"))});
  mu.D = matrix_from_json(j.at("D"));
  if (j.contains("tag")) mu.tag = tag_from_json(j.at("tag"));
  return mu;
}

json to_json(const Realization& r) {
  json j;
  j["d"] = r.state_dim;
  j["V"] = to_json(r.V);
  j["C"] = to_json(r.C);
  j["D"] = to_json(r.D);
  j["tag"] = to_json(r.tag);
  return j;
}

Realization realization_from_json(const json& j) {
  const Matrix V = matrix_from_json(j.at("V"));
  if (j.at("d").get<Eigen::Index>() != V.rows())
    throw std::invalid_argument("realization: field d disagrees with V");
  DualityTag tag = j.contains("tag") ? tag_from_json(j.at("tag")) : DualityTag::BToDual;
  return make_realization(V, matrix_from_json(j.at("C")), matrix_from_json(j.at("D")), tag);
}

json to_json(const SamplesFile& s) {
  json j;
  json pts = json::array();
  for (Complex p : s.samples.points) pts.push_back(to_json(p));
  j["points"] = std::move(pts);
  if (!s.samples.vectors.empty()) {
    json vs = json::array();
    for (const Vector& v : s.samples.vectors) {
      json jv = json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) jv.push_back(to_json(v(i)));
      vs.push_back(std::move(jv));
    }
    j["vectors"] = std::move(vs);
  }
  if (!s.values.empty()) {
    json vals = json::array();
    for (const Matrix& m : s.values) vals.push_back(to_json(m));
    j["values"] = std::move(vals);
  }
  return j;
}

SamplesFile samples_from_json(const json& j) {
  SamplesFile s;
  for (const auto& jp : j.at("points")) s.samples.points.push_back(complex_from_json(jp));
  if (j.contains("vectors")) {
    for (const auto& jv : j["vectors"]) {
      Vector v(static_cast<Eigen::Index>(jv.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(jv[i]);
      s.samples.vectors.push_back(std::move(v));
    }
  }
  if (j.contains("values"))
    for (const auto& jm : j["values"]) s.values.push_back(matrix_from_json(jm));
  if (!s.values.empty() && s.values.size() != s.samples.points.size())
    throw std::invalid_argument("samples: values/points length mismatch");
  return s;
}

FunctionSpec function_from_json(const json& j) {
  const std::string variant = j.at("variant").get<std::string>();
  DualityTag tag = j.contains("tag") ? tag_from_json(j.at("tag")) : DualityTag::BToDual;
  if (variant == "rational") {
    std::vector<Matrix> num;
    for (const auto& jm : j.at("num")) num.push_back(matrix_from_json(jm));
    std::vector<Complex> den;
    for (const auto& jc : j.at("den")) den.push_back(complex_from_json(jc));
    return rational_function(num, den, tag);
  }
  if (variant == "table") {
    std::vector<Complex> pts;
    for (const auto& jp : j.at("points")) pts.push_back(complex_from_json(jp));
    std::vector<Matrix> vals;
    for (const auto& jm : j.at("values")) vals.push_back(matrix_from_json(jm));
    return table_function(pts, vals, tag);
  }
  if (variant == "realization") return as_function(realization_from_json(j));
  if (variant == "measure") return as_function(measure_from_json(j));
  throw std::invalid_argument("unknown function variant: " + variant);
}

}  // namespace carath
