#include "twirl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace twirl::io {
namespace {

bool is_flat(const Json& j) {
  for (const auto& e : j) {
    if (e.is_object()) return false;
    if (e.is_array() && !is_flat(e)) return false;
  }
  return true;
}

void dump_inline(const Json& j, std::string& out);

void dump_scalar(const Json& j, std::string& out) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
  } else {
    out += j.dump();
  }
}

void dump_inline(const Json& j, std::string& out) {
  if (j.is_array()) {
    out += '[';
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ',';
      first = false;
      dump_inline(e, out);
    }
    out += ']';
  } else if (j.is_object()) {
    out += '{';
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ',';
      first = false;
      out += Json(k).dump();
      out += ':';
      dump_inline(v, out);
    }
    out += '}';
  } else {
    dump_scalar(j, out);
  }
}

void dump_pretty(const Json& j, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(k).dump() + ": ";
      dump_pretty(v, depth + 1, out);
    }
    out += "\n" + close + "}";
  } else if (j.is_array() && !is_flat(j)) {
    out += "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += ",\n";
      first = false;
      out += pad;
      dump_pretty(e, depth + 1, out);
    }
    out += "\n" + close + "]";
  } else {
    dump_inline(j, out);
  }
}

std::vector<std::vector<int>> int_table(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::invalid_table, "table must be an array of rows");
  std::vector<std::vector<int>> t;
  for (const auto& row : j) t.push_back(row.get<std::vector<int>>());
  return t;
}

Json columns(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vector_to_json(m.col(c)));
  return out;
}

Json certificate_stats(const PRCertificate& c) {
  return Json{{"restarts", c.restarts}, {"evaluations", c.evaluations}, {"best_objective", c.best_objective}};
}

}  // namespace

std::string dump(const Json& j) {
  std::string out;
  dump_pretty(j, 0, out);
  out += '\n';
  return out;
}

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::io_error, path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out << text;
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::invalid_parameter, "complex numbers are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::invalid_parameter, "matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) {
      throw Error(ErrorCode::invalid_parameter, "matrix rows have unequal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::invalid_parameter, "vector must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json to_json(const FiniteGroup& g) {
  return Json{{"order", g.order()},
              {"labels", g.labels()},
              {"table", g.table()},
              {"identity", g.identity()},
              {"inverses", g.inverses()}};
}

GroupPtr group_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("table")) throw Error(ErrorCode::invalid_table, "group JSON needs a table");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  auto group = build_from_cayley_table(std::move(labels), int_table(j.at("table")));
  if (j.contains("identity") && j.at("identity").get<int>() != group->identity()) {
    throw Error(ErrorCode::not_a_group, "stated identity " + j.at("identity").dump() + " does not match the table (" +
                                            std::to_string(group->identity()) + ")");
  }
  if (j.contains("inverses") && j.at("inverses").get<std::vector<int>>() != group->inverses()) {
    throw Error(ErrorCode::not_a_group, "stated inverses do not match the table");
  }
  return group;
}

GroupPtr load_group(const std::filesystem::path& path) { return group_from_json(read_file(path)); }

Json to_json(const Representation& pi) {
  Json mats = Json::array();
  for (const auto& m : pi.matrices()) mats.push_back(to_json(m));
  return Json{{"group", to_json(pi.group())}, {"dim", pi.dim()}, {"matrices", mats}};
}

Representation representation_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object() || !j.contains("group") || !j.contains("matrices")) {
    throw Error(ErrorCode::invalid_parameter, "representation JSON needs group and matrices");
  }
  GroupPtr group;
  const Json& g = j.at("group");
  if (g.is_string()) {
    std::filesystem::path p = g.get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    group = load_group(p);
  } else {
    group = group_from_json(g);
  }
  std::vector<Matrix> mats;
  for (const auto& m : j.at("matrices")) mats.push_back(matrix_from_json(m));
  if (static_cast<int>(mats.size()) != group->order()) {
    throw Error(ErrorCode::inconsistent_representation,
                "expected " + std::to_string(group->order()) + " matrices, got " + std::to_string(mats.size()));
  }
  if (j.contains("dim") && !mats.empty() && j.at("dim").get<int>() != mats.front().rows()) {
    throw Error(ErrorCode::inconsistent_representation, "dim does not match the matrices");
  }
  const double tol = j.value("tolerance", kDefaultRepTolerance);
  return Representation(std::move(group), std::move(mats), tol);
}

Representation load_representation(const std::filesystem::path& path) {
  return representation_from_json(read_file(path), path.parent_path());
}

Json to_json(const IsotypicDecomposition& decomp) {
  Json types = Json::array();
  for (const auto& t : decomp.types) {
    Json chi = Json::array();
    for (const auto& v : t.character.values) chi.push_back(to_json(v));
    types.push_back(Json{{"n", t.dim()}, {"m", t.multiplicity}, {"character", chi}});
  }
  return Json{{"d", decomp.d()},
              {"m", decomp.multiplicities()},
              {"n", decomp.dimensions()},
              {"U", to_json(decomp.U)},
              {"types", types},
              {"seed", decomp.seed},
              {"attempts", decomp.attempts}};
}

Json to_json(const DecompositionResiduals& r) {
  return Json{{"unitarity", r.unitarity},
              {"block", r.block},
              {"irreducibility", r.irreducibility},
              {"inequivalence", r.inequivalence},
              {"max_cross_intertwiner_dim", r.max_cross_intertwiner_dim},
              {"dimension_sum", r.dimension_sum},
              {"commutant_dim", r.commutant_dim},
              {"algebra_dim", r.algebra_dim},
              {"commutation", r.commutation},
              {"pass", r.pass}};
}

Json to_json(const QuantumChannel& phi) {
  Json j{{"in", phi.in_dim()}, {"out", phi.out_dim()}};
  if (phi.kraus()) {
    Json k = Json::array();
    for (const auto& a : *phi.kraus()) k.push_back(to_json(a));
    j["kraus"] = k;
  }
  if (phi.stored_choi()) j["choi"] = to_json(*phi.stored_choi());
  return j;
}

QuantumChannel channel_from_json(const Json& j, double tol) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_parameter, "channel JSON must be an object");
  std::vector<Matrix> kraus;
  if (j.contains("kraus")) {
    for (const auto& a : j.at("kraus")) kraus.push_back(matrix_from_json(a));
    if (kraus.empty()) throw Error(ErrorCode::invalid_parameter, "empty Kraus list");
    if (j.contains("in") && j.at("in").get<int>() != kraus.front().cols()) {
      throw Error(ErrorCode::invalid_parameter, "in does not match the Kraus operators");
    }
    if (j.contains("out") && j.at("out").get<int>() != kraus.front().rows()) {
      throw Error(ErrorCode::invalid_parameter, "out does not match the Kraus operators");
    }
    if (j.contains("choi")) return QuantumChannel::from_both(std::move(kraus), matrix_from_json(j.at("choi")), tol);
    return QuantumChannel::from_kraus(std::move(kraus), tol);
  }
  if (j.contains("choi")) {
    if (!j.contains("in") || !j.contains("out")) throw Error(ErrorCode::invalid_parameter, "Choi form needs in and out");
    return QuantumChannel::from_choi(matrix_from_json(j.at("choi")), j.at("in").get<int>(), j.at("out").get<int>(), tol);
  }
  throw Error(ErrorCode::invalid_parameter, "channel JSON needs kraus or choi");
}

Json to_json(const WitnessCertificate& w) {
  Json j{{"kind", to_string(w.kind)},
         {"vectors", columns(w.vectors)},
         {"residuals", Json(w.residuals)},
         {"tolerance", w.tolerance},
         {"pass", w.pass}};
  if (w.failing_a >= 0) j["failing"] = Json::array({w.failing_a, w.failing_b});
  if (w.coefficients.size() > 0) j["coefficients"] = to_json(w.coefficients);
  return j;
}

Json to_json(const InvariantReport& report) {
  const auto& dec = report.decomposition;
  Json residuals{{"decomposition", to_json(report.decomposition_residuals)},
                 {"alpha", report.alpha_cert.max_residual()},
                 {"code", report.code_cert.max_residual()},
                 {"gamma", report.gamma_cert.max_residual()},
                 {"tau", report.tau_cert.max_residual()}};
  return Json{{"alpha", report.alpha},
              {"beta", report.beta},
              {"gamma", report.gamma},
              {"tau", report.tau},
              {"capacity_bits", report.capacity_bits},
              {"d", dec.d()},
              {"m", dec.multiplicities()},
              {"n", dec.dimensions()},
              {"seed", dec.seed},
              {"witnesses",
               {{"alpha", to_json(report.alpha_cert)},
                {"code", to_json(report.code_cert)},
                {"gamma", to_json(report.gamma_cert)},
                {"tau", to_json(report.tau_cert)}}},
              {"residuals", residuals}};
}

Json to_json(const CapacityTensorReport& r) {
  return Json{{"power", r.power},
              {"alpha_base", r.alpha_base},
              {"alpha_tensor", r.alpha_tensor},
              {"expected_alpha", r.expected_alpha},
              {"types_base", r.types_base},
              {"types_tensor", r.types_tensor},
              {"product_type_gram_defect", r.product_type_gram_defect},
              {"pass", r.pass}};
}

Json to_json(const Frame& f) {
  Json v = Json::array();
  for (const auto& x : f.vectors) v.push_back(vector_to_json(x));
  return Json{{"n", f.n}, {"vectors", v}};
}

Frame frame_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vectors")) throw Error(ErrorCode::invalid_parameter, "frame JSON needs vectors");
  Frame f;
  for (const auto& v : j.at("vectors")) f.vectors.push_back(vector_from_json(v));
  f.n = j.contains("n") ? j.at("n").get<int>() : (f.vectors.empty() ? 0 : static_cast<int>(f.vectors.front().size()));
  for (const auto& v : f.vectors) {
    if (v.size() != f.n) throw Error(ErrorCode::invalid_parameter, "frame vectors must have length n");
  }
  return f;
}

OperatorFrame operator_frame_from_json(const Json& j) {
  if (j.is_object() && j.contains("operators")) {
    OperatorFrame f;
    for (const auto& m : j.at("operators")) f.ops.push_back(matrix_from_json(m));
    f.k = j.contains("k") ? j.at("k").get<int>() : (f.ops.empty() ? 0 : static_cast<int>(f.ops.front().rows()));
    for (const auto& m : f.ops) {
      if (m.rows() != f.k || m.cols() != f.k) throw Error(ErrorCode::invalid_parameter, "operators must be k x k");
    }
    return f;
  }
  return rank_one_frame(frame_from_json(j));
}

Json to_json(const FrameReport& r) {
  Json j{{"rank", r.rank},
         {"is_frame", r.is_frame},
         {"lower_bound", r.lower_bound},
         {"upper_bound", r.upper_bound},
         {"parseval", r.parseval},
         {"parseval_defect", r.parseval_defect}};
  if (!r.parseval_frame.empty()) {
    Json v = Json::array();
    for (const auto& x : r.parseval_frame) v.push_back(vector_to_json(x));
    j["parseval_frame"] = v;
  }
  return j;
}

Json to_json(const PRCertificate& c) {
  Json j{{"verdict", to_string(c.verdict)},
         {"exact", c.exact},
         {"method", c.method},
         {"ambient_dim", c.ambient_dim},
         {"kernel_dim", c.kernel_dim},
         {"search", certificate_stats(c)}};
  if (c.counterexample) {
    j["counterexample"] = Json{{"x", vector_to_json(c.counterexample->first)},
                               {"y", vector_to_json(c.counterexample->second)},
                               {"measurement_gap", c.measurement_gap},
                               {"state_distance", c.state_distance}};
  }
  return j;
}

Json to_json(const SubspaceWitness& w) {
  Json j{{"dimension", w.basis.cols()},
         {"basis", columns(w.basis)},
         {"certificate", to_json(w.certificate)},
         {"trials", w.trials},
         {"collisions", w.collisions},
         {"attempts", w.attempts},
         {"pass", w.pass}};
  if (w.map.size() > 0) {
    j["map"] = to_json(w.map);
    j["rank_gap"] = w.rank_gap;
    Json xi = Json::array();
    for (const auto& v : w.frame) xi.push_back(vector_to_json(v));
    j["frame"] = xi;
  } else {
    j["block_formula"] = w.block_formula;
    j["injectivity"] = w.injectivity;
  }
  return j;
}

Json to_json(const Prop51Report& r) {
  return Json{{"channel_side", to_json(r.channel_side)},
              {"measurement_side", to_json(r.measurement_side)},
              {"channel_collision_gap", r.channel_collision_gap},
              {"trials", r.trials},
              {"phase_pairs_collided", r.phase_pairs_collided},
              {"agree", r.agree}};
}

}  // namespace twirl::io
