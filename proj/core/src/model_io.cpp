#include "deeplq/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace deeplq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "JSON parse error at line " << line << ", column " << col << ": " << e.what();
    throw InputError(os.str());
  }
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) fail(where, "unknown key '" + k + "'");
  }
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing key '") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

// Number (c I for square shapes), flat array (column vector) or row-major
// nested arrays.
Mat matrix(const json& j, int rows, int cols, const std::string& where) {
  if (j.is_number()) {
    if (rows != cols) fail(where, "a scalar is only accepted for square matrices");
    return j.get<double>() * Mat::Identity(rows, cols);
  }
  if (!j.is_array()) fail(where, "expected a number or an array");
  if (!j.empty() && !j.front().is_array()) {
    if (cols != 1 || static_cast<int>(j.size()) != rows) {
      std::ostringstream os;
      os << "flat array of length " << j.size() << " where a " << rows << "x" << cols << " matrix is expected";
      fail(where, os.str());
    }
    Vec v(rows);
    for (int r = 0; r < rows; ++r) v(r) = number(j[r], where);
    return v;
  }
  if (static_cast<int>(j.size()) != rows) {
    std::ostringstream os;
    os << "has " << j.size() << " rows, expected " << rows;
    fail(where, os.str());
  }
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
      std::ostringstream os;
      os << "row " << r << " must have " << cols << " entries";
      fail(where, os.str());
    }
    for (int c = 0; c < cols; ++c) m(r, c) = number(j[r][c], where);
  }
  return m;
}

TimeVarying time_varying(const json& j, int rows, int cols, const std::string& where) {
  if (j.is_object()) {
    allow_keys(j, where, {"t_grid", "values"});
    const json& grid = need(j, "t_grid", where);
    const json& values = need(j, "values", where);
    if (!grid.is_array() || !values.is_array()) fail(where, "t_grid and values must be arrays");
    std::vector<double> t;
    for (const auto& v : grid) t.push_back(number(v, where + ".t_grid"));
    std::vector<Mat> mats;
    for (const auto& v : values) mats.push_back(matrix(v, rows, cols, where + ".values"));
    try {
      return TimeVarying(std::move(t), std::move(mats));
    } catch (const InputError& e) {
      fail(where, e.what());
    }
  }
  return TimeVarying(matrix(j, rows, cols, where));
}

json matrix_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json time_varying_json(const TimeVarying& m, bool as_vector = false) {
  auto one = [&](const Mat& v) { return as_vector ? vector_json(v.col(0)) : matrix_json(v); };
  if (m.is_constant()) return one(m.values().front());
  json values = json::array();
  for (const auto& v : m.values()) values.push_back(one(v));
  return {{"t_grid", m.breakpoints()}, {"values", values}};
}

InitialState parse_init(const json& j, int n, int dx, const std::string& where) {
  allow_keys(j, where, {"kind", "mean", "means", "cov"});
  InitialState init;
  const std::string kind = j.value("kind", "deterministic");
  if (kind == "gaussian") {
    init.kind = InitialState::Kind::Gaussian;
    init.cov = matrix(need(j, "cov", where), dx, dx, where + ".cov");
  } else if (kind != "deterministic") {
    fail(where + ".kind", "expected 'deterministic' or 'gaussian'");
  }
  if (j.contains("mean") && j.contains("means")) fail(where, "give either 'mean' or 'means'");
  if (j.contains("means")) {
    const json& means = j.at("means");
    if (!means.is_array() || static_cast<int>(means.size()) != n) fail(where + ".means", "must have n entries");
    for (int i = 0; i < n; ++i) init.mean.push_back(matrix(means[i], dx, 1, where + ".means"));
  } else {
    const Vec mean = j.contains("mean") ? Vec(matrix(j.at("mean"), dx, 1, where + ".mean")) : Vec::Zero(dx);
    init.mean.assign(static_cast<std::size_t>(n), mean);
  }
  return init;
}

struct Dims {
  int n, f, dx, du;
};

Dims parse_dims(const json& j, const std::string& where) {
  allow_keys(j, where,
             {"n", "f", "dims", "A", "B", "C", "Q", "R", "coupling", "mu", "alpha", "tracking", "beta", "init"});
  Dims d{};
  d.n = integer(need(j, "n", where), where + ".n");
  d.f = j.contains("f") ? integer(j.at("f"), where + ".f") : 1;
  d.dx = d.du = 1;
  if (j.contains("dims")) {
    allow_keys(j.at("dims"), where + ".dims", {"x", "u"});
    d.dx = integer(need(j.at("dims"), "x", where + ".dims"), where + ".dims.x");
    d.du = integer(need(j.at("dims"), "u", where + ".dims"), where + ".dims.u");
  }
  if (d.n < 1 || d.f < 1 || d.dx < 1 || d.du < 1) fail(where, "n, f and dims must be positive");
  return d;
}

SubPopulation parse_sub(const json& j, const Dims& d, int total_x, int total_u, const std::string& where) {
  SubPopulation sub;
  sub.n = d.n;
  sub.f = d.f;
  sub.dx = d.dx;
  sub.du = d.du;
  sub.A = time_varying(need(j, "A", where), d.dx, d.dx, where + ".A");
  sub.B = time_varying(need(j, "B", where), d.dx, d.du, where + ".B");
  sub.C = time_varying(need(j, "C", where), d.dx, d.dx, where + ".C");
  sub.Q = time_varying(need(j, "Q", where), d.dx, d.dx, where + ".Q");
  sub.R = time_varying(need(j, "R", where), d.du, d.du, where + ".R");

  const json coupling = j.value("coupling", json::object());
  allow_keys(coupling, where + ".coupling", {"Abar", "Bbar", "Qbar", "Rbar"});
  auto per_feature = [&](const char* key, int cols) {
    std::vector<TimeVarying> out;
    const std::string w = where + ".coupling." + key;
    if (!coupling.contains(key)) {
      out.assign(static_cast<std::size_t>(d.f), TimeVarying::zeros(d.dx, cols));
      return out;
    }
    const json& arr = coupling.at(key);
    if (!arr.is_array() || static_cast<int>(arr.size()) != d.f) fail(w, "must be a list of f matrices");
    for (const auto& m : arr) out.push_back(time_varying(m, d.dx, cols, w));
    return out;
  };
  sub.Abar = per_feature("Abar", total_x);
  sub.Bbar = per_feature("Bbar", total_u);
  sub.Qbar = coupling.contains("Qbar") ? time_varying(coupling.at("Qbar"), total_x, total_x, where + ".coupling.Qbar")
                                       : TimeVarying::zeros(total_x, total_x);
  sub.Rbar = coupling.contains("Rbar") ? time_varying(coupling.at("Rbar"), total_u, total_u, where + ".coupling.Rbar")
                                       : TimeVarying::zeros(total_u, total_u);

  sub.mu = j.contains("mu") ? number(j.at("mu"), where + ".mu") : 1.0;
  sub.alpha = j.contains("alpha") ? matrix(j.at("alpha"), d.n, d.f, where + ".alpha") : Mat::Ones(d.n, d.f);
  if (!j.contains("alpha") && d.f != 1) fail(where, "alpha is required when f > 1");

  if (j.contains("tracking")) {
    const json& tr = j.at("tracking");
    const std::string w = where + ".tracking";
    if (tr.is_object() && tr.contains("uniform")) {
      allow_keys(tr, w, {"uniform"});
      sub.tracking.assign(static_cast<std::size_t>(d.n), time_varying(tr.at("uniform"), d.dx, 1, w));
    } else {
      if (!tr.is_array() || static_cast<int>(tr.size()) != d.n) {
        fail(w, "expected a list of n signals or {\"uniform\": signal}");
      }
      for (const auto& r : tr) sub.tracking.push_back(time_varying(r, d.dx, 1, w));
    }
  }
  if (j.contains("beta")) sub.beta = matrix(j.at("beta"), d.n, 1, where + ".beta");
  sub.init = j.contains("init") ? parse_init(j.at("init"), d.n, d.dx, where + ".init")
                                : parse_init(json::object(), d.n, d.dx, where + ".init");
  return sub;
}

TeamModel model_from_json(const json& doc) {
  allow_keys(doc, "model", {"risk_factor", "horizon", "shared_set", "sub_populations"});
  TeamModel m;
  m.risk_factor = doc.contains("risk_factor") ? number(doc.at("risk_factor"), "risk_factor") : 0.0;
  m.horizon = number(need(doc, "horizon", "model"), "horizon");
  const json& subs = need(doc, "sub_populations", "model");
  if (!subs.is_array() || subs.empty()) fail("sub_populations", "expected a nonempty list");
  std::vector<Dims> dims;
  int total_x = 0, total_u = 0;
  for (std::size_t s = 0; s < subs.size(); ++s) {
    dims.push_back(parse_dims(subs[s], "sub_populations[" + std::to_string(s) + "]"));
    total_x += dims.back().f * dims.back().dx;
    total_u += dims.back().f * dims.back().du;
  }
  for (std::size_t s = 0; s < subs.size(); ++s) {
    m.subs.push_back(parse_sub(subs[s], dims[s], total_x, total_u, "sub_populations[" + std::to_string(s) + "]"));
  }
  if (doc.contains("shared_set")) {
    const json& shared = doc.at("shared_set");
    if (!shared.is_array()) fail("shared_set", "expected a list of 1-based indices");
    for (const auto& v : shared) {
      const int s = integer(v, "shared_set");
      if (s < 1 || s > m.num_subs()) fail("shared_set", "index " + std::to_string(s) + " out of range");
      m.shared_set.push_back(s - 1);
    }
  }
  return m;
}

}  // namespace

TeamModel parse_model(const std::string& text) {
  const json doc = parse_document(text);
  try {
    return model_from_json(doc);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed model: ") + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

TeamModel load_model(const std::string& path) {
  try {
    return parse_model(read_text_file(path));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string model_to_json(const TeamModel& model) {
  json doc;
  doc["risk_factor"] = model.risk_factor;
  doc["horizon"] = model.horizon;
  json shared = json::array();
  for (int s : model.shared_set) shared.push_back(s + 1);
  doc["shared_set"] = shared;
  doc["sub_populations"] = json::array();
  for (const auto& sub : model.subs) {
    json j;
    j["n"] = sub.n;
    j["f"] = sub.f;
    j["dims"] = {{"x", sub.dx}, {"u", sub.du}};
    j["A"] = time_varying_json(sub.A);
    j["B"] = time_varying_json(sub.B);
    j["C"] = time_varying_json(sub.C);
    j["Q"] = time_varying_json(sub.Q);
    j["R"] = time_varying_json(sub.R);
    json coupling;
    coupling["Abar"] = json::array();
    for (const auto& m : sub.Abar) coupling["Abar"].push_back(time_varying_json(m));
    coupling["Bbar"] = json::array();
    for (const auto& m : sub.Bbar) coupling["Bbar"].push_back(time_varying_json(m));
    coupling["Qbar"] = time_varying_json(sub.Qbar);
    coupling["Rbar"] = time_varying_json(sub.Rbar);
    j["coupling"] = coupling;
    j["mu"] = sub.mu;
    j["alpha"] = matrix_json(sub.alpha);
    if (!sub.tracking.empty()) {
      j["tracking"] = json::array();
      for (const auto& r : sub.tracking) j["tracking"].push_back(time_varying_json(r, true));
    }
    if (sub.beta.size()) j["beta"] = vector_json(sub.beta);
    json init;
    init["kind"] = sub.init.kind == InitialState::Kind::Gaussian ? "gaussian" : "deterministic";
    init["means"] = json::array();
    for (const auto& v : sub.init.mean) init["means"].push_back(vector_json(v));
    if (sub.init.kind == InitialState::Kind::Gaussian) init["cov"] = matrix_json(sub.init.cov);
    j["init"] = init;
    doc["sub_populations"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

void save_model(const TeamModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << model_to_json(model);
}

LqSystem parse_lq_system(const std::string& text) {
  const json doc = parse_document(text);
  try {
    allow_keys(doc, "system", {"n", "dx", "du", "A", "B", "Q", "R"});
    LqSystem sys;
    sys.n = integer(need(doc, "n", "system"), "n");
    sys.dx = doc.contains("dx") ? integer(doc.at("dx"), "dx") : 1;
    sys.du = doc.contains("du") ? integer(doc.at("du"), "du") : 1;
    if (sys.n < 1 || sys.dx < 1 || sys.du < 1) fail("system", "n, dx and du must be positive");
    const int nx = sys.n * sys.dx, nu = sys.n * sys.du;
    sys.A = time_varying(need(doc, "A", "system"), nx, nx, "A");
    sys.B = time_varying(need(doc, "B", "system"), nx, nu, "B");
    sys.Q = time_varying(need(doc, "Q", "system"), nx, nx, "Q");
    sys.R = time_varying(need(doc, "R", "system"), nu, nu, "R");
    return sys;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed system: ") + e.what());
  }
}

Transformation parse_transformation(const std::string& text, int dx, int du) {
  const json doc = parse_document(text);
  try {
    allow_keys(doc, "transformation", {"F"});
    const json& F = need(doc, "F", "transformation");
    if (!F.is_array() || F.empty()) fail("F", "expected a square nested array");
    const int n = static_cast<int>(F.size());
    return Transformation::make(matrix(F, n, n, "F"), dx, du);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed transformation: ") + e.what());
  }
}

}  // namespace deeplq
