#include "gfb/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace gfb {

namespace {

using nlohmann::json;

constexpr int kInlineLimit = 20;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const json& arr) {
  Vec v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<int>(i)] = arr[i].get<double>();
  return v;
}

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  return m;
}

// Writes a vector/matrix field either inline or to a sidecar CSV.
struct SidecarWriter {
  const std::filesystem::path& base;  // the problem file
  int counter = 0;

  void put_vec(json& obj, const std::string& key, const Vec& v) {
    if (v.size() <= kInlineLimit) {
      obj[key] = vec_to_json(v);
      return;
    }
    const std::string name = sidecar_name(key);
    write_matrix_csv(base.parent_path() / name, v.transpose());
    obj[key + "_csv"] = name;
  }

  void put_mat(json& obj, const std::string& key, const Eigen::MatrixXd& m) {
    if (m.rows() <= kInlineLimit && m.cols() <= kInlineLimit) {
      obj[key] = mat_to_json(m);
      return;
    }
    const std::string name = sidecar_name(key);
    write_matrix_csv(base.parent_path() / name, m);
    obj[key + "_csv"] = name;
  }

 private:
  std::string sidecar_name(const std::string& key) {
    return base.stem().string() + "_" + key + "_" + std::to_string(counter++) + ".csv";
  }
};

Vec get_vec(const json& obj, const std::string& key, const std::filesystem::path& base) {
  if (obj.contains(key)) return vec_from_json(obj.at(key));
  if (obj.contains(key + "_csv")) {
    const Eigen::MatrixXd m =
        read_matrix_csv(base.parent_path() / obj.at(key + "_csv").get<std::string>());
    return Eigen::Map<const Vec>(m.data(), m.size());
  }
  throw ParseError("missing field: " + key);
}

Eigen::MatrixXd get_mat(const json& obj, const std::string& key,
                        const std::filesystem::path& base) {
  if (obj.contains(key)) return mat_from_json(obj.at(key));
  if (obj.contains(key + "_csv"))
    return read_matrix_csv(base.parent_path() / obj.at(key + "_csv").get<std::string>());
  throw ParseError("missing field: " + key);
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << fmt17(m(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ParseError("ragged CSV: " + path.string());
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_problem(const std::filesystem::path& path, const ProblemInstance& instance,
                   const std::vector<Vec>& w0s) {
  json root;
  root["dim"] = instance.dim;
  root["beta"] = instance.beta;
  SidecarWriter sw{path};
  json rs = json::array();
  for (const auto& op : instance.resolvents) {
    json rec;
    rec["type"] = op->kind();
    if (const auto* ball = dynamic_cast<const BallNormalCone*>(op.get())) {
      sw.put_vec(rec, "center", ball->center());
      rec["radius"] = ball->radius();
    } else if (const auto* box = dynamic_cast<const BoxNormalCone*>(op.get())) {
      sw.put_vec(rec, "lo", box->lo());
      sw.put_vec(rec, "hi", box->hi());
    } else if (const auto* lin = dynamic_cast<const LinearMonotone*>(op.get())) {
      sw.put_mat(rec, "matrix", lin->matrix());
    } else if (op->kind() != "zero") {
      throw Error("cannot serialize resolvent of kind " + op->kind());
    }
    rs.push_back(std::move(rec));
  }
  root["resolvents"] = std::move(rs);
  json fs = json::array();
  for (const auto& op : instance.forwards) {
    json rec;
    rec["type"] = op->kind();
    if (const auto* quad = dynamic_cast<const QuadraticGradient*>(op.get())) {
      sw.put_mat(rec, "matrix", quad->matrix());
      rec["beta"] = quad->beta();
    } else if (!op->is_zero()) {
      throw Error("cannot serialize forward operator of kind " + op->kind());
    }
    fs.push_back(std::move(rec));
  }
  root["forwards"] = std::move(fs);
  json ws = json::array();
  for (std::size_t s = 0; s < w0s.size(); ++s) {
    json rec;
    sw.put_vec(rec, "w0", w0s[s]);
    ws.push_back(std::move(rec));
  }
  root["starts"] = std::move(ws);

  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << root.dump(2) << '\n';
}

void write_problem(const std::filesystem::path& path, const GeneratedProblem& problem) {
  write_problem(path, problem.to_instance(), problem.w0s);
}

LoadedProblem load_problem(const std::filesystem::path& path) {
  const json root = load_json(path);
  const int dim = root.at("dim").get<int>();
  std::vector<std::shared_ptr<const ResolventOperator>> as;
  for (const json& rec : root.at("resolvents")) {
    const std::string type = rec.at("type").get<std::string>();
    if (type == "zero") {
      as.push_back(std::make_shared<ZeroOperator>());
    } else if (type == "ball") {
      as.push_back(std::make_shared<BallNormalCone>(get_vec(rec, "center", path),
                                                    rec.at("radius").get<double>()));
    } else if (type == "box") {
      as.push_back(std::make_shared<BoxNormalCone>(get_vec(rec, "lo", path),
                                                   get_vec(rec, "hi", path)));
    } else if (type == "linear") {
      as.push_back(std::make_shared<LinearMonotone>(get_mat(rec, "matrix", path)));
    } else {
      throw ParseError("unknown resolvent type: " + type);
    }
  }
  std::vector<std::shared_ptr<const ForwardOperator>> bs;
  for (const json& rec : root.at("forwards")) {
    const std::string type = rec.at("type").get<std::string>();
    if (type == "zero") {
      bs.push_back(std::make_shared<ZeroForward>());
    } else if (type == "quadratic") {
      std::optional<double> beta;
      if (rec.contains("beta")) beta = rec.at("beta").get<double>();
      bs.push_back(std::make_shared<QuadraticGradient>(get_mat(rec, "matrix", path), beta));
    } else {
      throw ParseError("unknown forward type: " + type);
    }
  }
  LoadedProblem out{ProblemInstance::make(
                        dim, std::move(as), std::move(bs),
                        root.contains("beta") ? std::optional<double>(root.at("beta").get<double>())
                                              : std::nullopt),
                    {}};
  if (root.contains("starts"))
    for (const json& rec : root.at("starts")) out.w0s.push_back(get_vec(rec, "w0", path));
  return out;
}

GraphTriple load_triple(const std::filesystem::path& path) {
  const json root = load_json(path);
  const int n = root.at("n").get<int>();
  auto edges = [&](const char* key) {
    EdgeList e;
    for (const json& pair : root.at(key))
      e.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    return e;
  };
  return GraphTriple::make(AlgorithmicGraph::build(n, edges("g_edges"), true),
                           AlgorithmicGraph::build(n, edges("gp_edges"), true),
                           edges("gpp_edges"));
}

void write_triple(const std::filesystem::path& path, const GraphTriple& triple) {
  json root;
  root["n"] = triple.order();
  auto edges = [](const EdgeList& list) {
    json arr = json::array();
    for (const auto& [i, j] : list) arr.push_back(json::array({i, j}));
    return arr;
  };
  root["g_edges"] = edges(triple.g.edges());
  root["gp_edges"] = edges(triple.gp.edges());
  root["gpp_edges"] = edges(triple.gpp_edges);
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << root.dump(2) << '\n';
}

}  // namespace gfb
