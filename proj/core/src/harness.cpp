#include "wlmc/harness.hpp"

#include "wlmc/parallel.hpp"
#include "wlmc/wl.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace wlmc {

using nlohmann::json;
namespace fs = std::filesystem;

const char* method_name(DistanceMethod m) {
  switch (m) {
    case DistanceMethod::Wl: return "wl";
    case DistanceMethod::Wllb: return "wllb";
    case DistanceMethod::WwlHat: return "wwl";
  }
  return "?";
}

const char* label_scheme_name(LabelScheme s) {
  switch (s) {
    case LabelScheme::Raw: return "raw";
    case LabelScheme::Degree: return "degree";
    case LabelScheme::F2: return "f2";
    case LabelScheme::G: return "g";
  }
  return "?";
}

LabeledGraph load_edgelist_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(Errc::ParseError, path + ": " + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.value("edges", json::array())) {
      if (!e.is_array() || e.size() != 2) {
        throw ValidationError(Errc::ParseError, path + ": edge entries must be [u, v]");
      }
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    Matrix labels;
    if (j.contains("labels")) {
      const auto& rows = j.at("labels");
      if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
        throw ValidationError(Errc::ParseError, path + ": labels must list one row per vertex");
      }
      const int d = rows.empty() ? 1 : static_cast<int>(rows[0].size());
      labels.resize(n, d);
      for (int v = 0; v < n; ++v) {
        if (static_cast<int>(rows[v].size()) != d) {
          throw ValidationError(Errc::ParseError, path + ": ragged label rows");
        }
        for (int c = 0; c < d; ++c) labels(v, c) = rows[v][c].get<double>();
      }
    }
    return make_graph(n, std::move(edges), std::move(labels));
  } catch (const json::exception& e) {
    throw ValidationError(Errc::ParseError, path + ": " + e.what());
  }
}

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(Errc::MissingFile, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// Dataset prefix from the directory name: dir/DS_A.txt etc.
fs::path tu_file(const fs::path& dir, const std::string& suffix) {
  return dir / (dir.filename().string() + suffix);
}

}  // namespace

Dataset load_tudataset(const std::string& dir_in, const TuOptions& options) {
  fs::path dir(dir_in);
  if (!fs::is_directory(dir)) {
    throw ValidationError(Errc::MissingFile, dir_in + " is not a directory");
  }
  if (dir.filename().empty()) dir = dir.parent_path();  // tolerate trailing slash

  const auto indicator_lines = read_lines(tu_file(dir, "_graph_indicator.txt"));
  const auto class_lines = read_lines(tu_file(dir, "_graph_labels.txt"));
  const auto edge_lines = read_lines(tu_file(dir, "_A.txt"));
  if (indicator_lines.empty()) {
    throw ValidationError(Errc::MissingFile, "graph indicator file is empty");
  }

  const int total_vertices = static_cast<int>(indicator_lines.size());
  std::vector<int> graph_of(total_vertices);
  int num_graphs = 0;
  for (int v = 0; v < total_vertices; ++v) {
    const int gid = std::stoi(indicator_lines[v]);
    if (gid < 1) throw ValidationError(Errc::IndexOutOfRange, "graph ids are 1-indexed");
    graph_of[v] = gid - 1;
    num_graphs = std::max(num_graphs, gid);
  }
  if (static_cast<int>(class_lines.size()) != num_graphs) {
    throw ValidationError(Errc::IndexOutOfRange, "graph label count != graph count");
  }

  std::vector<int> local_id(total_vertices);
  std::vector<int> graph_size(num_graphs, 0);
  for (int v = 0; v < total_vertices; ++v) local_id[v] = graph_size[graph_of[v]]++;

  std::vector<std::set<std::pair<int, int>>> edges(num_graphs);
  for (const auto& line : edge_lines) {
    std::istringstream is(line);
    int u = 0, v = 0;
    char comma = 0;
    if (!(is >> u >> comma >> v)) {
      throw ValidationError(Errc::ParseError, "bad edge line: " + line);
    }
    if (u < 1 || u > total_vertices || v < 1 || v > total_vertices) {
      throw ValidationError(Errc::IndexOutOfRange, "edge endpoint outside vertex range: " + line);
    }
    --u;
    --v;
    if (graph_of[u] != graph_of[v]) {
      throw ValidationError(Errc::InvalidEdge, "edge crosses graphs: " + line);
    }
    int a = local_id[u], b = local_id[v];
    if (a == b) throw ValidationError(Errc::InvalidEdge, "self-loop: " + line);
    if (a > b) std::swap(a, b);
    edges[graph_of[u]].insert({a, b});  // both directions collapse here
  }

  // Node labels: categorical ints by convention.
  std::vector<double> node_labels;
  bool have_node_labels = false;
  const fs::path node_label_path = tu_file(dir, "_node_labels.txt");
  if (fs::exists(node_label_path)) {
    const auto lines = read_lines(node_label_path);
    if (static_cast<int>(lines.size()) != total_vertices) {
      throw ValidationError(Errc::IndexOutOfRange, "node label count != vertex count");
    }
    node_labels.reserve(lines.size());
    for (const auto& line : lines) node_labels.push_back(std::stod(line));
    have_node_labels = true;
  }

  Dataset ds;
  ds.name = dir.filename().string();
  ds.class_labels.reserve(num_graphs);
  for (const auto& line : class_lines) ds.class_labels.push_back(std::stoi(line));

  std::map<double, int> categories;
  if (have_node_labels && options.one_hot_node_labels) {
    for (const double val : node_labels) categories.emplace(val, 0);
    int next = 0;
    for (auto& [val, idx] : categories) idx = next++;
  }

  std::vector<std::vector<int>> members(num_graphs);
  for (int v = 0; v < total_vertices; ++v) members[graph_of[v]].push_back(v);

  ds.graphs.reserve(num_graphs);
  for (int gid = 0; gid < num_graphs; ++gid) {
    const int n = graph_size[gid];
    Matrix labels;
    if (have_node_labels) {
      if (options.one_hot_node_labels) {
        labels = Matrix::Zero(n, static_cast<int>(categories.size()));
        for (const int v : members[gid]) labels(local_id[v], categories.at(node_labels[v])) = 1.0;
      } else {
        labels.resize(n, 1);
        for (const int v : members[gid]) labels(local_id[v], 0) = node_labels[v];
      }
    }
    LabeledGraph g = make_graph(n, {edges[gid].begin(), edges[gid].end()}, std::move(labels));
    if (!have_node_labels) {
      for (int v = 0; v < n; ++v) g.labels(v, 0) = g.degree(v);
    }
    ds.graphs.push_back(std::move(g));
  }
  return ds;
}

LabeledGraph apply_label_scheme(const LabeledGraph& g, LabelScheme scheme) {
  switch (scheme) {
    case LabelScheme::Raw:
      return g;
    case LabelScheme::Degree: {
      LabeledGraph out = g;
      out.labels.resize(g.n, 1);
      for (int v = 0; v < g.n; ++v) out.labels(v, 0) = g.degree(v);
      return out;
    }
    case LabelScheme::F2:
      return relabel(g, RelabelScheme::ScalarF2);
    case LabelScheme::G:
      return relabel(g, RelabelScheme::VectorG);
  }
  throw ValidationError(Errc::InvalidArgument, "unknown label scheme");
}

DistanceMatrixResult distance_matrix(const Dataset& ds, DistanceMethod method, int k, double q,
                                     LabelScheme labels, int jobs) {
  const int count = static_cast<int>(ds.graphs.size());
  if (count == 0) throw ValidationError(Errc::EmptyDistribution, "dataset has no graphs");

  std::vector<LabeledGraph> prepared;
  prepared.reserve(count);
  for (const auto& g : ds.graphs) prepared.push_back(apply_label_scheme(g, labels));

  // Chains are shared across pairs, so build them once.
  std::vector<Lmmc> chains;
  if (method != DistanceMethod::WwlHat) {
    chains.reserve(count);
    for (const auto& g : prepared) chains.push_back(graph_to_lmmc(g, q));
  }

  DistanceMatrixResult result;
  result.entries = Matrix::Zero(count, count);
  result.method = method;
  result.k = k;
  result.q = q;
  result.labels = labels;

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(count) * (count - 1) / 2);
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) pairs.emplace_back(i, j);

  util::parallel_for(static_cast<std::int64_t>(pairs.size()), jobs, [&](std::int64_t idx) {
    const auto [i, j] = pairs[static_cast<size_t>(idx)];
    try {
      double d = 0.0;
      switch (method) {
        case DistanceMethod::Wl: d = wl_distance(chains[i], chains[j], k); break;
        case DistanceMethod::Wllb: d = wllb_distance(chains[i], chains[j], k); break;
        case DistanceMethod::WwlHat: d = wwl_hat_distance(prepared[i], prepared[j], k); break;
      }
      result.entries(i, j) = d;
      result.entries(j, i) = d;
    } catch (const ValidationError& e) {
      std::ostringstream os;
      os << "pair (" << i << "," << j << "): " << e.what();
      throw ValidationError(e.kind(), os.str());
    }
  });
  return result;
}

KnnResult knn_classify(const Matrix& distances, const std::vector<int>& class_labels, int folds,
                       std::uint64_t seed) {
  const int count = static_cast<int>(class_labels.size());
  if (distances.rows() != count || distances.cols() != count) {
    throw ValidationError(Errc::ShapeMismatch, "distance matrix does not match label count");
  }
  if (folds < 2) throw ValidationError(Errc::InvalidArgument, "need at least 2 folds");

  // Stratified assignment: shuffle within each class, deal round-robin.
  std::mt19937_64 rng(seed);
  std::vector<int> fold_of(count, -1);
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < count; ++i) by_class[class_labels[i]].push_back(i);
  for (auto& [cls, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    for (size_t p = 0; p < members.size(); ++p)
      fold_of[members[p]] = static_cast<int>(p % folds);
  }

  KnnResult result;
  result.fold_accuracy.resize(folds, 0.0);
  for (int f = 0; f < folds; ++f) {
    std::set<int> train_classes;
    for (int i = 0; i < count; ++i)
      if (fold_of[i] != f) train_classes.insert(class_labels[i]);
    for (const auto& [cls, members] : by_class) {
      if (!train_classes.count(cls)) {
        std::ostringstream os;
        os << "class " << cls << " is absent from the training split of fold " << f;
        throw ValidationError(Errc::DegenerateFold, os.str());
      }
    }
    int correct = 0, tested = 0;
    for (int i = 0; i < count; ++i) {
      if (fold_of[i] != f) continue;
      int best = -1;
      for (int j = 0; j < count; ++j) {
        if (fold_of[j] == f) continue;
        if (best < 0 || distances(i, j) < distances(i, best)) best = j;
      }
      ++tested;
      if (class_labels[best] == class_labels[i]) ++correct;
    }
    result.fold_accuracy[f] = tested > 0 ? static_cast<double>(correct) / tested : 1.0;
  }
  double mean = 0.0;
  for (const double a : result.fold_accuracy) mean += a;
  mean /= folds;
  double var = 0.0;
  for (const double a : result.fold_accuracy) var += (a - mean) * (a - mean);
  result.mean = mean;
  result.stddev = std::sqrt(var / folds);
  return result;
}

Matrix kernel_export(const Matrix& distances, double gamma) {
  if (gamma <= 0.0) throw ValidationError(Errc::InvalidArgument, "gamma must be positive");
  return (-gamma * distances.array()).exp();
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot write " + path);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      std::fprintf(f, j + 1 < m.cols() ? "%.17g," : "%.17g\n", m(i, j));
    }
  }
  std::fclose(f);
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream is(line);
    std::string cellText;
    while (std::getline(is, cellText, ',')) {
      try {
        row.push_back(std::stod(cellText));
      } catch (const std::exception&) {
        throw ValidationError(Errc::ParseError, path + ": bad cell '" + cellText + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ValidationError(Errc::ParseError, path + ": ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(Errc::ParseError, path + ": empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

void write_sidecar_json(const std::string& csv_path, const DistanceMatrixResult& result,
                        const std::string& dataset_name) {
  json j;
  j["method"] = method_name(result.method);
  j["k"] = result.k;
  j["q"] = result.q;
  j["labels"] = label_scheme_name(result.labels);
  j["dataset"] = dataset_name;
  j["n"] = result.entries.rows();
  std::ofstream out(csv_path + ".json");
  if (!out) throw IoError("cannot write " + csv_path + ".json");
  out << j.dump(2) << "\n";
}

std::vector<int> read_class_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<int> classes;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    try {
      classes.push_back(std::stoi(line));
    } catch (const std::exception&) {
      throw ValidationError(Errc::ParseError, path + ": bad class '" + line + "'");
    }
  }
  return classes;
}

}  // namespace wlmc
