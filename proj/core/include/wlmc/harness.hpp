#ifndef WLMC_HARNESS_HPP
#define WLMC_HARNESS_HPP

#include "wlmc/core.hpp"
#include "wlmc/graphs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wlmc {

struct Dataset {
  std::vector<LabeledGraph> graphs;
  std::vector<int> class_labels;
  std::string name;
};

/// Edge-list JSON: {"n": int, "edges": [[u,v],...], "labels": [[..],..]?}.
/// Missing labels default to the constant label 1.
LabeledGraph load_edgelist_json(const std::string& path);

struct TuOptions {
  bool one_hot_node_labels = true;  // categorical node labels become one-hot
};

/// TUDataset flat files: DS_A.txt (1-indexed edge list, both directions
/// accepted), DS_graph_indicator.txt, DS_graph_labels.txt, and optionally
/// DS_node_labels.txt. Vertices are renumbered to 0-based local ids; when
/// node labels are absent, degree labels are synthesized.
Dataset load_tudataset(const std::string& dir, const TuOptions& options = {});

enum class DistanceMethod { Wl, Wllb, WwlHat };
enum class LabelScheme { Raw, Degree, F2, G };

struct DistanceMatrixResult {
  Matrix entries;  // N x N, symmetric, zero diagonal
  DistanceMethod method = DistanceMethod::Wl;
  int k = 1;
  double q = 0.6;
  LabelScheme labels = LabelScheme::Raw;
};

LabeledGraph apply_label_scheme(const LabeledGraph& g, LabelScheme scheme);

/// Pairwise distances over the dataset; the upper triangle is computed in
/// parallel (jobs <= 0 uses all cores) and mirrored. Values are independent
/// of the schedule. A failing pair aborts with its indices attached.
DistanceMatrixResult distance_matrix(const Dataset& ds, DistanceMethod method, int k, double q,
                                     LabelScheme labels, int jobs = 1);

struct KnnResult {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> fold_accuracy;
};

/// Stratified k-fold 1-NN classification by distance-matrix lookup; the fold
/// assignment is a seeded shuffle, ties break toward the lowest index.
KnnResult knn_classify(const Matrix& distances, const std::vector<int>& class_labels, int folds,
                       std::uint64_t seed);

/// Entrywise exp(-gamma * d); no positive-semidefinite correction.
Matrix kernel_export(const Matrix& distances, double gamma);

/// Plain CSV, 17 significant digits, no header.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

/// Records method/params next to an exported matrix.
void write_sidecar_json(const std::string& csv_path, const DistanceMatrixResult& result,
                        const std::string& dataset_name);

std::vector<int> read_class_file(const std::string& path);

const char* method_name(DistanceMethod m);
const char* label_scheme_name(LabelScheme s);

}  // namespace wlmc

#endif  // WLMC_HARNESS_HPP
