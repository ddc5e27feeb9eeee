#include "wlmc/mcnn.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>

namespace wlmc {

using nlohmann::json;

Vector LipschitzMap::operator()(const Vector& x) const {
  if (x.size() != in_dim()) {
    throw ValidationError(Errc::DimensionMismatch, "map input dimension mismatch");
  }
  Vector y = weight * x + bias;
  switch (nonlinearity) {
    case Nonlinearity::Identity:
      break;
    case Nonlinearity::Abs:
      y = y.cwiseAbs();
      break;
    case Nonlinearity::Relu:
      y = y.cwiseMax(0.0);
      break;
  }
  return y;
}

double LipschitzMap::lipschitz_bound() const {
  if (weight.size() == 0) return 0.0;
  return weight.jacobiSvd().singularValues()(0);
}

LipschitzMap LipschitzMap::identity(int dim) {
  return LipschitzMap{Matrix::Identity(dim, dim), Vector::Zero(dim), Nonlinearity::Identity};
}

void check_spec(const McnnSpec& spec, int input_dim) {
  int dim = input_dim;
  for (size_t l = 0; l < spec.layers.size(); ++l) {
    if (spec.layers[l].in_dim() != dim) {
      std::ostringstream os;
      os << "layer " << l << " expects dimension " << spec.layers[l].in_dim() << ", got " << dim;
      throw ValidationError(Errc::DimensionMismatch, os.str());
    }
    dim = spec.layers[l].out_dim();
  }
  if (spec.readout_phi.in_dim() != dim) {
    throw ValidationError(Errc::DimensionMismatch, "readout does not compose with the last layer");
  }
  if (spec.readout_psi.in_dim() != spec.readout_phi.out_dim() || spec.readout_psi.out_dim() != 1) {
    throw ValidationError(Errc::DimensionMismatch, "scalar head must map the readout to R");
  }
}

Vector q_phi(const LipschitzMap& phi, const ProbVec& weights, const Matrix& points) {
  if (weights.size() != points.rows()) {
    throw ValidationError(Errc::DimensionMismatch, "weights and points disagree in length");
  }
  if (points.cols() != phi.in_dim()) {
    throw ValidationError(Errc::DimensionMismatch, "point dimension does not match the map");
  }
  Vector acc = Vector::Zero(phi.out_dim());
  for (int i = 0; i < points.rows(); ++i) {
    const double w = weights[i];
    if (w > 0.0) acc += w * phi(points.row(i).transpose());
  }
  return acc;
}

Lmmc apply_F(const LipschitzMap& phi, const Lmmc& x) {
  if (phi.in_dim() != x.label_dim()) {
    throw ValidationError(Errc::DimensionMismatch, "map does not match the label dimension");
  }
  Matrix labels(x.size(), phi.out_dim());
  for (int v = 0; v < x.size(); ++v) {
    labels.row(v) = q_phi(phi, ProbVec(x.kernel().row(v)), x.labels()).transpose();
  }
  return x.with_labels(std::move(labels));
}

Vector mcnn_embed(const McnnSpec& spec, const Lmmc& x) {
  check_spec(spec, x.label_dim());
  Lmmc current = x;
  for (const auto& layer : spec.layers) current = apply_F(layer, current);
  return q_phi(spec.readout_phi, current.stationary(), current.labels());
}

double mcnn_forward(const McnnSpec& spec, const Lmmc& x) {
  return spec.readout_psi(mcnn_embed(spec, x))(0);
}

namespace {

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

Vector stack(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

LipschitzMap combine_maps(const LipschitzMap& a, const LipschitzMap& b, bool shared_input) {
  if (a.nonlinearity != b.nonlinearity) {
    throw ValidationError(Errc::InvalidArgument, "cannot combine maps with different nonlinearities");
  }
  LipschitzMap out;
  if (shared_input) {
    if (a.in_dim() != b.in_dim()) {
      throw ValidationError(Errc::DimensionMismatch, "shared input dimensions differ");
    }
    out.weight = Matrix(a.out_dim() + b.out_dim(), a.in_dim());
    out.weight << a.weight, b.weight;
  } else {
    out.weight = block_diag(a.weight, b.weight);
  }
  out.bias = stack(a.bias, b.bias);
  out.nonlinearity = a.nonlinearity;
  return out;
}

}  // namespace

McnnSpec combine_specs(const McnnSpec& a, const McnnSpec& b) {
  if (a.layers.size() != b.layers.size()) {
    throw ValidationError(Errc::InvalidArgument, "layer counts differ");
  }
  McnnSpec out;
  out.layers.reserve(a.layers.size());
  for (size_t l = 0; l < a.layers.size(); ++l) {
    out.layers.push_back(combine_maps(a.layers[l], b.layers[l], l == 0));
  }
  out.readout_phi = combine_maps(a.readout_phi, b.readout_phi, a.layers.empty());
  // The combined head is left as a placeholder; callers split the embed.
  out.readout_psi = LipschitzMap{Matrix::Zero(1, out.readout_phi.out_dim()), Vector::Zero(1),
                                 Nonlinearity::Identity};
  return out;
}

namespace {

json map_to_json(const LipschitzMap& map) {
  json j;
  j["rows"] = map.out_dim();
  j["cols"] = map.in_dim();
  std::vector<double> w;
  w.reserve(static_cast<size_t>(map.weight.size()));
  for (int r = 0; r < map.weight.rows(); ++r)
    for (int c = 0; c < map.weight.cols(); ++c) w.push_back(map.weight(r, c));
  j["weight"] = w;
  j["bias"] = std::vector<double>(map.bias.data(), map.bias.data() + map.bias.size());
  switch (map.nonlinearity) {
    case Nonlinearity::Identity: j["nonlinearity"] = "identity"; break;
    case Nonlinearity::Abs: j["nonlinearity"] = "abs"; break;
    case Nonlinearity::Relu: j["nonlinearity"] = "relu"; break;
  }
  return j;
}

LipschitzMap map_from_json(const json& j) {
  LipschitzMap map;
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto w = j.at("weight").get<std::vector<double>>();
  const auto b = j.at("bias").get<std::vector<double>>();
  if (rows < 1 || cols < 1 || static_cast<int>(w.size()) != rows * cols ||
      static_cast<int>(b.size()) != rows) {
    throw ValidationError(Errc::ParseError, "malformed layer block");
  }
  map.weight.resize(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) map.weight(r, c) = w[static_cast<size_t>(r) * cols + c];
  map.bias = Eigen::Map<const Vector>(b.data(), rows);
  const std::string nl = j.value("nonlinearity", "identity");
  if (nl == "identity") map.nonlinearity = Nonlinearity::Identity;
  else if (nl == "abs") map.nonlinearity = Nonlinearity::Abs;
  else if (nl == "relu") map.nonlinearity = Nonlinearity::Relu;
  else throw ValidationError(Errc::ParseError, "unknown nonlinearity: " + nl);
  return map;
}

}  // namespace

std::string mcnn_to_json(const McnnSpec& spec) {
  json j;
  j["layers"] = json::array();
  for (const auto& layer : spec.layers) j["layers"].push_back(map_to_json(layer));
  j["readout_phi"] = map_to_json(spec.readout_phi);
  j["readout_psi"] = map_to_json(spec.readout_psi);
  return j.dump(2);
}

McnnSpec mcnn_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(Errc::ParseError, e.what());
  }
  try {
    McnnSpec spec;
    for (const auto& layer : j.at("layers")) spec.layers.push_back(map_from_json(layer));
    spec.readout_phi = map_from_json(j.at("readout_phi"));
    spec.readout_psi = map_from_json(j.at("readout_psi"));
    return spec;
  } catch (const json::exception& e) {
    throw ValidationError(Errc::ParseError, e.what());
  }
}

}  // namespace wlmc
