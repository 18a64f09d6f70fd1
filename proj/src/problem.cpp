#include "asprox/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace asprox {

namespace {

void check_index(const dataset &data, std::size_t i) {
  if (i >= data.size())
    throw std::invalid_argument("example index " + std::to_string(i) +
                                " out of range");
}

void check_dim(const dataset &data, const Eigen::VectorXd &x) {
  if (static_cast<std::size_t>(x.size()) != data.dim())
    throw std::invalid_argument("iterate has dimension " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(data.dim()));
}

}  // namespace

dataset::dataset(std::vector<sparse_row> rows, std::vector<int> labels,
                 std::size_t dim)
    : rows_(std::move(rows)), labels_(std::move(labels)), dim_(dim) {
  if (rows_.empty()) throw std::invalid_argument("dataset has no examples");
  if (dim_ == 0) throw std::invalid_argument("dataset dimension must be >= 1");
  if (rows_.size() != labels_.size())
    throw std::invalid_argument("row count and label count differ");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (labels_[i] != 1 && labels_[i] != -1)
      throw std::invalid_argument("label of example " + std::to_string(i) +
                                  " is not -1 or +1");
    const auto &r = rows_[i];
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k].index >= dim_)
        throw std::invalid_argument("feature index out of range in example " +
                                    std::to_string(i));
      if (k > 0 && r[k].index <= r[k - 1].index)
        throw std::invalid_argument(
            "feature indices not strictly increasing in example " +
            std::to_string(i));
    }
  }
}

double dataset::row_norm(std::size_t i) const {
  double s = 0.0;
  for (const auto &e : rows_[i]) s += e.value * e.value;
  return std::sqrt(s);
}

double dataset::dot(std::size_t i, const Eigen::VectorXd &x) const {
  double s = 0.0;
  for (const auto &e : rows_[i]) s += e.value * x[e.index];
  return s;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double loss_derivative(double z, int y) {
  const double s = sigmoid(z);
  const double yd = static_cast<double>(y);
  return -2.0 * (1.0 - yd * s) * yd * s * (1.0 - s);
}

double loss_single(const dataset &data, std::size_t i,
                   const Eigen::VectorXd &x) {
  check_index(data, i);
  check_dim(data, x);
  const double r = 1.0 - data.label(i) * sigmoid(data.dot(i, x));
  return r * r;
}

Eigen::VectorXd grad_single(const dataset &data, std::size_t i,
                            const Eigen::VectorXd &x) {
  check_index(data, i);
  check_dim(data, x);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
  const double c = loss_derivative(data.dot(i, x), data.label(i));
  for (const auto &e : data.row(i)) g[e.index] = c * e.value;
  return g;
}

double loss_value(const dataset &data, const Eigen::VectorXd &x) {
  check_dim(data, x);
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = 1.0 - data.label(i) * sigmoid(data.dot(i, x));
    const double y = r * r - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(data.size());
}

Eigen::VectorXd grad_full(const dataset &data, const Eigen::VectorXd &x) {
  check_dim(data, x);
  const auto d = x.size();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd comp = Eigen::VectorXd::Zero(d);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double c = loss_derivative(data.dot(i, x), data.label(i));
    for (const auto &e : data.row(i)) {
      const double y = c * e.value - comp[e.index];
      const double t = sum[e.index] + y;
      comp[e.index] = (t - sum[e.index]) - y;
      sum[e.index] = t;
    }
  }
  return sum / static_cast<double>(data.size());
}

loss_constants compute_loss_constants(const dataset &data) {
  const auto n = static_cast<Eigen::Index>(data.size());
  loss_constants c;
  c.G.resize(n);
  c.L.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double norm = data.row_norm(static_cast<std::size_t>(i));
    c.G[i] = c.cG * norm;
    c.L[i] = c.cL * norm * norm;
  }
  c.L_tilde = c.L.mean();
  return c;
}

void sigmoid_squared_loss::add_gradient(std::size_t i, const Eigen::VectorXd &x,
                                        double scale,
                                        Eigen::VectorXd &out) const {
  const double c = scale * loss_derivative(data_.dot(i, x), data_.label(i));
  for (const auto &e : data_.row(i)) out[e.index] += c * e.value;
}

void sigmoid_squared_loss::add_gradient_difference(
    std::size_t i, const Eigen::VectorXd &x_new, const Eigen::VectorXd &x_old,
    double scale, Eigen::VectorXd &out) const {
  const int y = data_.label(i);
  const double c = scale * (loss_derivative(data_.dot(i, x_new), y) -
                            loss_derivative(data_.dot(i, x_old), y));
  for (const auto &e : data_.row(i)) out[e.index] += c * e.value;
}

}  // namespace asprox
