#ifndef ASPROX_PROBLEM_HPP
#define ASPROX_PROBLEM_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace asprox {

struct sparse_entry {
  std::uint32_t index;
  double value;

  friend bool operator==(const sparse_entry &, const sparse_entry &) = default;
};

using sparse_row = std::vector<sparse_entry>;

/// Binary classification data: sparse rows a_i sorted by feature index and
/// labels y_i in {-1, +1}. Immutable once constructed.
class dataset {
 public:
  /// Throws std::invalid_argument if a label is not +-1, a feature index is
  /// outside [0, dim), indices within a row are not strictly increasing, the
  /// row/label counts differ, or the set is empty.
  dataset(std::vector<sparse_row> rows, std::vector<int> labels,
          std::size_t dim);

  std::size_t size() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  const sparse_row &row(std::size_t i) const { return rows_[i]; }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<sparse_row> &rows() const { return rows_; }
  const std::vector<int> &labels() const { return labels_; }

  double row_norm(std::size_t i) const;
  double dot(std::size_t i, const Eigen::VectorXd &x) const;

  friend bool operator==(const dataset &, const dataset &) = default;

 private:
  std::vector<sparse_row> rows_;
  std::vector<int> labels_;
  std::size_t dim_;
};

// Curvature bounds of h(z) = (1 - y sigmoid(z))^2 over z in R and y in {-1, +1}.
//
// gradient_curvature_bound = max |h'(z)|. For y = -1 with s = sigmoid(z),
// |h'| = 2 s (1 - s^2), maximized at s = 1/sqrt(3) giving 4 / (3 sqrt(3)).
// The y = +1 branch peaks lower (8/27).
//
// hessian_curvature_bound = max |h''(z)|, attained for y = -1 near
// z = -0.947022. Located by dense 1-D search followed by root refinement of
// h''' at 40 significant digits; the stored value is rounded up in the last
// place so it stays a valid upper bound in double precision.
inline constexpr double gradient_curvature_bound = 0.76980035891950102;
inline constexpr double hessian_curvature_bound = 0.30836848257227670;

/// Numerically stable logistic function.
double sigmoid(double z);

/// h'(z) for the sigmoid-squared loss with label y.
double loss_derivative(double z, int y);

/// (1 - y_i sigmoid(a_i^T x))^2
double loss_single(const dataset &data, std::size_t i, const Eigen::VectorXd &x);

/// Gradient of loss_single; only touches nonzero coordinates of a_i.
Eigen::VectorXd grad_single(const dataset &data, std::size_t i,
                            const Eigen::VectorXd &x);

/// f(x) = mean of loss_single over all examples (compensated summation).
double loss_value(const dataset &data, const Eigen::VectorXd &x);

/// Mean of grad_single over all examples (compensated summation, fixed
/// order).
Eigen::VectorXd grad_full(const dataset &data, const Eigen::VectorXd &x);

struct loss_constants {
  Eigen::VectorXd G;  ///< per-example gradient-norm bounds
  Eigen::VectorXd L;  ///< per-example smoothness bounds
  double L_tilde;     ///< mean of L
  double cG = gradient_curvature_bound;
  double cL = hessian_curvature_bound;
};

/// G_i = cG ||a_i||, L_i = cL ||a_i||^2.
loss_constants compute_loss_constants(const dataset &data);

/// Smooth finite-sum f(x) = (1/n) sum f_i(x) as seen by the optimizers.
///
/// add_gradient and add_gradient_difference are the only incremental
/// first-order oracle (IFO) entry points; each call is one IFO. value and
/// gradient are measurement helpers and are not charged.
class finite_sum {
 public:
  virtual ~finite_sum() = default;

  virtual std::size_t size() const = 0;
  virtual std::size_t dim() const = 0;

  /// out += scale * grad f_i(x)
  virtual void add_gradient(std::size_t i, const Eigen::VectorXd &x,
                            double scale, Eigen::VectorXd &out) const = 0;

  /// out += scale * (grad f_i(x_new) - grad f_i(x_old))
  ///
  /// Charged as a single IFO: the recursive estimators evaluate index i at
  /// two consecutive iterates per step.
  virtual void add_gradient_difference(std::size_t i,
                                       const Eigen::VectorXd &x_new,
                                       const Eigen::VectorXd &x_old,
                                       double scale,
                                       Eigen::VectorXd &out) const = 0;

  virtual double value(const Eigen::VectorXd &x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd &x) const = 0;
};

/// The sigmoid-squared classification loss over a dataset. Holds a reference;
/// the dataset must outlive this object.
class sigmoid_squared_loss final : public finite_sum {
 public:
  explicit sigmoid_squared_loss(const dataset &data) : data_(data) {}

  std::size_t size() const override { return data_.size(); }
  std::size_t dim() const override { return data_.dim(); }

  void add_gradient(std::size_t i, const Eigen::VectorXd &x, double scale,
                    Eigen::VectorXd &out) const override;
  void add_gradient_difference(std::size_t i, const Eigen::VectorXd &x_new,
                               const Eigen::VectorXd &x_old, double scale,
                               Eigen::VectorXd &out) const override;

  double value(const Eigen::VectorXd &x) const override {
    return loss_value(data_, x);
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd &x) const override {
    return grad_full(data_, x);
  }

  const dataset &data() const { return data_; }

 private:
  const dataset &data_;
};

}  // namespace asprox

#endif  // ASPROX_PROBLEM_HPP
