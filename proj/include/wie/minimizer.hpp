#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wie/functional.hpp"

namespace wie {

enum class Method { lbfgs, gradient_descent };
enum class SeedKind { affine, custom, random };

Method parse_method(const std::string& name);
std::string to_string(Method m);

struct MinimizeOptions {
  Method method = Method::lbfgs;
  int memory = 8;
  double grad_tol = 1e-6;
  int max_iters = 5000;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  int precond_refresh = 10;  // iterations between curvature refreshes

  SeedKind seed_kind = SeedKind::affine;
  std::optional<SpaceTimeField> custom_seed;
  std::uint64_t random_seed = 0;
  double random_amplitude = 0.1;

  void validate() const;
};

/// C_F and K*_F = K*_F(0) of a problem's forcing.
struct ForcingConstants {
  double C_F = 0.0;
  double K_star = 0.0;
};

ForcingConstants forcing_constants(const WieProblem& prob);

/// Constant bounding the weighted energy of a minimizer, assembled from the
/// seed estimate and the coercivity chain:
/// 2 (1 + B_seed + C_F + 16 K* + |w0|^2/32 + |w1|^2/8) with
/// B_seed = |grad w0|^2 + |grad w1|^2 + 2^{r-1} Gamma(r+1)(|w0|_r^r + |w1|_r^r)
///          + C_F + sqrt(K*) (2|w0|^2 + |w1|^2)^{1/2}.
double basic_energy_constant(const WieProblem& prob, const ForcingConstants& fc);

struct MinimizeResult {
  SpaceTimeField u_eps;
  double J_value = 0.0;
  double J_seed = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string status{};
  JParts parts{};
  double weighted_energy = 0.0;  // int e^{-t}((1/(2eps^2))||u''||^2 + W(u))
  double energy_bound = 0.0;     // C-bar
  ForcingConstants constants{};
  std::vector<double> history{};  // J at accepted iterates
};

/// u(t_j) = w0 + eps t_j w1.
SpaceTimeField affine_seed(const WieProblem& prob);

/// Affine seed plus a smooth random perturbation of the free layers.
SpaceTimeField random_seed(const WieProblem& prob, std::uint64_t seed, double amplitude);

MinimizeResult minimize(const WieProblem& prob, const MinimizeOptions& opts = {});

/// max(T_phys/eps, 21) + 5.
double rescaled_horizon(double T_phys, double eps);

/// Weighted rescaled grid covering rescaled_horizon(T_phys, eps).
TimeGrid rescaled_time_grid(double T_phys, double eps, double ht = 0.1);

/// w(t, x) = u(t/eps, x) by four-point Lagrange interpolation in rescaled
/// time. Throws RangeError when the physical grid reaches past eps T_resc.
SpaceTimeField rescale(const SpaceTimeField& u_eps, double eps, const TimeGrid& physical);

/// Kronecker-structured approximation of the Hessian of J on the free
/// nodes: (1/eps^2) A_t (x) M + W_t (x) K + diag(w_j c_j) (x) M, with A_t the
/// weighted second-difference Gram matrix, K the stiffness matrix and c_j a
/// spatial average of the power-term curvature on layer j.
class SeparablePreconditioner {
 public:
  explicit SeparablePreconditioner(const WieProblem& prob);
  ~SeparablePreconditioner();
  SeparablePreconditioner(const SeparablePreconditioner&) = delete;
  SeparablePreconditioner& operator=(const SeparablePreconditioner&) = delete;

  std::size_t n_free_layers() const { return n_layers_; }
  std::size_t n_free_nodes() const { return free_nodes_.size(); }
  std::size_t size() const { return n_layers_ * free_nodes_.size(); }
  const std::vector<std::size_t>& free_nodes() const { return free_nodes_; }

  /// Recomputes c_j from u and refactors.
  void update_curvature(const SpaceTimeField& u);
  const std::vector<double>& curvature() const { return c_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  void factor();

  const WieProblem* prob_;
  std::size_t n_layers_ = 0;
  std::vector<std::size_t> free_nodes_;
  Eigen::MatrixXd modes_;
  Eigen::VectorXd lambda_;
  std::vector<double> c_;
  struct Factors;
  std::unique_ptr<Factors> factors_;
};

/// Free-node values of a field in preconditioner order (layer-major).
Eigen::VectorXd pack_free(const SpaceTimeField& u, const SeparablePreconditioner& P);
void unpack_free(const Eigen::VectorXd& x, const SeparablePreconditioner& P, SpaceTimeField& u);

}  // namespace wie
