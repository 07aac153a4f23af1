#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "hcd/baselines.hpp"
#include "hcd/error.hpp"

namespace hcd {

namespace {

constexpr double kRidge = 1e-12;

struct Candidate {
  double objective = 0.0;
  std::vector<std::size_t> support;
  std::vector<double> coef;
};

class RestrictedSolver {
 public:
  explicit RestrictedSolver(const Problem& problem)
      : d_(Eigen::Map<const Eigen::MatrixXd>(problem.dictionary.values().data(),
                                             static_cast<Eigen::Index>(problem.dim()),
                                             static_cast<Eigen::Index>(problem.atoms()))),
        x_(Eigen::Map<const Eigen::VectorXd>(problem.signal.values().data(),
                                             static_cast<Eigen::Index>(problem.dim()))) {
    gram_ = d_.transpose() * d_;
    corr_ = d_.transpose() * x_;
  }

  // Least-squares coefficients on `support` and 1/2 ||x - D_S a||^2.
  std::pair<Eigen::VectorXd, double> fit(const std::vector<std::size_t>& support) const {
    const auto k = static_cast<Eigen::Index>(support.size());
    if (k == 0) return {Eigen::VectorXd(), 0.5 * x_.squaredNorm()};

    Eigen::MatrixXd g(k, k);
    Eigen::VectorXd c(k);
    for (Eigen::Index a = 0; a < k; ++a) {
      const auto ia = static_cast<Eigen::Index>(support[a]);
      c(a) = corr_(ia);
      for (Eigen::Index b = 0; b < k; ++b) g(a, b) = gram_(ia, static_cast<Eigen::Index>(support[b]));
    }

    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (!well_conditioned(llt, g)) {
      g.diagonal().array() += kRidge;
      llt.compute(g);
      if (llt.info() != Eigen::Success) {
        throw SingularSystemError("restricted normal equations are singular even with ridge");
      }
    }
    Eigen::VectorXd coef = llt.solve(c);

    Eigen::VectorXd r = x_;
    for (Eigen::Index a = 0; a < k; ++a) r -= d_.col(static_cast<Eigen::Index>(support[a])) * coef(a);
    return {std::move(coef), 0.5 * r.squaredNorm()};
  }

 private:
  static bool well_conditioned(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& g) {
    if (llt.info() != Eigen::Success) return false;
    const Eigen::MatrixXd l = llt.matrixL();
    const double scale = g.diagonal().maxCoeff();
    return l.diagonal().array().square().minCoeff() > 1e-14 * scale;
  }

  Eigen::Map<const Eigen::MatrixXd> d_;
  Eigen::Map<const Eigen::VectorXd> x_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd corr_;
};

bool better(double objective, const std::vector<std::size_t>& support, const Candidate& best) {
  if (objective != best.objective) return objective < best.objective;
  return std::lexicographical_compare(support.begin(), support.end(), best.support.begin(),
                                      best.support.end());
}

// Advances `comb` to the next k-combination of [0, n) in lexicographic order.
bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

OracleResult brute_force_l0(const Problem& problem, double lambda, std::size_t max_support) {
  validate_dimensions(problem);
  if (lambda < 0.0) throw ParameterError("lambda must be nonnegative");
  const std::size_t atoms = problem.atoms();
  if (!(atoms <= 20 || max_support <= 4)) {
    throw BudgetError("exhaustive search over K=" + std::to_string(atoms) +
                      " with max_support=" + std::to_string(max_support) +
                      " exceeds budget (need K <= 20 or max_support <= 4)");
  }
  max_support = std::min(max_support, atoms);

  const RestrictedSolver solver(problem);
  Candidate best;
  best.objective = solver.fit({}).second;
  std::size_t evaluated = 1;

  for (std::size_t k = 1; k <= max_support; ++k) {
    std::vector<std::size_t> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    do {
      auto [coef, loss] = solver.fit(comb);
      const double obj = loss + lambda * static_cast<double>(k);
      ++evaluated;
      if (better(obj, comb, best)) {
        best.objective = obj;
        best.support = comb;
        best.coef.assign(coef.data(), coef.data() + coef.size());
      }
    } while (next_combination(comb, atoms));
  }

  OracleResult result;
  result.alpha = DenseVector(atoms);
  for (std::size_t a = 0; a < best.support.size(); ++a) result.alpha[best.support[a]] = best.coef[a];
  // A fitted coefficient can round to exactly zero; keep the l0 count honest.
  result.support = ActiveSet::from_pattern(result.alpha);
  result.objective = objective(problem, result.alpha, lambda);
  result.supports_evaluated = evaluated;
  return result;
}

}  // namespace hcd
