#pragma once

#include <cstddef>
#include <vector>

namespace kmdesign::detail {

// Real relaxation of M x = r with 0 <= x <= 1, used by the solver to prune.
// Nothing here may declare a feasible 0-1 system infeasible: echelon rows
// are only used with a tolerance, and an LP infeasibility verdict is
// accepted only with a checked Farkas certificate.
class Relaxation {
 public:
  void reset(std::size_t rows, std::size_t cols);
  double& at(std::size_t i, std::size_t q) { return m_[i * cols_ + q]; }
  double& rhs(std::size_t i) { return r_[i]; }

  struct Fix {
    std::size_t column;
    bool value;
  };

  // Reduces a copy to row echelon form (pivots in column order) and checks
  // each row against the range its 0-1 variables can reach. Returns -1 when
  // some row is out of range; otherwise fills `fixes` with forced values.
  int echelon(std::vector<Fix>& fixes);

  // Phase-one bounded simplex on the rows echelon() left independent; call
  // echelon() first. False only with a verified certificate.
  bool feasible();

 private:
  void aggregate(const std::vector<double>& y);
  bool out_of_range(std::size_t pinned, bool value) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> m_;
  std::vector<double> r_;

  std::vector<double> e_;
  std::vector<double> t_;
  std::vector<double> d_;
  std::vector<std::size_t> basis_;
  std::vector<char> upper_;
  std::vector<char> basic_;
  std::vector<double> y_;
  std::vector<double> sign_;
  std::size_t rank_ = 0;
  std::vector<double> agg_c_;
  double agg_d_ = 0;
  double agg_tol_ = 0;
};

}  // namespace kmdesign::detail
