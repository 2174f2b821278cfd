#include "relaxation.hpp"

#include <algorithm>
#include <cmath>

namespace kmdesign::detail {

namespace {

constexpr double kZero = 1e-9;
// Switch from steepest to Bland's rule after this many pivots.
constexpr int kBlandAfter = 500;

}  // namespace

void Relaxation::reset(std::size_t rows, std::size_t cols) {
  rows_ = rows;
  cols_ = cols;
  m_.assign(rows * cols, 0.0);
  r_.assign(rows, 0.0);
}

// y^T (M | r) as one equation on the original data, with a tolerance
// well above the rounding error of these sums.
void Relaxation::aggregate(const std::vector<double>& y) {
  agg_d_ = 0;
  double scale = 1;
  for (std::size_t i = 0; i < rows_; ++i) {
    agg_d_ += y[i] * r_[i];
    scale += std::fabs(y[i] * r_[i]);
  }
  agg_c_.assign(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (y[i] == 0) continue;
    for (std::size_t q = 0; q < cols_; ++q) agg_c_[q] += y[i] * m_[i * cols_ + q];
  }
  for (double c : agg_c_) scale += std::fabs(c);
  agg_tol_ = 1e-9 * scale;
}

// True when the aggregated equation has no 0-1 solution; `pinned` (if
// below cols_) is held at `value`.
bool Relaxation::out_of_range(std::size_t pinned, bool value) const {
  double lo = 0;
  double hi = 0;
  for (std::size_t q = 0; q < cols_; ++q) {
    if (q == pinned) continue;
    (agg_c_[q] < 0 ? lo : hi) += agg_c_[q];
  }
  if (pinned < cols_ && value) {
    lo += agg_c_[pinned];
    hi += agg_c_[pinned];
  }
  return agg_d_ < lo - agg_tol_ || agg_d_ > hi + agg_tol_;
}

int Relaxation::echelon(std::vector<Fix>& fixes) {
  fixes.clear();
  // [M | r | I]: the identity block records the row multipliers.
  const std::size_t w = cols_ + 1 + rows_;
  e_.assign(rows_ * w, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::copy_n(m_.data() + i * cols_, cols_, e_.data() + i * w);
    e_[i * w + cols_] = r_[i];
    e_[i * w + cols_ + 1 + i] = 1.0;
  }
  std::size_t rank = 0;
  for (std::size_t q = 0; q < cols_ && rank < rows_; ++q) {
    std::size_t piv = rank;
    double best = 0;
    for (std::size_t i = rank; i < rows_; ++i) {
      const double v = std::fabs(e_[i * w + q]);
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best < kZero) continue;
    if (piv != rank) std::swap_ranges(e_.begin() + piv * w, e_.begin() + (piv + 1) * w, e_.begin() + rank * w);
    double* pr = e_.data() + rank * w;
    const double inv = 1.0 / pr[q];
    for (std::size_t c = 0; c < w; ++c) pr[c] *= inv;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == rank) continue;
      double* ri = e_.data() + i * w;
      const double f = ri[q];
      if (std::fabs(f) < 1e-15) continue;
      for (std::size_t c = 0; c < w; ++c) ri[c] -= f * pr[c];
    }
    ++rank;
  }
  rank_ = rank;

  const double eps = 1e-7;
  y_.resize(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = e_.data() + i * w;
    double lo = 0;
    double hi = 0;
    for (std::size_t q = 0; q < cols_; ++q) (row[q] < 0 ? lo : hi) += row[q];
    const double d = row[cols_];
    std::copy_n(row + cols_ + 1, rows_, y_.begin());
    if (d < lo - eps || d > hi + eps) {
      aggregate(y_);
      if (out_of_range(cols_, false)) return -1;
      continue;
    }
    for (std::size_t q = 0; q < cols_; ++q) {
      const double c = row[q];
      if (std::fabs(c) < eps) continue;
      const double lo0 = lo - std::min(0.0, c);
      const double hi0 = hi - std::max(0.0, c);
      const bool zero_ok = d >= lo0 - eps && d <= hi0 + eps;
      const bool one_ok = d >= lo0 + c - eps && d <= hi0 + c + eps;
      if (zero_ok == one_ok) continue;
      // Certify: with x_q at the excluded value the aggregate must fail.
      aggregate(y_);
      if (out_of_range(q, !one_ok)) fixes.push_back({q, one_ok});
    }
  }
  return 0;
}

bool Relaxation::feasible() {
  // Works on the independent rows left by echelon().
  const std::size_t m = rank_;
  const std::size_t p = cols_;
  const std::size_t n = p + m;
  const std::size_t w = n + 1;
  const std::size_t ew = cols_ + 1 + rows_;
  t_.assign(m * w, 0.0);
  sign_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = e_.data() + i * ew;
    const double sign = row[p] < 0 ? -1.0 : 1.0;
    sign_[i] = sign;
    for (std::size_t q = 0; q < p; ++q) t_[i * w + q] = sign * row[q];
    t_[i * w + p + i] = 1.0;
    t_[i * w + n] = sign * row[p];
  }
  basis_.resize(m);
  basic_.assign(n, 0);
  upper_.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    basis_[i] = p + i;
    basic_[p + i] = 1;
  }
  // Phase one: cost 1 on each artificial.
  d_.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = j >= p ? 1.0 : 0.0;
    for (std::size_t i = 0; i < m; ++i) s -= t_[i * w + j];
    d_[j] = s;
  }

  const int max_iter = static_cast<int>(50 * n + 100);
  for (int iter = 0; iter < max_iter; ++iter) {
    double infeasibility = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] >= p) infeasibility += t_[i * w + n];
    }
    if (infeasibility < 1e-9) return true;

    std::size_t e = n;
    double best = 0;
    for (std::size_t j = 0; j < p; ++j) {
      if (basic_[j]) continue;
      const double gain = upper_[j] ? d_[j] : -d_[j];
      if (gain <= kZero) continue;
      if (iter >= kBlandAfter) {
        e = j;
        break;
      }
      if (gain > best) {
        best = gain;
        e = j;
      }
    }
    if (e == n) {
      // Optimal with positive infeasibility; y = c_B^T B^-1 sits in the
      // artificial block, then back through the echelon multipliers.
      y_.assign(rows_, 0.0);
      for (std::size_t k = 0; k < m; ++k) {
        double s = 0;
        for (std::size_t i = 0; i < m; ++i) {
          if (basis_[i] >= p) s += t_[i * w + p + k];
        }
        s *= sign_[k];
        if (s == 0) continue;
        const double* mult = e_.data() + k * ew + cols_ + 1;
        for (std::size_t j = 0; j < rows_; ++j) y_[j] += s * mult[j];
      }
      aggregate(y_);
      return !out_of_range(cols_, false);
    }

    const double dir = upper_[e] ? -1.0 : 1.0;
    double theta = 1.0;
    std::size_t leave = m;
    bool leave_upper = false;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = dir * t_[i * w + e];
      const double val = t_[i * w + n];
      const bool bounded = basis_[i] < p;
      double lim;
      bool to_upper;
      if (a > kZero) {
        lim = val / a;
        to_upper = false;
      } else if (a < -kZero && bounded) {
        lim = (1.0 - val) / -a;
        to_upper = true;
      } else {
        continue;
      }
      lim = std::max(lim, 0.0);
      const bool tie = leave < m && std::fabs(lim - theta) < 1e-12;
      if (lim < theta - 1e-12 || (tie && basis_[i] < basis_[leave])) {
        theta = lim;
        leave = i;
        leave_upper = to_upper;
      }
    }

    for (std::size_t i = 0; i < m; ++i) t_[i * w + n] -= dir * theta * t_[i * w + e];
    if (leave == m) {
      upper_[e] = !upper_[e];
      continue;
    }
    const double entering_value = (upper_[e] ? 1.0 : 0.0) + dir * theta;
    double* pr = t_.data() + leave * w;
    const double inv = 1.0 / pr[e];
    for (std::size_t c = 0; c < n; ++c) pr[c] *= inv;
    pr[e] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      double* ri = t_.data() + i * w;
      const double f = ri[e];
      if (f == 0) continue;
      for (std::size_t c = 0; c < n; ++c) ri[c] -= f * pr[c];
      ri[e] = 0;
    }
    const double fd = d_[e];
    for (std::size_t c = 0; c < n; ++c) d_[c] -= fd * pr[c];
    d_[e] = 0;
    pr[n] = entering_value;

    const std::size_t old = basis_[leave];
    basis_[leave] = e;
    basic_[e] = 1;
    upper_[e] = 0;
    basic_[old] = 0;
    // A leaving artificial is never priced again.
    if (old < p) upper_[old] = leave_upper;
  }
  return true;
}

}  // namespace kmdesign::detail
