#include "kmdesign/solver.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>

#include "kmdesign/error.hpp"
#include "relaxation.hpp"

namespace kmdesign {

namespace {

// Depth at which the search tree is cut into independent subproblems.
constexpr int kSplitDepth = 8;
// Beyond this many all-zero columns the 2^z expansion of each solution is refused.
constexpr std::size_t kMaxZeroColumns = 40;
// Rows with larger residuals skip the subset-sum filter.
constexpr std::int64_t kMaxFilterTarget = 1 << 16;

using Clock = std::chrono::steady_clock;

struct Decision {
  std::size_t col;
  bool include;
};

// Either a subproblem (a decision path to replay) or a solution met while
// the frontier was being cut.
struct FrontierItem {
  std::vector<Decision> path;
  std::optional<std::vector<std::size_t>> solution;
};

struct Entry {
  std::size_t index;
  std::uint32_t value;
};

class Searcher {
 public:
  Searcher(const KmMatrix& a, const SolveRequest& req, std::optional<Clock::time_point> deadline,
           std::uint64_t limit)
      : a_(a), req_(req), deadline_(deadline), limit_(limit) {
    const std::size_t n = a.num_cols();
    col_nz_.resize(n);
    auto add_row = [&](auto&& value, std::uint64_t target) {
      const std::size_t i = target_.size();
      target_.push_back(target);
      row_nz_.emplace_back();
      for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t x = value(j);
        if (x == 0) continue;
        col_nz_[j].push_back({i, static_cast<std::uint32_t>(x)});
        row_nz_[i].push_back({j, static_cast<std::uint32_t>(x)});
      }
    };
    for (std::size_t i = 0; i < a.num_rows(); ++i) {
      add_row([&](std::size_t j) { return a.at(i, j); }, req.lambda);
    }
    num_matrix_rows_ = target_.size();
    for (const LinearConstraint& c : req.implied) {
      if (c.weights.size() != n) throw InputError("implied constraint has the wrong number of weights");
      std::uint64_t g = 0;
      for (std::uint64_t w : c.weights) g = std::gcd(g, w);
      if (g == 0) {
        if (c.target != 0) infeasible_ = true;
        continue;
      }
      if (c.target % g != 0) {
        infeasible_ = true;
        continue;
      }
      if (std::any_of(c.weights.begin(), c.weights.end(), [&](std::uint64_t w) { return w / g > UINT32_MAX; })) continue;
      add_row([&](std::size_t j) { return c.weights[j] / g; }, c.target / g);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (col_nz_[j].empty()) zero_cols_.push_back(j);
    }
    if (zero_cols_.size() > kMaxZeroColumns) throw LimitError("too many all-zero columns");
    // Echelon pivots go to the largest orbits first.
    pivot_order_.resize(n);
    std::iota(pivot_order_.begin(), pivot_order_.end(), 0);
    std::stable_sort(pivot_order_.begin(), pivot_order_.end(),
                     [&](std::size_t x, std::size_t y) { return a.cols()[x].size > a.cols()[y].size; });
    reset();
  }

  void reset() {
    residual_.assign(target_.begin(), target_.end());
    avail_.assign(target_.size(), 0);
    state_.assign(a_.num_cols(), State::kOpen);
    for (std::size_t j = 0; j < a_.num_cols(); ++j) {
      if (col_nz_[j].empty()) state_[j] = State::kZero;
      for (const auto& e : col_nz_[j]) avail_[e.index] += e.value;
    }
    trail_.clear();
    path_.clear();
    found_.clear();
    count_ = 0;
  }

  // Cuts the tree at kSplitDepth, recording subproblems and early solutions.
  std::vector<FrontierItem> cut_frontier() {
    collecting_ = true;
    node(0);
    collecting_ = false;
    return std::move(frontier_);
  }

  // Replays a decision path from the root, then searches below it.
  void run(const std::vector<Decision>& path) {
    reset();
    nodes_ = 0;
    for (const Decision& d : path) {
      if (!propagate()) throw InternalError("replayed solver path became infeasible");
      path_.push_back(d);
      if (d.include) {
        choose(d.col);
      } else {
        close(d.col);
      }
    }
    node(static_cast<int>(path.size()));
  }

  std::uint64_t count() const { return count_; }
  std::vector<std::vector<std::size_t>>& found() { return found_; }
  std::uint64_t nodes() const { return nodes_; }
  bool timed_out() const { return timed_out_; }

  // Solutions represented by one assignment of the non-zero columns.
  std::uint64_t multiplicity() const { return std::uint64_t{1} << zero_cols_.size(); }

  // All solutions that extend `chosen` with any subset of the zero columns.
  std::vector<std::vector<std::size_t>> expand_zero_columns(const std::vector<std::size_t>& chosen) const {
    std::vector<std::vector<std::size_t>> out;
    for (std::uint64_t bits = 0; bits < multiplicity(); ++bits) {
      std::vector<std::size_t> cols = chosen;
      for (std::size_t z = 0; z < zero_cols_.size(); ++z) {
        if ((bits >> z) & 1U) cols.push_back(zero_cols_[z]);
      }
      std::sort(cols.begin(), cols.end());
      out.push_back(std::move(cols));
    }
    return out;
  }

 private:
  enum class State : std::uint8_t { kOpen, kChosen, kClosed, kZero };

  bool stopped() const { return timed_out_ || count_ >= limit_; }

  void choose(std::size_t j) {
    state_[j] = State::kChosen;
    for (const auto& e : col_nz_[j]) {
      residual_[e.index] -= e.value;
      avail_[e.index] -= e.value;
    }
    trail_.push_back(j);
  }

  void close(std::size_t j) {
    state_[j] = State::kClosed;
    for (const auto& e : col_nz_[j]) avail_[e.index] -= e.value;
    trail_.push_back(j);
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const std::size_t j = trail_.back();
      trail_.pop_back();
      const bool chosen = state_[j] == State::kChosen;
      for (const auto& e : col_nz_[j]) {
        if (chosen) residual_[e.index] += e.value;
        avail_[e.index] += e.value;
      }
      state_[j] = State::kOpen;
    }
  }

  // Closes columns that overshoot a residual, forces in the columns of rows
  // with no slack, then makes every row arc consistent. False when the node
  // is infeasible.
  bool propagate() {
    if (infeasible_) return false;
    const std::size_t m = residual_.size();
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t j = 0; j < state_.size(); ++j) {
        if (state_[j] != State::kOpen) continue;
        for (const auto& e : col_nz_[j]) {
          if (static_cast<std::int64_t>(e.value) > residual_[e.index]) {
            close(j);
            break;
          }
        }
      }
      for (std::size_t i = 0; i < m; ++i) {
        if (residual_[i] < 0 || residual_[i] > avail_[i]) return false;
      }
      for (std::size_t i = 0; i < m; ++i) {
        if (residual_[i] == 0 || residual_[i] != avail_[i]) continue;
        for (const auto& e : row_nz_[i]) {
          if (state_[e.index] == State::kOpen) {
            choose(e.index);
            changed = true;
          }
        }
      }
      if (changed) {
        for (std::size_t i = 0; i < m; ++i) {
          if (residual_[i] < 0) return false;
        }
        continue;
      }
      for (std::size_t i = 0; i < m && !changed; ++i) {
        if (residual_[i] == 0 || residual_[i] > kMaxFilterTarget) continue;
        const int r = filter_row(i);
        if (r < 0) return false;
        changed = r > 0;
      }
      if (!changed) {
        const int r = relax();
        if (r < 0) return false;
        changed = r > 0;
      }
    }
    return true;
  }

  // The real relaxation of the matrix rows over the open columns: echelon
  // rows may fix a column, and an infeasible LP prunes the node.
  int relax() {
    relax_cols_.clear();
    for (std::size_t j : pivot_order_) {
      if (state_[j] == State::kOpen) relax_cols_.push_back(j);
    }
    if (relax_cols_.empty()) return 0;
    relax_rows_.clear();
    for (std::size_t i = 0; i < num_matrix_rows_; ++i) {
      if (residual_[i] > 0) relax_rows_.push_back(i);
    }
    relaxation_.reset(relax_rows_.size(), relax_cols_.size());
    for (std::size_t r = 0; r < relax_rows_.size(); ++r) {
      const std::size_t i = relax_rows_[r];
      for (std::size_t q = 0; q < relax_cols_.size(); ++q) relaxation_.at(r, q) = a_.at(i, relax_cols_[q]);
      relaxation_.rhs(r) = static_cast<double>(residual_[i]);
    }
    if (relaxation_.echelon(fixes_) < 0) return -1;
    if (!fixes_.empty()) {
      for (const auto& f : fixes_) {
        const std::size_t j = relax_cols_[f.column];
        const State want = f.value ? State::kChosen : State::kClosed;
        if (state_[j] == want) continue;
        if (state_[j] != State::kOpen) return -1;
        if (f.value) {
          choose(j);
        } else {
          close(j);
        }
      }
      return 1;
    }
    return relaxation_.feasible() ? 0 : -1;
  }

  // Arc consistency for row i: an open column may be 1 only if the rest of
  // the row can complete the residual, and 0 only if the row can be
  // completed without it. Subset sums are kept as bitsets; bit x of the
  // suffix set marks a sum of target - x. Returns -1 when the row is
  // infeasible, 1 when a column was fixed, 0 otherwise.
  int filter_row(std::size_t i) {
    const auto target = static_cast<std::size_t>(residual_[i]);
    open_.clear();
    for (const auto& e : row_nz_[i]) {
      if (state_[e.index] == State::kOpen) open_.push_back(e);
    }
    const std::size_t p = open_.size();
    const std::size_t w = target / 64 + 1;
    suffix_.assign((p + 1) * w, 0);
    auto suf = [&](std::size_t q) { return suffix_.data() + q * w; };
    suf(p)[target / 64] = std::uint64_t{1} << (target % 64);
    for (std::size_t q = p; q-- > 0;) {
      std::copy_n(suf(q + 1), w, suf(q));
      or_shifted_right(suf(q), suf(q + 1), open_[q].value, w);
    }
    if ((suf(0)[0] & 1U) == 0) return -1;
    prefix_.assign(w, 0);
    prefix_[0] = 1;
    shifted_.resize(w);
    for (std::size_t q = 0; q < p; ++q) {
      const std::uint32_t a = open_[q].value;
      const std::uint64_t* next = suf(q + 1);
      std::fill(shifted_.begin(), shifted_.end(), 0);
      or_shifted_right(shifted_.data(), next, a, w);
      bool can_one = false;
      bool can_zero = false;
      for (std::size_t k = 0; k < w && !(can_one && can_zero); ++k) {
        can_one = can_one || (prefix_[k] & shifted_[k]) != 0;
        can_zero = can_zero || (prefix_[k] & next[k]) != 0;
      }
      if (!can_one) {
        close(open_[q].index);
        return 1;
      }
      if (!can_zero) {
        choose(open_[q].index);
        return 1;
      }
      or_shifted_left(prefix_.data(), a, w, target);
    }
    return 0;
  }

  // dst |= src >> shift over w words.
  static void or_shifted_right(std::uint64_t* dst, const std::uint64_t* src, std::uint32_t shift, std::size_t w) {
    const std::size_t ws = shift / 64;
    const unsigned bs = shift % 64;
    for (std::size_t k = 0; k + ws < w; ++k) {
      std::uint64_t x = src[k + ws] >> bs;
      if (bs != 0 && k + ws + 1 < w) x |= src[k + ws + 1] << (64 - bs);
      dst[k] |= x;
    }
  }

  // bits |= bits << shift, dropping bits above `top`.
  static void or_shifted_left(std::uint64_t* bits, std::uint32_t shift, std::size_t w, std::size_t top) {
    const std::size_t ws = shift / 64;
    const unsigned bs = shift % 64;
    for (std::size_t k = w; k-- > ws;) {
      std::uint64_t x = bits[k - ws] << bs;
      if (bs != 0 && k > ws) x |= bits[k - ws - 1] >> (64 - bs);
      bits[k] |= x;
    }
    if (top % 64 != 63) bits[w - 1] &= (std::uint64_t{1} << (top % 64 + 1)) - 1;
  }

  bool solved() const {
    return std::all_of(residual_.begin(), residual_.end(), [](std::int64_t r) { return r == 0; });
  }

  std::vector<std::size_t> chosen_columns() const {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < state_.size(); ++j) {
      if (state_[j] == State::kChosen) cols.push_back(j);
    }
    return cols;
  }

  void record_solution() {
    std::vector<std::size_t> cols = chosen_columns();
    if (!is_solution(a_, Solution{cols}, req_.lambda)) {
      throw InternalError("solver produced a vector that fails A x = lambda j");
    }
    if (collecting_) {
      frontier_.push_back({{}, std::move(cols)});
      return;
    }
    count_ += multiplicity();
    if (req_.mode != SolveMode::kCount) found_.push_back(std::move(cols));
  }

  // The unsatisfied matrix row with the least slack (open capacity minus
  // residual); its open column with the largest entry.
  std::size_t pick_column() const {
    std::size_t best_row = num_matrix_rows_;
    std::int64_t best_slack = INT64_MAX;
    for (std::size_t i = 0; i < num_matrix_rows_; ++i) {
      if (residual_[i] == 0) continue;
      const std::int64_t slack = avail_[i] - residual_[i];
      if (slack < best_slack) {
        best_slack = slack;
        best_row = i;
      }
    }
    if (best_row == num_matrix_rows_) throw InternalError("no unsatisfied row to branch on");
    std::size_t best = SIZE_MAX;
    std::uint32_t best_value = 0;
    for (const auto& e : row_nz_[best_row]) {
      if (state_[e.index] == State::kOpen && e.value > best_value) {
        best_value = e.value;
        best = e.index;
      }
    }
    if (best == SIZE_MAX) throw InternalError("branch row has no open column");
    return best;
  }

  void node(int depth) {
    if (stopped()) return;
    ++nodes_;
    if (deadline_ && Clock::now() >= *deadline_) {
      timed_out_ = true;
      return;
    }
    const std::size_t mark = trail_.size();
    if (propagate()) {
      if (solved()) {
        record_solution();
      } else if (collecting_ && depth == kSplitDepth) {
        frontier_.push_back({path_, std::nullopt});
      } else {
        const std::size_t col = pick_column();
        const std::size_t branch_mark = trail_.size();
        const bool include_first = req_.branch_order == BranchOrder::kIncludeFirst;
        for (bool include : {include_first, !include_first}) {
          path_.push_back({col, include});
          if (include) {
            choose(col);
          } else {
            close(col);
          }
          node(depth + 1);
          undo_to(branch_mark);
          path_.pop_back();
          if (stopped()) break;
        }
      }
    }
    undo_to(mark);
  }

  const KmMatrix& a_;
  const SolveRequest& req_;
  std::optional<Clock::time_point> deadline_;
  std::uint64_t limit_;

  std::vector<std::vector<Entry>> col_nz_;
  std::vector<std::vector<Entry>> row_nz_;
  std::vector<std::size_t> zero_cols_;

  std::vector<std::int64_t> residual_;
  std::vector<std::int64_t> avail_;
  std::vector<State> state_;
  std::vector<std::size_t> trail_;
  std::vector<Decision> path_;
  std::vector<std::uint64_t> target_;
  std::size_t num_matrix_rows_ = 0;
  bool infeasible_ = false;
  std::vector<Entry> open_;
  std::vector<std::uint64_t> suffix_;
  std::vector<std::uint64_t> prefix_;
  std::vector<std::uint64_t> shifted_;
  std::vector<std::size_t> pivot_order_;
  std::vector<std::size_t> relax_cols_;
  std::vector<std::size_t> relax_rows_;
  detail::Relaxation relaxation_;
  std::vector<detail::Relaxation::Fix> fixes_;

  bool collecting_ = false;
  std::vector<FrontierItem> frontier_;

  std::vector<std::vector<std::size_t>> found_;
  std::uint64_t count_ = 0;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

struct ItemResult {
  bool done = false;
  bool skipped = false;
  bool timed_out = false;
  std::uint64_t count = 0;
  std::uint64_t nodes = 0;
  std::vector<std::vector<std::size_t>> solutions;
};

}  // namespace

bool is_solution(const KmMatrix& a, const Solution& x, std::uint64_t lambda) {
  std::vector<bool> selected(a.num_cols(), false);
  for (std::size_t j : x.columns) {
    if (j >= a.num_cols() || selected[j]) return false;
    selected[j] = true;
  }
  for (std::size_t i = 0; i < a.num_rows(); ++i) {
    std::uint64_t sum = 0;
    for (std::size_t j = 0; j < a.num_cols(); ++j) {
      if (selected[j]) sum += a.at(i, j);
    }
    if (sum != lambda) return false;
  }
  return true;
}

SolveResult solve(const KmMatrix& a, const SolveRequest& request) {
  std::uint64_t limit = request.solution_limit.value_or(UINT64_MAX);
  if (request.mode == SolveMode::kFirst) limit = std::min<std::uint64_t>(limit, 1);
  std::optional<Clock::time_point> deadline;
  if (request.time_budget) {
    deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(*request.time_budget);
  }

  SolveResult result;
  if (limit == 0) {
    result.limit_reached = true;
    return result;
  }

  Searcher cutter(a, request, deadline, UINT64_MAX);
  const std::vector<FrontierItem> items = cutter.cut_frontier();
  result.nodes = cutter.nodes();
  bool timed_out = cutter.timed_out();

  std::vector<ItemResult> outcomes(items.size());
  std::mutex mu;
  // An item may be skipped once everything before it is finished and
  // already holds `limit` solutions.
  auto prefix_saturated = [&](std::size_t s) {
    std::lock_guard lock(mu);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < s; ++i) {
      if (!outcomes[i].done) return false;
      total += outcomes[i].count;
      if (total >= limit) return true;
    }
    return false;
  };

  auto work = [&](Searcher& searcher, std::size_t s) {
    ItemResult out;
    if (items[s].solution) {
      out.count = searcher.multiplicity();
      if (request.mode != SolveMode::kCount) out.solutions.push_back(*items[s].solution);
    } else if (timed_out || prefix_saturated(s)) {
      out.skipped = true;
    } else {
      searcher.run(items[s].path);
      out.count = searcher.count();
      out.nodes = searcher.nodes();
      out.timed_out = searcher.timed_out();
      out.solutions = std::move(searcher.found());
    }
    std::lock_guard lock(mu);
    out.done = true;
    outcomes[s] = std::move(out);
  };

  const int workers = std::max(1, request.workers);
  if (!timed_out) {
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
      Searcher searcher(a, request, deadline, limit);
      for (std::size_t s = next++; s < items.size(); s = next++) work(searcher, s);
    };
    if (workers == 1) {
      loop();
    } else {
      std::vector<std::jthread> threads;
      for (int w = 0; w < workers; ++w) threads.emplace_back(loop);
    }
  }

  // Merge in frontier order.
  Searcher expander(a, request, deadline, limit);
  std::uint64_t nodes = result.nodes;
  std::vector<std::vector<std::size_t>> merged;
  for (std::size_t s = 0; s < items.size(); ++s) {
    const ItemResult& out = outcomes[s];
    if (!out.done) {
      timed_out = true;
      continue;
    }
    timed_out = timed_out || out.timed_out;
    nodes += out.nodes;
    if (result.count >= limit || out.skipped) continue;
    result.count += out.count;
    for (const auto& cols : out.solutions) {
      for (auto& full : expander.expand_zero_columns(cols)) merged.push_back(std::move(full));
    }
  }
  result.nodes = nodes;
  if (result.count >= limit) {
    result.count = limit;
    result.limit_reached = true;
  }
  if (request.mode != SolveMode::kCount) {
    if (merged.size() > limit) merged.resize(limit);
    for (auto& cols : merged) result.solutions.push_back(Solution{std::move(cols)});
    std::sort(result.solutions.begin(), result.solutions.end());
  }
  result.status = timed_out ? SolveStatus::kIncomplete : SolveStatus::kComplete;
  return result;
}

}  // namespace kmdesign
