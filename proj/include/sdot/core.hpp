#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdot {

// ---------------------------------------------------------------------------
// Budgets.  Every exhaustive search ticks a shared counter and fails loudly
// when the ceiling is reached; nothing is ever silently truncated.
// ---------------------------------------------------------------------------

struct BudgetExceeded : std::runtime_error {
  std::uint64_t used;
  explicit BudgetExceeded(std::uint64_t n)
      : std::runtime_error("enumeration budget exceeded after " +
                           std::to_string(n) + " candidate checks"),
        used(n) {}
};

inline std::uint64_t default_budget_limit() {
  if (const char* env = std::getenv("SDOT_BUDGET")) {
    const std::uint64_t v = std::strtoull(env, nullptr, 10);
    if (v > 0) return v;
  }
  return 10'000'000ull;
}

class BudgetState {
 public:
  explicit BudgetState(std::uint64_t limit) : limit_(limit) {}
  void tick(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > limit_) throw BudgetExceeded(used_);
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// Shared handle; lazy structures capture it so that later hom-set
// enumerations still count against the budget of the op that made them.
class Budget {
 public:
  Budget() : state_(std::make_shared<BudgetState>(default_budget_limit())) {}
  explicit Budget(std::uint64_t limit)
      : state_(std::make_shared<BudgetState>(limit)) {}
  void tick(std::uint64_t n = 1) const { state_->tick(n); }
  std::uint64_t used() const { return state_->used(); }
  std::uint64_t limit() const { return state_->limit(); }

 private:
  std::shared_ptr<BudgetState> state_;
};

// ---------------------------------------------------------------------------
// Check outcomes.  A failed check always carries a witness string naming the
// offending data; callers either inspect or rethrow.
// ---------------------------------------------------------------------------

struct CheckFail {
  std::string kind;     // short machine-ish tag, e.g. "non-associative"
  std::string witness;  // human-readable concrete data
};

using CheckResult = std::optional<CheckFail>;  // nullopt == pass

inline CheckResult pass() { return std::nullopt; }
inline CheckResult fail(std::string kind, std::string witness) {
  return CheckFail{std::move(kind), std::move(witness)};
}

struct ValidationError : std::runtime_error {
  CheckFail detail;
  explicit ValidationError(CheckFail f)
      : std::runtime_error(f.kind + ": " + f.witness), detail(std::move(f)) {}
};

inline void require_ok(const CheckResult& r) {
  if (r) throw ValidationError(*r);
}

// ---------------------------------------------------------------------------
// Small helpers used all over.
// ---------------------------------------------------------------------------

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

template <typename T>
std::string join_ints(const std::vector<T>& v, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << v[i];
  }
  return os.str();
}

// Odometer over mixed radices; f is called with the current digit vector.
// Returns false if f ever returns false (early stop).
inline bool for_each_tuple(const std::vector<int>& radix,
                           const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> digits(radix.size(), 0);
  for (int r : radix)
    if (r <= 0) return true;  // empty product
  while (true) {
    if (!f(digits)) return false;
    std::size_t i = 0;
    while (i < digits.size()) {
      if (++digits[i] < radix[i]) break;
      digits[i] = 0;
      ++i;
    }
    if (i == digits.size()) return true;
  }
}

// Monotone maps [m] -> [n], each as a vector of m+1 values.
inline std::vector<std::vector<int>> monotone_maps(int m, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m + 1, 0);
  while (true) {
    out.push_back(cur);
    int i = m;
    while (i >= 0 && cur[i] == n) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j <= m; ++j) cur[j] = cur[i];
  }
  return out;
}

inline bool is_monotone(const std::vector<int>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] > v[i]) return false;
  return true;
}

}  // namespace sdot
