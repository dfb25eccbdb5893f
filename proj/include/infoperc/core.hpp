#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace infoperc {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Sorted list of vertex / variable indices.
using VertexSet = std::vector<int>;

/// Raised when an instance exceeds a configured enumeration or simulation budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an argument violates an operation's precondition.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_real(double x);

/// Sorts and deduplicates; throws if any index is outside [0, n).
VertexSet normalize_set(VertexSet s, int n);

/// Binary entropy in nats, with 0 log 0 = 0.
double binary_entropy(double p);

/// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(long double x)
    {
        const long double t = sum_ + x;
        if (fabsl(sum_) >= fabsl(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    long double value() const { return sum_ + comp_; }

private:
    static long double fabsl(long double v) { return v < 0 ? -v : v; }
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

} // namespace infoperc
