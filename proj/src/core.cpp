#include "infoperc/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace infoperc {

std::string format_real(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    if (x == 0.0)
        x = 0.0; // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

VertexSet normalize_set(VertexSet s, int n)
{
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s)
        if (v < 0 || v >= n)
            throw InvalidArgument("vertex index " + std::to_string(v) + " out of range");
    return s;
}

double binary_entropy(double p)
{
    double h = 0.0;
    if (p > 0.0)
        h -= p * std::log(p);
    if (p < 1.0)
        h -= (1.0 - p) * std::log1p(-p);
    return h;
}

} // namespace infoperc
