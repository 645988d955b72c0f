#pragma once

// Textbook sum-product decoder and exhaustive SA posterior, written
// independently of the library's decoder for cross-checking.

#include "scram/ldpc.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace scram::test {

class ReferenceBp {
public:
    using Edge = std::pair<std::size_t, std::size_t>; // (row, col)

    ReferenceBp(const ParityCheckMatrix& h, std::vector<double> channel) : h_(h), channel_(std::move(channel))
    {
        for (const auto& e : h.entries())
            q_[{e.row, e.col}] = channel_[e.col];
    }

    void iterate()
    {
        for (std::size_t r = 0; r < h_.n_rows(); ++r) {
            const auto cols = h_.row(r);
            for (auto c : cols) {
                double prod = 1.0;
                for (auto other : cols)
                    if (other != c)
                        prod *= std::tanh(q_[{r, other}] / 2.0);
                prod = std::max(-1.0 + 1e-12, std::min(1.0 - 1e-12, prod));
                r_[{r, c}] = std::max(-50.0, std::min(50.0, 2.0 * std::atanh(prod)));
            }
        }
        for (std::size_t c = 0; c < h_.n_cols(); ++c) {
            const auto rows = h_.col(c);
            for (auto r : rows) {
                double sum = channel_[c];
                for (auto other : rows)
                    if (other != r)
                        sum += r_[{other, c}];
                q_[{r, c}] = std::max(-50.0, std::min(50.0, sum));
            }
        }
    }

    /// Check-to-variable message of the last iteration.
    double check_to_var(std::size_t row, std::size_t col) const { return r_.at({row, col}); }
    /// Variable-to-check message of the last iteration.
    double var_to_check(std::size_t row, std::size_t col) const { return q_.at({row, col}); }

private:
    const ParityCheckMatrix& h_;
    std::vector<double> channel_;
    std::map<Edge, double> q_;
    std::map<Edge, double> r_;
};

/// ln P(x_t=+1 | y) / P(x_t=-1 | y) by direct summation over all symbol
/// vectors in the probability domain. priors[d] is P(x_d = +1).
inline double exhaustive_sa_llr(std::complex<double> y, const std::vector<std::complex<double>>& h,
                                const std::vector<double>& priors, double noise_variance, std::size_t target)
{
    const std::size_t d = h.size();
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        std::complex<double> mean = 0.0;
        double weight = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            const bool neg = (mask >> j) & 1U;
            mean += h[j] * (neg ? -1.0 : 1.0);
            if (j != target)
                weight *= neg ? 1.0 - priors[j] : priors[j];
        }
        const double likelihood = std::exp(-std::norm(y - mean) / noise_variance) / (M_PI * noise_variance);
        ((mask >> target) & 1U ? minus : plus) += likelihood * weight;
    }
    return std::log(plus / minus);
}

} // namespace scram::test
