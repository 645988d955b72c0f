#include "scram/decoder.hpp"

#include "scram/global8.hpp"
#include "scram/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scram {

namespace {

constexpr double tanh_limit = 1.0 - 1e-12;

double clamp_llr(double x, double limit) { return std::clamp(x, -limit, limit); }

// ln P(x = +1) for P(+1) = 1 / (1 + exp(-llr)), without overflow.
double log_prob_plus(double llr)
{
    return llr >= 0 ? -std::log1p(std::exp(-llr)) : llr - std::log1p(std::exp(llr));
}

double log_add(double a, double b)
{
    if (a == -std::numeric_limits<double>::infinity())
        return b;
    if (b == -std::numeric_limits<double>::infinity())
        return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

std::complex<double> complex_normal(Rng& rng, double variance)
{
    const double scale = std::sqrt(variance / 2.0);
    const double re = rng.normal();
    const double im = rng.normal();
    return {scale * re, scale * im};
}

std::vector<std::vector<std::uint8_t>> draw_codewords(const std::vector<Gf2Encoder>& encoders, std::uint64_t seed)
{
    Rng rng(mix_seed(seed, 1));
    std::vector<std::vector<std::uint8_t>> out;
    for (const auto& enc : encoders)
        out.push_back(enc.random_codeword(rng));
    return out;
}

std::vector<Gf2Encoder> encoders_for(const ScramSystem& system)
{
    std::vector<Gf2Encoder> out;
    for (std::size_t u = 0; u < system.n_users(); ++u)
        out.emplace_back(system.user(u).code);
    return out;
}

} // namespace

ReceivedFrame simulate_transmit(const ScramSystem& system, const ChannelModel& channel, std::uint64_t seed,
                                Payload payload, std::span<const std::vector<std::uint8_t>> codewords)
{
    if (!(channel.noise_variance >= 0.0) || !std::isfinite(channel.noise_variance))
        throw std::invalid_argument("noise variance must be finite and non-negative");

    if (payload == Payload::random_codewords) {
        const auto drawn = draw_codewords(encoders_for(system), seed);
        return simulate_transmit(system, channel, seed, Payload::given_codewords, drawn);
    }

    ReceivedFrame frame;
    frame.truth.assign(system.n_variables(), +1);
    if (payload == Payload::given_codewords) {
        if (codewords.size() != system.n_users())
            throw std::invalid_argument("one codeword per user is required");
        for (std::size_t u = 0; u < system.n_users(); ++u) {
            const auto& code = system.user(u).code;
            if (!code.is_codeword(codewords[u]))
                throw std::invalid_argument("codeword of user " + std::to_string(u + 1) +
                                            " violates its parity checks");
            for (std::size_t i = 0; i < codewords[u].size(); ++i)
                frame.truth[system.index().variable_to_global({u, i})] = codewords[u][i] ? -1 : +1;
        }
    }

    Rng rng(seed);
    frame.h.resize(system.n_slots());
    frame.y.resize(system.n_slots());
    for (std::size_t s = 0; s < system.n_slots(); ++s) {
        const auto colliders = system.colliders(s);
        auto& hs = frame.h[s];
        hs.reserve(colliders.size());
        std::complex<double> sum{};
        for (auto v : colliders) {
            const std::complex<double> h = channel.fading == Fading::unit ? std::complex<double>{1.0, 0.0}
                                                                          : complex_normal(rng, 1.0);
            hs.push_back(h);
            sum += h * static_cast<double>(frame.truth[v]);
        }
        frame.y[s] = sum + complex_normal(rng, channel.noise_variance);
    }
    return frame;
}

DecoderState::DecoderState(const ScramSystem& system)
    : sa_to_var(system.n_variables(), 0.0), var_to_sa(system.n_variables(), 0.0),
      check_to_var(system.ldpc_layer().edge_count(), 0.0),
      var_to_check(system.ldpc_layer().edge_count(), 0.0)
{
}

std::vector<double> sa_check_messages(std::complex<double> y, std::span<const std::complex<double>> h,
                                      std::span<const double> incoming, double noise_variance,
                                      bool first_iteration, const DecoderOptions& options)
{
    const std::size_t degree = h.size();
    if (incoming.size() != degree)
        throw std::invalid_argument("one incoming message per collider is required");
    if (degree == 0)
        return {};
    if (degree >= 63 || (std::size_t{1} << degree) > options.hypothesis_budget)
        throw std::length_error("SA check of degree " + std::to_string(degree) + " needs 2^" +
                                std::to_string(degree) + " hypotheses, budget is " +
                                std::to_string(options.hypothesis_budget) +
                                "; reduce the collision degree");
    if (!(noise_variance > 0.0))
        throw std::invalid_argument("noise variance must be positive");

    std::vector<double> log_plus(degree);
    std::vector<double> log_minus(degree);
    for (std::size_t d = 0; d < degree; ++d) {
        log_plus[d] = log_prob_plus(incoming[d]);
        log_minus[d] = log_prob_plus(-incoming[d]);
    }

    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    const std::size_t others = degree - 1;
    const std::uint64_t hypotheses = std::uint64_t{1} << others;
    std::vector<double> out(degree);
    for (std::size_t target = 0; target < degree; ++target) {
        double log_sum[2] = {neg_inf, neg_inf}; // [0]: target +1, [1]: target -1
        for (int polarity = 0; polarity < 2; ++polarity) {
            const double x_target = polarity == 0 ? 1.0 : -1.0;
            for (std::uint64_t m = 0; m < hypotheses; ++m) {
                std::complex<double> mean = h[target] * x_target;
                double log_prior = 0.0;
                std::size_t bit = 0;
                for (std::size_t d = 0; d < degree; ++d) {
                    if (d == target)
                        continue;
                    const bool minus = (m >> bit++) & 1U;
                    mean += h[d] * (minus ? -1.0 : 1.0);
                    if (!first_iteration)
                        log_prior += minus ? log_minus[d] : log_plus[d];
                }
                // The 1/(pi sigma^2) factor and the uniform 1/M prior cancel
                // in the ratio.
                const double log_likelihood = -std::norm(y - mean) / noise_variance;
                log_sum[polarity] = log_add(log_sum[polarity], log_likelihood + log_prior);
            }
        }
        out[target] = clamp_llr(log_sum[0] - log_sum[1], options.llr_clamp);
    }
    return out;
}

void sa_check_update(DecoderState& state, const ScramSystem& system, const ReceivedFrame& frame,
                     double noise_variance, const DecoderOptions& options)
{
    if (frame.y.size() != system.n_slots() || frame.h.size() != system.n_slots())
        throw std::invalid_argument("received frame does not match the system's slot count");
    std::vector<double> incoming;
    for (std::size_t s = 0; s < system.n_slots(); ++s) {
        const auto colliders = system.colliders(s);
        if (colliders.empty())
            continue;
        if (frame.h[s].size() != colliders.size())
            throw std::invalid_argument("fading list of slot " + std::to_string(s + 1) +
                                        " does not match its colliders");
        incoming.clear();
        for (auto v : colliders)
            incoming.push_back(state.var_to_sa[v]);
        const auto msgs = sa_check_messages(frame.y[s], frame.h[s], incoming, noise_variance,
                                            state.iteration == 1, options);
        for (std::size_t d = 0; d < colliders.size(); ++d)
            state.sa_to_var[colliders[d]] = msgs[d];
    }
}

void ldpc_check_update(DecoderState& state, const ScramSystem& system, const DecoderOptions& options)
{
    const auto& layer = system.ldpc_layer();
    std::vector<double> t;
    for (std::size_t l = 0; l < layer.right_count(); ++l) {
        const auto edges = layer.right_edges(l);
        t.resize(edges.size());
        for (std::size_t k = 0; k < edges.size(); ++k)
            t[k] = std::tanh(state.var_to_check[edges[k]] / 2.0);
        // Direct products over the other edges. Prefix/suffix products would
        // be cheaper, but near |p| = 1 atanh magnifies their different
        // rounding well past 1e-9.
        for (std::size_t k = 0; k < edges.size(); ++k) {
            double p = 1.0;
            for (std::size_t j = 0; j < edges.size(); ++j)
                if (j != k)
                    p *= t[j];
            p = std::clamp(p, -tanh_limit, tanh_limit);
            state.check_to_var[edges[k]] = clamp_llr(2.0 * std::atanh(p), options.llr_clamp);
        }
    }
}

void variable_update(DecoderState& state, const ScramSystem& system, const DecoderOptions& options)
{
    const auto& layer = system.ldpc_layer();
    for (std::size_t v = 0; v < system.n_variables(); ++v) {
        const auto edges = layer.left_edges(v);
        // Sums skip the answered edge outright rather than subtracting it,
        // so the result cannot carry rounding from the excluded message.
        for (auto e : edges) {
            double sum = state.sa_to_var[v];
            for (auto other : edges)
                if (other != e)
                    sum += state.check_to_var[other];
            state.var_to_check[e] = clamp_llr(sum, options.llr_clamp);
        }
        // A variable has no other SA check to draw from.
        double sum_l = 0.0;
        for (auto e : edges)
            sum_l += state.check_to_var[e];
        state.var_to_sa[v] = clamp_llr(sum_l, options.llr_clamp);
    }
}

std::vector<double> posterior_llrs(const DecoderState& state, const ScramSystem& system)
{
    const auto& layer = system.ldpc_layer();
    std::vector<double> out(system.n_variables());
    for (std::size_t v = 0; v < system.n_variables(); ++v) {
        double total = state.sa_to_var[v];
        for (auto e : layer.left_edges(v))
            total += state.check_to_var[e];
        out[v] = total;
    }
    return out;
}

namespace {

void hard_decide(const DecoderState& state, const ScramSystem& system, DecodeResult& result)
{
    const auto llrs = posterior_llrs(state, system);
    result.bits.resize(system.n_users());
    result.parity_ok.assign(system.n_users(), false);
    for (std::size_t u = 0; u < system.n_users(); ++u) {
        const auto n = system.index().symbols(u);
        const auto offset = system.index().variable_offset(u);
        auto& bits = result.bits[u];
        bits.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            bits[i] = llrs[offset + i] > 0.0 ? 0 : 1;
        result.parity_ok[u] = system.user(u).code.is_codeword(bits);
    }
}

} // namespace

DecodeResult decode(const ScramSystem& system, const ReceivedFrame& frame, double noise_variance,
                    const DecoderOptions& options)
{
    if (options.max_iterations == 0)
        throw std::invalid_argument("max_iterations must be at least 1");

    DecoderState state(system);
    DecodeResult result;
    for (state.iteration = 1; state.iteration <= options.max_iterations; ++state.iteration) {
        // Both check layers read only the previous variable messages.
        sa_check_update(state, system, frame, noise_variance, options);
        ldpc_check_update(state, system, options);
        variable_update(state, system, options);

        hard_decide(state, system, result);
        result.iterations = state.iteration;
        result.converged = std::all_of(result.parity_ok.begin(), result.parity_ok.end(), [](bool ok) { return ok; });
        if (result.converged && options.early_stop)
            break;
    }
    return result;
}

double noise_variance_from_snr_db(double snr_db)
{
    return std::pow(10.0, -snr_db / 10.0);
}

PerTable run_per_experiment(const ScramSystem& system, const PerExperiment& experiment)
{
    if (experiment.frames_per_point == 0)
        throw std::invalid_argument("frames per point must be positive");

    PerTable table;
    table.local_girth = local_girth(system);
    table.global8 = count_global_8cycles(system).total;

    std::vector<Gf2Encoder> encoders;
    if (experiment.payload == Payload::random_codewords)
        encoders = encoders_for(system);

    for (std::size_t p = 0; p < experiment.snr_db.size(); ++p) {
        ChannelModel channel = experiment.channel;
        channel.noise_variance = noise_variance_from_snr_db(experiment.snr_db[p]);
        std::vector<std::size_t> errors(system.n_users(), 0);
        const auto point_seed = mix_seed(experiment.seed, p);
        for (std::size_t f = 0; f < experiment.frames_per_point; ++f) {
            const auto frame_seed = mix_seed(point_seed, f);
            const auto frame =
                experiment.payload == Payload::random_codewords
                    ? simulate_transmit(system, channel, frame_seed, Payload::given_codewords,
                                        draw_codewords(encoders, frame_seed))
                    : simulate_transmit(system, channel, frame_seed, experiment.payload, experiment.codewords);
            const auto result = decode(system, frame, channel.noise_variance, experiment.decoder);
            for (std::size_t u = 0; u < system.n_users(); ++u) {
                const auto offset = system.index().variable_offset(u);
                const auto& bits = result.bits[u];
                for (std::size_t i = 0; i < bits.size(); ++i) {
                    if (bits[i] != (frame.truth[offset + i] < 0 ? 1 : 0)) {
                        ++errors[u];
                        break;
                    }
                }
            }
        }
        std::size_t total = 0;
        for (std::size_t u = 0; u < system.n_users(); ++u) {
            total += errors[u];
            table.rows.push_back({experiment.snr_db[p], u, experiment.frames_per_point, errors[u],
                                  static_cast<double>(errors[u]) / static_cast<double>(experiment.frames_per_point)});
        }
        const auto packets = experiment.frames_per_point * system.n_users();
        table.rows.push_back({experiment.snr_db[p], std::nullopt, packets, total,
                              static_cast<double>(total) / static_cast<double>(packets)});
    }
    return table;
}

} // namespace scram
