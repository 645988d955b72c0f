#pragma once

#include "scram/scram_graph.hpp"

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace scram {

// LLRs are ln P(x = +1) / P(x = -1); code bit 0 maps to symbol +1.

enum class Fading {
    unit,     ///< h = 1 on every (slot, collider) pair
    rayleigh, ///< h ~ CN(0, 1), drawn per frame and known to the receiver
};

struct ChannelModel {
    /// Total variance of the complex AWGN sample (sigma^2/2 per dimension).
    double noise_variance = 1.0;
    Fading fading = Fading::unit;
};

struct ReceivedFrame {
    /// One observation per slot; empty slots carry noise only.
    std::vector<std::complex<double>> y;
    /// h[s][d] pairs with system.colliders(s)[d].
    std::vector<std::vector<std::complex<double>>> h;
    /// Transmitted BPSK symbol per global variable (test/measurement use).
    std::vector<int> truth;
};

enum class Payload {
    all_zero_codeword,
    /// Uniform over each user's code, drawn from the frame seed.
    random_codewords,
    given_codewords,
};

/// y_s = sum_d h_{s,d} x_d + w_s. Deterministic in `seed`. For
/// Payload::given_codewords, `codewords[u]` holds user u's code bits; each
/// must satisfy its parity checks (std::invalid_argument otherwise).
ReceivedFrame simulate_transmit(const ScramSystem& system, const ChannelModel& channel, std::uint64_t seed,
                                Payload payload = Payload::all_zero_codeword,
                                std::span<const std::vector<std::uint8_t>> codewords = {});

struct DecoderOptions {
    std::size_t max_iterations = 50;
    /// Upper bound on 2^deg(s) per SA check.
    std::size_t hypothesis_budget = std::size_t{1} << 12;
    double llr_clamp = 50.0;
    /// Stop as soon as every user's syndrome is zero.
    bool early_stop = true;
};

/// All messages of one frame on the three-layer graph.
///
/// Every variable has exactly one SA edge, so SA-side messages are indexed
/// by variable. LDPC-side messages are indexed by the LDPC-layer edge id of
/// ScramSystem::ldpc_layer().
struct DecoderState {
    std::vector<double> sa_to_var;   ///< S
    std::vector<double> var_to_sa;   ///< V^(S)
    std::vector<double> check_to_var; ///< L
    std::vector<double> var_to_check; ///< V^(L)
    /// 1-based number of the iteration about to run (or running).
    std::size_t iteration = 1;

    explicit DecoderState(const ScramSystem& system);
};

/// Messages from one SA check to each of its colliders.
///
/// incoming[d] is V^(S) from collider d. On the first iteration every
/// hypothesis vector gets the uniform prior 1/M instead. Throws
/// std::length_error when 2^deg exceeds the hypothesis budget.
std::vector<double> sa_check_messages(std::complex<double> y, std::span<const std::complex<double>> h,
                                      std::span<const double> incoming, double noise_variance,
                                      bool first_iteration, const DecoderOptions& options = {});

void sa_check_update(DecoderState& state, const ScramSystem& system, const ReceivedFrame& frame,
                     double noise_variance, const DecoderOptions& options = {});

/// Extrinsic tanh rule: L = 2 atanh(prod tanh(V/2)) over the other edges.
void ldpc_check_update(DecoderState& state, const ScramSystem& system, const DecoderOptions& options = {});

/// V^(L) = S + sum of the other L; V^(S) = sum of all L.
void variable_update(DecoderState& state, const ScramSystem& system, const DecoderOptions& options = {});

/// Total belief per variable: S + sum L.
std::vector<double> posterior_llrs(const DecoderState& state, const ScramSystem& system);

struct DecodeResult {
    /// bits[u][i]: hard decision of user u's symbol i (0 <=> +1).
    std::vector<std::vector<std::uint8_t>> bits;
    std::vector<bool> parity_ok;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Joint decoding: each iteration runs the SA and LDPC check updates on the
/// previous variable messages, then the variable update.
DecodeResult decode(const ScramSystem& system, const ReceivedFrame& frame, double noise_variance,
                    const DecoderOptions& options = {});

// ---------------------------------------------------------------------------

struct PerRow {
    double snr_db = 0.0;
    /// 0-based user; empty for the aggregate row.
    std::optional<std::size_t> user;
    std::size_t frames = 0;
    std::size_t errors = 0;
    double per = 0.0;
};

struct PerExperiment {
    std::vector<double> snr_db;
    std::size_t frames_per_point = 100;
    std::uint64_t seed = 0;
    ChannelModel channel;
    Payload payload = Payload::all_zero_codeword;
    std::vector<std::vector<std::uint8_t>> codewords;
    DecoderOptions decoder;
};

struct PerTable {
    std::vector<PerRow> rows;
    std::optional<std::size_t> local_girth;
    std::uint64_t global8 = 0;
    std::size_t decoder_failures = 0;
};

/// sigma^2 = 10^(-snr_db / 10) for unit-energy BPSK.
double noise_variance_from_snr_db(double snr_db);

/// Monte-Carlo packet error rate per SNR point, per user and aggregated.
/// A user's packet is in error when its hard decision differs from the
/// transmitted codeword. Frame seeds derive from (seed, point, frame). The
/// aggregate row counts user packets, so its frame count is
/// frames_per_point x users.
PerTable run_per_experiment(const ScramSystem& system, const PerExperiment& experiment);

} // namespace scram
