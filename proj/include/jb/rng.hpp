#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>

namespace jb {

enum class Generator {
    CounterDefault,  ///< Philox4x32-10 counter-based generator.
    Mlfg1279,        ///< Multiplicative lagged Fibonacci, lags (1279, 418), 64-bit odd words.
};

[[nodiscard]] std::string_view to_string(Generator g);
[[nodiscard]] Generator parse_generator(std::string_view text);

/// (seed, stream_index, generator) fully determines an output sequence.
struct StreamSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;
    Generator generator = Generator::CounterDefault;
};

/// Maps the top 53 bits k of a word to k * 2^-53, with k = 0 sent to 2^-54,
/// so the result lies in the open interval (0, 1) and is always exact.
[[nodiscard]] constexpr double to_open_unit(std::uint64_t bits) {
    const std::uint64_t k = bits >> 11;
    return k == 0 ? 0x1p-54 : static_cast<double>(k) * 0x1p-53;
}

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state);

/**
 * Philox4x32 with 10 rounds (Salmon et al., Random123).
 *
 * The 128-bit counter is (block_lo, block_hi, stream_lo, stream_hi) and the
 * 64-bit key is the seed. Each block yields two 64-bit words. Because the
 * round function is a bijection of the counter for a fixed key, two streams
 * with distinct indices can never produce the same block.
 */
class CounterEngine {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    CounterEngine(std::uint64_t seed, std::uint64_t stream_index);

    [[nodiscard]] static Block philox(Block counter, Key key);

    /// Word 2b is x0 | x1 << 32 and word 2b + 1 is x2 | x3 << 32 of block b.
    std::uint64_t next_u64() {
        if (next_ == kWords) refill();
        return words_[next_++];
    }

private:
    static constexpr int kLanes = 8;  // blocks computed per refill
    static constexpr int kWords = 2 * kLanes;

    void refill();

    Key key_{};
    std::uint64_t stream_ = 0;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, kWords> words_{};
    int next_ = kWords;
};

/**
 * x_k = x_{k-1279} * x_{k-418} mod 2^64 over odd words.
 *
 * Seeding: a SplitMix64 sequence started at
 *   splitmix64(seed) ^ rotl(splitmix64(stream_index ^ 0x6a09e667f3bcc909), 17)
 * fills the 1279 lag words, each forced odd, and the generator is then
 * advanced 2 * 1279 steps. Distinct stream indices give distinct lag tables;
 * non-overlap of the resulting sequences is probabilistic only (the period is
 * about 2^1340, so collisions are not a practical concern).
 */
class LaggedFibonacciEngine {
public:
    static constexpr int kLongLag = 1279;
    static constexpr int kShortLag = 418;

    LaggedFibonacciEngine(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t next_u64() {
        const int j = pos_ + kLongLag - kShortLag;
        const std::uint64_t x = lags_[pos_] * lags_[j >= kLongLag ? j - kLongLag : j];
        lags_[pos_] = x;
        pos_ = pos_ + 1 == kLongLag ? 0 : pos_ + 1;
        return x;
    }

    [[nodiscard]] std::span<const std::uint64_t> lag_table() const { return lags_; }

private:
    std::array<std::uint64_t, kLongLag> lags_{};
    int pos_ = 0;
};

/**
 * Uniform and standard normal deviates on top of a word engine.
 *
 * Normals use the Marsaglia polar method. Each accepted pair (v1, v2) returns
 * v1 * f first and caches v2 * f for the next call; the cache is part of the
 * state, so a replay from the same spec is bit-identical.
 */
template <class Engine>
class DeviateSource {
public:
    explicit DeviateSource(Engine engine) : engine_(std::move(engine)) {}

    double next_uniform() { return to_open_unit(engine_.next_u64()); }

    double next_normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double v1, v2, s;
        do {
            v1 = 2.0 * next_uniform() - 1.0;
            v2 = 2.0 * next_uniform() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v2 * f;
        has_cached_ = true;
        return v1 * f;
    }

    [[nodiscard]] const Engine& engine() const { return engine_; }

private:
    Engine engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Single-owner random stream; distinct streams may be used concurrently.
class Stream {
public:
    using Variant = std::variant<DeviateSource<CounterEngine>, DeviateSource<LaggedFibonacciEngine>>;

    explicit Stream(const StreamSpec& spec);

    double next_uniform() {
        return std::visit([](auto& s) { return s.next_uniform(); }, source_);
    }
    double next_normal() {
        return std::visit([](auto& s) { return s.next_normal(); }, source_);
    }

    [[nodiscard]] const StreamSpec& spec() const { return spec_; }

    /// Runs `f` on the concrete source so hot loops avoid per-draw dispatch.
    template <class F>
    decltype(auto) visit(F&& f) {
        return std::visit(std::forward<F>(f), source_);
    }

private:
    StreamSpec spec_;
    Variant source_;
};

/// Identifiers recorded in table metadata.
inline constexpr std::string_view kNormalTransformName = "marsaglia-polar-cached-pair";
inline constexpr std::string_view kUniformMappingName = "top53-zero-to-2^-54";
[[nodiscard]] std::string_view lag_pair_name(Generator g);
[[nodiscard]] std::string_view seeding_name(Generator g);

}  // namespace jb
