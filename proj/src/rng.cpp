#include "jb/rng.hpp"

#include <string>

#include "jb/errors.hpp"
#include "vector_clones.hpp"

namespace jb {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::string_view to_string(Generator g) {
    return g == Generator::CounterDefault ? "philox4x32-10" : "mlfg-1279";
}

Generator parse_generator(std::string_view text) {
    if (text == "philox4x32-10" || text == "counter" || text == "default") {
        return Generator::CounterDefault;
    }
    if (text == "mlfg-1279" || text == "mlfg") {
        return Generator::Mlfg1279;
    }
    throw InvalidArgument("unknown generator '" + std::string(text) +
                          "' (expected philox4x32-10 or mlfg-1279)");
}

std::string_view lag_pair_name(Generator g) {
    return g == Generator::Mlfg1279 ? "1279,418" : "none";
}

std::string_view seeding_name(Generator g) {
    return g == Generator::Mlfg1279 ? "splitmix64-fill-odd-warmup2558"
                                    : "key:seed;counter:(block,stream_index)";
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

CounterEngine::CounterEngine(std::uint64_t seed, std::uint64_t stream_index)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream_index) {}

CounterEngine::Block CounterEngine::philox(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

// Integer-only, so every clone produces identical words.
JB_VECTOR_CLONES void CounterEngine::refill() {
    // Same rounds as philox(), laid out lane-wise so the compiler can vectorize.
    std::uint32_t c0[kLanes], c1[kLanes], c2[kLanes], c3[kLanes];
    for (int l = 0; l < kLanes; ++l) {
        const std::uint64_t b = block_ + static_cast<std::uint64_t>(l);
        c0[l] = static_cast<std::uint32_t>(b);
        c1[l] = static_cast<std::uint32_t>(b >> 32);
        c2[l] = static_cast<std::uint32_t>(stream_);
        c3[l] = static_cast<std::uint32_t>(stream_ >> 32);
    }
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += kPhiloxW0;
            k1 += kPhiloxW1;
        }
        for (int l = 0; l < kLanes; ++l) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c0[l];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c2[l];
            const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[l] ^ k0;
            const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[l] ^ k1;
            c0[l] = n0;
            c1[l] = static_cast<std::uint32_t>(p1);
            c2[l] = n2;
            c3[l] = static_cast<std::uint32_t>(p0);
        }
    }
    for (int l = 0; l < kLanes; ++l) {
        words_[2 * l] = static_cast<std::uint64_t>(c0[l]) | (static_cast<std::uint64_t>(c1[l]) << 32);
        words_[2 * l + 1] = static_cast<std::uint64_t>(c2[l]) | (static_cast<std::uint64_t>(c3[l]) << 32);
    }
    block_ += kLanes;
    next_ = 0;
}

LaggedFibonacciEngine::LaggedFibonacciEngine(std::uint64_t seed, std::uint64_t stream_index) {
    std::uint64_t a = seed;
    std::uint64_t b = stream_index ^ 0x6a09e667f3bcc909ull;
    std::uint64_t state = splitmix64(a) ^ rotl(splitmix64(b), 17);
    for (auto& w : lags_) w = splitmix64(state) | 1u;
    for (int i = 0; i < 2 * kLongLag; ++i) (void)next_u64();
}

Stream::Stream(const StreamSpec& spec)
    : spec_(spec),
      source_(spec.generator == Generator::Mlfg1279
                  ? Variant{std::in_place_index<1>, LaggedFibonacciEngine(spec.seed, spec.stream_index)}
                  : Variant{std::in_place_index<0>, CounterEngine(spec.seed, spec.stream_index)}) {}

}  // namespace jb
