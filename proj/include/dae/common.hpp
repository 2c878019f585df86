#ifndef DAE_COMMON_HPP
#define DAE_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dae {

inline constexpr const char* kToolkitVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Errors. One base class so the CLI can map every library failure to exit 1.
// ---------------------------------------------------------------------------

class DaeError : public std::runtime_error {
public:
    explicit DaeError(const std::string& what) : std::runtime_error(what) {}
};

#define DAE_DEFINE_ERROR(NAME)                                        \
    class NAME : public DaeError {                                    \
    public:                                                           \
        explicit NAME(const std::string& what)                        \
            : DaeError(std::string(#NAME) + ": " + what) {}           \
    }

DAE_DEFINE_ERROR(MissingField);
DAE_DEFINE_ERROR(DuplicateId);
DAE_DEFINE_ERROR(EmptyText);
DAE_DEFINE_ERROR(UnknownLabel);
DAE_DEFINE_ERROR(UnlabeledItem);
DAE_DEFINE_ERROR(AuthError);
DAE_DEFINE_ERROR(RateLimited);
DAE_DEFINE_ERROR(ProviderError);
DAE_DEFINE_ERROR(ImageDecodeError);
DAE_DEFINE_ERROR(DimensionMismatch);
DAE_DEFINE_ERROR(NonFiniteLoss);
DAE_DEFINE_ERROR(IoError);
DAE_DEFINE_ERROR(ConfigError);

#undef DAE_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Hashing. FNV-1a, used for token embeddings, mock responses and manifests.
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

// ---------------------------------------------------------------------------
// Deterministic randomness. We derive doubles from raw mt19937_64 output
// ourselves so results do not depend on the standard library's distribution
// implementations.
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // standard normal via Box-Muller
    double gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // uniform integer in [0, n)
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(next_double() * static_cast<double>(n)) % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// Mixes a seed with a salt string; used to give independent streams to
// independent pipeline stages while keeping a single user-facing seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::string_view salt) {
    std::uint64_t h = fnv1a64(salt);
    h ^= seed + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

// ---------------------------------------------------------------------------
// Small string helpers shared by the text-facing modules.
// ---------------------------------------------------------------------------

std::string lowercase(std::string_view s);
std::string trim(std::string_view s);
std::string collapse_spaces(std::string_view s);

// Splits on any non-alphanumeric byte (apostrophes included), lowercased.
std::vector<std::string> word_tokens(std::string_view text);

bool is_english_stopword(const std::string& lowercase_token);

}  // namespace dae

#endif
