#pragma once

#include "pslab/numerics.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace pslab {

inline constexpr std::uint64_t kSieveLimit = 1'000'000'000;
inline constexpr std::uint64_t kMaxSegmentSpan = 100'000'000;
inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 22;

/// Residue class n = a (mod d), a normalized to [0, d).
struct APFilter {
    std::uint64_t d = 1;
    std::uint64_t a = 0;
    std::uint64_t g = 1; // gcd(a, d)

    static APFilter make(std::uint64_t d, std::int64_t a);
    bool matches(std::uint64_t n) const { return n % d == a; }
};

struct SieveOptions {
    bool mobius = true;
    std::uint64_t segment_size = kDefaultSegmentSize;
};

/// Sieve output over (lo, hi]. Immutable once built.
class PrimeTable {
public:
    std::uint64_t lo() const { return lo_; }
    std::uint64_t hi() const { return hi_; }
    bool contains(std::uint64_t n) const { return n > lo_ && n <= hi_; }

    bool is_prime(std::uint64_t n) const;
    /// p when n = p^k (k >= 1), else 0.
    std::uint64_t prime_power_base(std::uint64_t n) const;
    /// von Mangoldt Lambda(n).
    double lambda(std::uint64_t n) const;
    /// Moebius mu(n); throws unless the table was built with mobius.
    int mu(std::uint64_t n) const;
    bool has_mobius() const { return !mu_.empty(); }

    std::vector<std::uint64_t> primes() const;
    const std::vector<bool>& prime_bits() const { return is_prime_; }
    /// Proper prime powers p^k, k >= 2, as ascending (n, p) pairs.
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& higher_powers() const { return powers_; }

    template <class Fn>
    void for_each_prime(Fn&& fn) const {
        for (std::uint64_t i = 0; i < is_prime_.size(); ++i)
            if (is_prime_[i]) fn(lo_ + 1 + i);
    }

    /// Visits every n with Lambda(n) != 0 in ascending order as fn(n, p).
    template <class Fn>
    void for_each_prime_power(Fn&& fn) const {
        auto pw = powers_.begin();
        for (std::uint64_t i = 0; i < is_prime_.size(); ++i) {
            const std::uint64_t n = lo_ + 1 + i;
            if (is_prime_[i]) {
                fn(n, n);
            } else if (pw != powers_.end() && pw->first == n) {
                fn(n, pw->second);
                ++pw;
            }
        }
    }

private:
    friend PrimeTable sieve_range(std::uint64_t, std::uint64_t, const SieveOptions&);
    friend PrimeTable load_segment_cache(const std::filesystem::path&);

    std::uint64_t lo_ = 0;
    std::uint64_t hi_ = 0;
    std::vector<bool> is_prime_;
    std::vector<std::int8_t> mu_;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> powers_;
};

/// Primes up to sqrt(1e9), built once.
std::span<const std::uint32_t> base_primes();

/// Segmented sieve of (lo, hi]. Requires lo < hi <= 1e9 and hi - lo <= 1e8
/// (ErrorKind::RangeTooLarge / Domain).
PrimeTable sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options = {});

/// Splits (lo, hi] into segments of options.segment_size, sieves them on the
/// worker pool and returns fn(table) per segment in ascending order.
template <class T, class Fn>
std::vector<T> map_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options, Fn&& fn);

std::uint64_t euler_phi(std::uint64_t d);

/// Number of ordered factorizations m = m_1 ... m_k.
std::uint64_t tau_k(std::uint64_t m, unsigned k);

/// Exact sign of base^gamma - n. Uses a certified extended-precision
/// comparison and falls back to big-integer powers when gamma is a dyadic
/// rational with small denominator. Throws ErrorKind::Boundary if neither
/// route decides.
int compare_power(std::uint64_t base, double gamma, std::uint64_t n);

/// [-p^gamma] - [-(p+1)^gamma] given p^gamma and (p+1)^gamma in extended
/// precision; values within 1e-9 of an integer are settled exactly.
int ps_indicator(std::uint64_t p, double gamma, const ExtReal& p_pow, const ExtReal& p1_pow);

/// True iff p = [n^{1/gamma}] for some integer n. p must be prime, 0 < gamma <= 1.
bool is_ps_prime(std::uint64_t p, double gamma);

/// Primes p <= x with p = a (mod d), ascending.
std::vector<std::uint64_t> primes_in_ap(std::uint64_t x, const APFilter& filter);

/// Binary cache of the prime bitset: magic "PSLBSET1", then little-endian
/// u64 lo, u64 hi, u64 bit count, then the bitset bytes (bit i of the
/// stream is n = lo + 1 + i, LSB first).
void save_segment_cache(const std::filesystem::path& path, const PrimeTable& table);
PrimeTable load_segment_cache(const std::filesystem::path& path);

} // namespace pslab

#include "pslab/parallel.hpp"

namespace pslab {

template <class T, class Fn>
std::vector<T> map_segments(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options, Fn&& fn) {
    if (hi <= lo) return {};
    const std::uint64_t step = options.segment_size == 0 ? kDefaultSegmentSize : options.segment_size;
    const std::uint64_t count = (hi - lo + step - 1) / step;
    return parallel_map<T>(count, [&](std::size_t i) {
        const std::uint64_t s_lo = lo + i * step;
        const std::uint64_t s_hi = std::min(hi, s_lo + step);
        return fn(sieve_range(s_lo, s_hi, options));
    });
}

} // namespace pslab
