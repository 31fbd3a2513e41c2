#include "pslab/sieve.hpp"

#include "pslab/error.hpp"
#include "pslab/rational.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>

namespace pslab {

namespace {

// Fills [begin, begin + len) of the output arrays for the integers
// s_lo + 1 .. s_lo + len.
void sieve_segment(std::uint64_t s_lo, std::uint64_t len, bool with_mobius, std::vector<bool>& is_prime,
                   std::uint64_t offset, std::vector<std::int8_t>& mu,
                   std::vector<std::pair<std::uint64_t, std::uint64_t>>& powers) {
    const std::uint64_t s_hi = s_lo + len;
    std::vector<std::uint8_t> composite(len, 0);
    std::vector<std::uint32_t> rest;
    if (with_mobius) {
        rest.resize(len);
        for (std::uint64_t i = 0; i < len; ++i) rest[i] = static_cast<std::uint32_t>(s_lo + 1 + i);
        std::fill(mu.begin() + static_cast<std::ptrdiff_t>(offset),
                  mu.begin() + static_cast<std::ptrdiff_t>(offset + len), std::int8_t{1});
    }

    for (const std::uint32_t q32 : base_primes()) {
        const std::uint64_t q = q32;
        if (q * q > s_hi) break;
        const std::uint64_t first = (s_lo / q + 1) * q;
        // Composite marking starts at q^2; q itself stays prime.
        for (std::uint64_t m = std::max(first, q * q); m <= s_hi; m += q) composite[m - s_lo - 1] = 1;

        if (with_mobius) {
            for (std::uint64_t m = first; m <= s_hi; m += q) {
                const std::uint64_t i = m - s_lo - 1;
                mu[offset + i] = static_cast<std::int8_t>(-mu[offset + i]);
                rest[i] /= static_cast<std::uint32_t>(q);
            }
            const std::uint64_t q2 = q * q;
            for (std::uint64_t m = (s_lo / q2 + 1) * q2; m <= s_hi; m += q2) mu[offset + m - s_lo - 1] = 0;
        }

        for (std::uint64_t pk = q * q; pk <= s_hi; pk *= q) {
            if (pk > s_lo) powers.emplace_back(pk, q);
            if (pk > s_hi / q) break;
        }
    }

    for (std::uint64_t i = 0; i < len; ++i) {
        const std::uint64_t n = s_lo + 1 + i;
        is_prime[offset + i] = n >= 2 && composite[i] == 0;
        if (with_mobius && rest[i] > 1 && mu[offset + i] != 0)
            mu[offset + i] = static_cast<std::int8_t>(-mu[offset + i]);
    }
}

} // namespace

APFilter APFilter::make(std::uint64_t d, std::int64_t a) {
    require(d >= 1, ErrorKind::Domain, "modulus must be >= 1");
    const auto sd = static_cast<std::int64_t>(d);
    APFilter f;
    f.d = d;
    f.a = static_cast<std::uint64_t>(((a % sd) + sd) % sd);
    f.g = std::gcd(f.a, d);
    return f;
}

std::span<const std::uint32_t> base_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        constexpr std::uint32_t limit = 31700; // > sqrt(1e9)
        std::vector<bool> comp(limit + 1, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 2; i <= limit; ++i) {
            if (comp[i]) continue;
            out.push_back(i);
            for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) comp[j] = true;
        }
        return out;
    }();
    return primes;
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    require(contains(n), ErrorKind::Domain, "n outside the sieved interval");
    return is_prime_[n - lo_ - 1];
}

std::uint64_t PrimeTable::prime_power_base(std::uint64_t n) const {
    if (is_prime(n)) return n;
    const auto it = std::lower_bound(powers_.begin(), powers_.end(), std::pair<std::uint64_t, std::uint64_t>{n, 0});
    if (it != powers_.end() && it->first == n) return it->second;
    return 0;
}

double PrimeTable::lambda(std::uint64_t n) const {
    const std::uint64_t p = prime_power_base(n);
    return p == 0 ? 0.0 : std::log(static_cast<double>(p));
}

int PrimeTable::mu(std::uint64_t n) const {
    require(has_mobius(), ErrorKind::Domain, "table built without Moebius values");
    require(contains(n), ErrorKind::Domain, "n outside the sieved interval");
    return mu_[n - lo_ - 1];
}

std::vector<std::uint64_t> PrimeTable::primes() const {
    std::vector<std::uint64_t> out;
    for_each_prime([&](std::uint64_t p) { out.push_back(p); });
    return out;
}

PrimeTable sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveOptions& options) {
    require(lo < hi, ErrorKind::Domain, "sieve_range needs lo < hi");
    require(hi <= kSieveLimit, ErrorKind::RangeTooLarge, "sieve_range: hi beyond 1e9");
    require(hi - lo <= kMaxSegmentSpan, ErrorKind::RangeTooLarge, "sieve_range: interval wider than 1e8");

    PrimeTable table;
    table.lo_ = lo;
    table.hi_ = hi;
    const std::uint64_t len = hi - lo;
    table.is_prime_.assign(len, false);
    if (options.mobius) table.mu_.assign(len, 0);

    const std::uint64_t step = options.segment_size == 0 ? kDefaultSegmentSize : options.segment_size;
    for (std::uint64_t off = 0; off < len; off += step) {
        const std::uint64_t seg = std::min(step, len - off);
        sieve_segment(lo + off, seg, options.mobius, table.is_prime_, off, table.mu_, table.powers_);
    }
    std::sort(table.powers_.begin(), table.powers_.end());
    return table;
}

std::uint64_t euler_phi(std::uint64_t d) {
    require(d >= 1, ErrorKind::Domain, "euler_phi needs d >= 1");
    std::uint64_t result = d;
    std::uint64_t m = d;
    for (std::uint64_t p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        while (m % p == 0) m /= p;
        result -= result / p;
    }
    if (m > 1) result -= result / m;
    return result;
}

std::uint64_t tau_k(std::uint64_t m, unsigned k) {
    require(m >= 1 && k >= 1, ErrorKind::Domain, "tau_k needs m >= 1, k >= 1");
    // Multiplicative: tau_k(p^e) = C(e + k - 1, k - 1).
    auto binom = [](std::uint64_t n, std::uint64_t r) {
        std::uint64_t v = 1;
        for (std::uint64_t i = 1; i <= r; ++i) v = v * (n - r + i) / i;
        return v;
    };
    std::uint64_t result = 1;
    std::uint64_t rest = m;
    for (std::uint64_t p = 2; p * p <= rest; ++p) {
        unsigned e = 0;
        while (rest % p == 0) {
            rest /= p;
            ++e;
        }
        if (e > 0) result *= binom(e + k - 1, k - 1);
    }
    if (rest > 1) result *= k;
    return result;
}

int compare_power(std::uint64_t base, double gamma, std::uint64_t n) {
    require(base >= 1 && n >= 1, ErrorKind::Domain, "compare_power needs positive arguments");
    require(gamma > 0.0 && gamma <= 1.0, ErrorKind::Domain, "compare_power needs 0 < gamma <= 1");

    // gamma*log(base) - log(n); each log carries relative error ~1e-31.
    const ExtReal diff = log(ExtReal::from_integer(base)) * ExtReal(gamma) - log(ExtReal::from_integer(n));
    const double d = diff.to_double();
    if (std::abs(d) > 1e-24) return d > 0 ? 1 : -1;

    // gamma = num / 2^k exactly; compare base^num with n^(2^k).
    const Rational g = rational_from_double(gamma);
    const BigInt num = boost::multiprecision::numerator(g);
    const BigInt den = boost::multiprecision::denominator(g);
    const auto k = static_cast<unsigned>(msb(den));
    const double bits = std::max(num.convert_to<double>() * std::log2(static_cast<double>(base)),
                                 std::ldexp(1.0, static_cast<int>(k)) * std::log2(static_cast<double>(n)));
    if (bits > double(1 << 22)) fail(ErrorKind::Boundary, "boundary: cannot certify power comparison");
    const BigInt lhs = boost::multiprecision::pow(BigInt(base), num.convert_to<unsigned>());
    const BigInt rhs = boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(1u << k));
    if (lhs == rhs) return 0;
    return lhs > rhs ? 1 : -1;
}

int ps_indicator(std::uint64_t p, double gamma, const ExtReal& p_pow, const ExtReal& p1_pow) {
    if (gamma == 1.0) return 1;
    constexpr double kNear = 1e-9;

    // n = ceil(p^gamma)
    std::uint64_t n = 0;
    const double lo_round = std::nearbyint(p_pow.hi);
    if (std::abs((p_pow - ExtReal(lo_round)).to_double()) < kNear) {
        const auto cand = static_cast<std::uint64_t>(lo_round);
        n = compare_power(p, gamma, cand) <= 0 ? cand : cand + 1;
    } else {
        n = static_cast<std::uint64_t>(floor(p_pow).to_double()) + 1;
    }

    // indicator = [n < (p+1)^gamma]
    const ExtReal gap = p1_pow - ExtReal(static_cast<double>(n));
    if (std::abs(gap.to_double()) < kNear) return compare_power(p + 1, gamma, n) > 0 ? 1 : 0;
    return gap.hi > 0.0 ? 1 : 0;
}

bool is_ps_prime(std::uint64_t p, double gamma) {
    require(p >= 2, ErrorKind::Domain, "is_ps_prime needs a prime p");
    require(gamma > 0.0 && gamma <= 1.0, ErrorKind::Domain, "is_ps_prime needs 0 < gamma <= 1");
    if (gamma == 1.0) return true;
    return ps_indicator(p, gamma, pow(p, gamma), pow(p + 1, gamma)) == 1;
}

std::vector<std::uint64_t> primes_in_ap(std::uint64_t x, const APFilter& filter) {
    std::vector<std::uint64_t> out;
    if (x < 2) return out;
    SieveOptions opts;
    opts.mobius = false;
    for (std::uint64_t lo = 0; lo < x; lo += kMaxSegmentSpan) {
        const std::uint64_t hi = std::min(x, lo + kMaxSegmentSpan);
        const auto parts = map_segments<std::vector<std::uint64_t>>(lo, hi, opts, [&](const PrimeTable& t) {
            std::vector<std::uint64_t> v;
            t.for_each_prime([&](std::uint64_t p) {
                if (filter.matches(p)) v.push_back(p);
            });
            return v;
        });
        for (const auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

namespace {

constexpr std::array<char, 8> kCacheMagic{'P', 'S', 'L', 'B', 'S', 'E', 'T', '1'};

void write_u64(std::ostream& os, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t read_u64(std::istream& is) {
    std::array<unsigned char, 8> b{};
    is.read(reinterpret_cast<char*>(b.data()), 8);
    require(static_cast<bool>(is), ErrorKind::Io, "truncated sieve cache header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
}

} // namespace

void save_segment_cache(const std::filesystem::path& path, const PrimeTable& table) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::Io, "cannot open " + path.string());
    os.write(kCacheMagic.data(), kCacheMagic.size());
    write_u64(os, table.lo());
    write_u64(os, table.hi());
    const auto& bits = table.prime_bits();
    write_u64(os, bits.size());
    std::vector<unsigned char> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) bytes[i / 8] |= static_cast<unsigned char>(1u << (i % 8));
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(os), ErrorKind::Io, "write failed for " + path.string());
}

PrimeTable load_segment_cache(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorKind::Io, "cannot open " + path.string());
    std::array<char, 8> magic{};
    is.read(magic.data(), magic.size());
    require(static_cast<bool>(is) && magic == kCacheMagic, ErrorKind::Io, "not a sieve cache file");
    const std::uint64_t lo = read_u64(is);
    const std::uint64_t hi = read_u64(is);
    const std::uint64_t nbits = read_u64(is);
    require(lo < hi && hi <= kSieveLimit && hi - lo <= kMaxSegmentSpan && nbits == hi - lo, ErrorKind::Io,
            "inconsistent sieve cache header");
    std::vector<unsigned char> bytes((nbits + 7) / 8);
    is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(is), ErrorKind::Io, "truncated sieve cache payload");
    require(is.peek() == std::char_traits<char>::eof(), ErrorKind::Io, "trailing bytes in sieve cache");

    PrimeTable table;
    table.lo_ = lo;
    table.hi_ = hi;
    table.is_prime_.assign(nbits, false);
    for (std::uint64_t i = 0; i < nbits; ++i) table.is_prime_[i] = (bytes[i / 8] >> (i % 8)) & 1u;
    for (const std::uint32_t q32 : base_primes()) {
        const std::uint64_t q = q32;
        if (q * q > hi) break;
        for (std::uint64_t pk = q * q; pk <= hi; pk *= q) {
            if (pk > lo) table.powers_.emplace_back(pk, q);
            if (pk > hi / q) break;
        }
    }
    std::sort(table.powers_.begin(), table.powers_.end());
    return table;
}

} // namespace pslab
