#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

#include <boost/random/normal_distribution.hpp>

namespace dgff {

using Rng = std::mt19937_64;

// Counter-based derivation: the stream for (master, tag, replica) is an
// mt19937_64 seeded through std::seed_seq with the six 32-bit halves.
class SeedStream {
public:
    explicit SeedStream(std::uint64_t master) : master_(master) {}

    std::uint64_t master() const { return master_; }
    Rng stream(std::uint64_t replica, std::uint64_t tag = 0) const;
    // Child sequence whose streams are disjoint from this one's for distinct tags.
    SeedStream child(std::uint64_t tag) const;

private:
    std::uint64_t master_;
};

// Stable tag for a component name (FNV-1a).
std::uint64_t stream_tag(std::string_view name);

inline double standard_normal(Rng& rng)
{
    boost::random::normal_distribution<double> nd;
    return nd(rng);
}

void fill_standard_normal(Rng& rng, std::span<double> out);

inline double uniform01(Rng& rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace dgff
