#include "dgff/random.hpp"

namespace dgff {

Rng SeedStream::stream(std::uint64_t replica, std::uint64_t tag) const
{
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(master_), hi(master_), lo(tag), hi(tag), lo(replica), hi(replica)};
    return Rng(seq);
}

SeedStream SeedStream::child(std::uint64_t tag) const
{
    Rng r = stream(0xffffffffffffffffull, tag);
    return SeedStream(r());
}

std::uint64_t stream_tag(std::string_view name)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : name) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void fill_standard_normal(Rng& rng, std::span<double> out)
{
    boost::random::normal_distribution<double> nd;
    for (double& v : out) v = nd(rng);
}

} // namespace dgff
