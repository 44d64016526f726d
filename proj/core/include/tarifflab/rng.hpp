#pragma once

#include <cstdint>
#include <string_view>

namespace tarifflab {

// Counter-based deterministic stream. Substreams are derived from the stream
// key and a label, never from the draw position, so a fixed seed reproduces
// the same draw sequence regardless of interleaving elsewhere.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : key_(seed) {}

    uint64_t next_u64();

    // Uniform in [0,1) with 53 random bits; Monte Carlo paths only.
    double next_double();

    RngStream substream(uint64_t label) const;
    RngStream substream(std::string_view label) const;

    uint64_t key() const { return key_; }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

uint64_t fnv1a64(std::string_view s);

}  // namespace tarifflab
