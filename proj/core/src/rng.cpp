#include "tarifflab/rng.hpp"

namespace tarifflab {

namespace {

inline uint64_t splitmix_finalize(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

uint64_t RngStream::next_u64() {
    uint64_t z = key_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    return splitmix_finalize(z);
}

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RngStream RngStream::substream(uint64_t label) const {
    return RngStream(splitmix_finalize(key_ ^ splitmix_finalize(label + 0xA0761D6478BD642Full)));
}

RngStream RngStream::substream(std::string_view label) const {
    return substream(fnv1a64(label));
}

uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace tarifflab
