#pragma once

#include <cstdint>

namespace tailrisk {

// Counter-based splittable generator. Each stream is identified by
// (experiment id, replication index) and draws are a pure function of
// (key, counter), so parallel replications never share mutable state and
// common-random-number experiments can replay any stream independently.
class Rng {
  public:
    Rng() : key_(0), ctr_(0) {}
    explicit Rng(std::uint64_t key) : key_(key), ctr_(0) {}

    static Rng stream(std::uint64_t experiment_id, std::uint64_t replication) {
        return Rng(mix(mix(0x9e3779b97f4a7c15ULL ^ experiment_id) + replication));
    }

    // Derived stream with an independent key; does not advance this stream.
    Rng split(std::uint64_t substream) const { return Rng(mix(key_ ^ mix(substream + 0x517cc1b727220a95ULL))); }

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * (++ctr_)); }

    // Uniform on the open interval (0,1): safe to pass through inverse cdfs.
    double next_uniform() {
        const std::uint64_t r = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(r) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t key() const { return key_; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t ctr_;
};

}  // namespace tailrisk
