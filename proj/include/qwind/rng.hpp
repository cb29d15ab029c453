#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace qwind {

/// Generator family recorded in configs and reports.
inline constexpr std::string_view kGeneratorName = "philox4x32-10";

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3").
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

/// Substream tags. Each path draws independent variates for independent
/// purposes from distinct substreams so that, e.g., the 3-d Gaussian of the
/// time change never shares bits with the radial increments.
enum class Substream : std::uint32_t
{
    radial = 0,
    ambient = 1,
    winding = 2,
    endpoint = 3,
    test = 0xffff,
};

/// Counter-based stream keyed by (masterSeed, pathIndex, substream). Copies
/// are independent cursors; no state is shared between streams.
class RngStream
{
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t path_index, Substream sub);

    std::uint32_t next_u32();
    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();
    /// Standard normal (Box-Muller, pairs cached).
    double normal();
    /// Gamma(shape, 1) by Marsaglia-Tsang.
    double gamma(double shape);

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace qwind
