#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "delayfp/assignment.hpp"
#include "delayfp/codebook.hpp"
#include "delayfp/signal.hpp"

namespace delayfp {

enum class Scheme { original, improved };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

struct EmbedSpec {
  int user = 0;
  Scheme scheme = Scheme::original;
  SchemeParams params;
};

// Frame embedding. A code embedded with delay d is cyclically delayed within
// the frame: sample p is perturbed by alpha*|x_p|*w[(p - d) mod n].

std::vector<double> embed_frame_original(std::span<const double> x,
                                         const FingerprintCode& code, int delay,
                                         double alpha);

/// Adds the sync code at its base delay on top of the group code, both at
/// strength alpha relative to the sample's own magnitude.
std::vector<double> embed_frame_improved(std::span<const double> x,
                                         const FingerprintCode& code, int delay,
                                         const SyncCode& sync, double alpha);

/// Embeds every complete frame; a trailing partial frame passes through.
Signal embed_stream(const Signal& x, const EmbedSpec& spec, const Codebook& codebook);

} // namespace delayfp
