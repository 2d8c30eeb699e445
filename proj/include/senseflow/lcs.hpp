#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "senseflow/types.hpp"

namespace senseflow {

/// A trajectory as an ordered gateway-id sequence (no timing attached).
using GatewaySeq = std::vector<GatewayId>;

/// Length of a longest common subsequence of a and b.
std::size_t lcs_length(const GatewaySeq& a, const GatewaySeq& b);

/// A longest common subsequence by dynamic programming. When several LCS of
/// maximal length exist, returns the one using the earliest match positions
/// in `a`, which makes the result deterministic.
GatewaySeq lcs(const GatewaySeq& a, const GatewaySeq& b);

/// True iff lcs(x, j) == j, i.e. j is a subsequence of x: the phone has
/// travelled along the targeting trajectory j. Requires j non-empty.
bool matches_trajectory(const GatewaySeq& x, const GatewaySeq& j);

/// Picks the candidate with strictly greatest LCS length against x. Returns
/// the candidate index, or nullopt when the maximum is shared by two or more
/// candidates (or no candidate has any node in common with x) — the
/// trajectory cannot be attributed. Requires candidates non-empty.
std::optional<std::size_t> recognize_trajectory(const GatewaySeq& x,
                                                const std::vector<GatewaySeq>& candidates);

/// Signed relative counting error: (detected - truth) / truth.
/// Positive means overcount, zero exact, negative undercount.
/// Throws ZeroTruthError unless truth > 0.
double detection_error(long detected, long truth);

/// Tracking accuracy: fraction of the planted walk's locations detected in
/// order, len(lcs(observed, planted)) / len(planted), in [0, 1].
/// Requires planted non-empty.
double tracking_accuracy(const GatewaySeq& observed, const GatewaySeq& planted);

} // namespace senseflow
