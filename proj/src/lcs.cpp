#include "senseflow/lcs.hpp"

#include <algorithm>

namespace senseflow {

namespace {

// suffix[i][j] = LCS length of a[i..] and b[j..], laid out row-major on a
// (|a|+1) x (|b|+1) grid.
std::vector<std::size_t> suffix_table(const GatewaySeq& a, const GatewaySeq& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::size_t> s((n + 1) * (m + 1), 0);
    auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return s[i * (m + 1) + j]; };
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = m; j-- > 0;) {
            if (a[i] == b[j])
                at(i, j) = at(i + 1, j + 1) + 1;
            else
                at(i, j) = std::max(at(i + 1, j), at(i, j + 1));
        }
    }
    return s;
}

} // namespace

std::size_t lcs_length(const GatewaySeq& a, const GatewaySeq& b) {
    if (a.empty() || b.empty()) return 0;
    // One rolling row is enough for the length alone.
    const GatewaySeq& shorter = a.size() <= b.size() ? a : b;
    const GatewaySeq& longer = a.size() <= b.size() ? b : a;
    std::vector<std::size_t> row(shorter.size() + 1, 0);
    for (std::size_t i = 0; i < longer.size(); ++i) {
        std::size_t diag = 0;
        for (std::size_t j = 0; j < shorter.size(); ++j) {
            std::size_t prev = row[j + 1];
            if (longer[i] == shorter[j])
                row[j + 1] = diag + 1;
            else
                row[j + 1] = std::max(row[j + 1], row[j]);
            diag = prev;
        }
    }
    return row[shorter.size()];
}

GatewaySeq lcs(const GatewaySeq& a, const GatewaySeq& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t n = a.size(), m = b.size();
    auto s = suffix_table(a, b);
    auto at = [&](std::size_t i, std::size_t j) { return s[i * (m + 1) + j]; };

    GatewaySeq out;
    out.reserve(at(0, 0));
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (a[i] == b[j]) {
            out.push_back(a[i]);
            ++i;
            ++j;
        } else if (at(i + 1, j) > at(i, j + 1)) {
            ++i;
        } else {
            // On ties, advancing in b keeps a[i] available for a later match,
            // which yields the earliest match positions in a.
            ++j;
        }
    }
    return out;
}

bool matches_trajectory(const GatewaySeq& x, const GatewaySeq& j) {
    if (j.empty()) throw InvariantError("targeting trajectory must be non-empty");
    return lcs_length(x, j) == j.size();
}

std::optional<std::size_t> recognize_trajectory(const GatewaySeq& x,
                                                const std::vector<GatewaySeq>& candidates) {
    if (candidates.empty()) throw InvariantError("candidate list must be non-empty");
    std::size_t best = 0, best_len = 0, best_count = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        std::size_t len = lcs_length(x, candidates[k]);
        if (len > best_len) {
            best_len = len;
            best = k;
            best_count = 1;
        } else if (len == best_len) {
            ++best_count;
        }
    }
    if (best_len == 0 || best_count > 1) return std::nullopt;
    return best;
}

double detection_error(long detected, long truth) {
    if (truth <= 0) throw ZeroTruthError("detection error needs a positive ground-truth count");
    return static_cast<double>(detected - truth) / static_cast<double>(truth);
}

double tracking_accuracy(const GatewaySeq& observed, const GatewaySeq& planted) {
    if (planted.empty()) throw InvariantError("planted trajectory must be non-empty");
    return static_cast<double>(lcs_length(observed, planted)) /
           static_cast<double>(planted.size());
}

} // namespace senseflow
