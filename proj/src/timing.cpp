#include "fbdiv/timing.hpp"

#include <string>

namespace fbdiv::timing {

namespace {
void check_switch_index(const ProtocolBudget& b, int i) {
    if (i < 0 || i > b.antennas - 1)
        throw std::out_of_range("switch count must lie in [0, M-1], got " +
                                std::to_string(i));
}
} // namespace

ProtocolBudget::ProtocolBudget(int u_, int p_, int q_, int d_, int antennas_, int k_)
    : u(u_), p(p_), q(q_), d(d_), antennas(antennas_), k(k_) {
    if (u < 1 || p < 1 || q < 1 || d < 1 || k < 1)
        throw std::domain_error("ProtocolBudget: u, p, q, d, k must be positive");
    if (antennas < 2)
        throw std::domain_error("ProtocolBudget: requires M >= 2 antennas");
}

bool feasible(const ProtocolBudget& b) {
    return b.u > (b.p + b.q) * b.antennas;
}

int n_sc(const ProtocolBudget& b) {
    if (!feasible(b))
        throw InfeasibleError("budget infeasible: u=" + std::to_string(b.u) +
                              " must exceed (p+q)*M=" +
                              std::to_string((b.p + b.q) * b.antennas));
    return b.u - (b.p + b.q) * b.antennas;
}

int z(const ProtocolBudget& b, int i) {
    check_switch_index(b, i);
    return (i + 1) * b.q + i * b.p;
}

int actual_feedback_delay(const ProtocolBudget& b, int i) {
    check_switch_index(b, i);
    if (b.d < b.u - z(b, i)) return b.d;
    // Feedback would eat the rest of the budget: wait until the transmitter
    // sends automatically at M(p+q), as if all antennas had been scanned.
    return (b.antennas - i) * b.p + (b.antennas - i - 1) * b.q;
}

int n_i(const ProtocolBudget& b, int i) {
    if (i == b.antennas) return n_sc(b);
    check_switch_index(b, i);
    const int remaining = b.u - (z(b, i) + actual_feedback_delay(b, i));
    if (remaining < 1)
        throw InfeasibleError("no transmission time left after " + std::to_string(i) +
                              " switches (u=" + std::to_string(b.u) + ")");
    return remaining;
}

std::vector<int> n_values(const ProtocolBudget& b) {
    std::vector<int> ns;
    ns.reserve(b.antennas + 1);
    const int fallback = n_sc(b);  // also validates feasibility
    for (int i = 0; i < b.antennas; ++i)
        ns.push_back(b.u - (z(b, i) + actual_feedback_delay(b, i)));
    ns.push_back(fallback);
    return ns;
}

} // namespace fbdiv::timing
