#pragma once

#include <stdexcept>
#include <vector>

namespace fbdiv::timing {

/// Thrown when a latency budget cannot accommodate the requested operation.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Channel-use ledger for one configuration. All quantities are whole
/// channel uses.
struct ProtocolBudget {
    int u;        // latency budget
    int p;        // cost of one RF-chain switch
    int q;        // cost of measuring one antenna
    int d;        // nominal feedback cost
    int antennas; // M >= 2
    int k;        // payload bits

    ProtocolBudget(int u, int p, int q, int d, int antennas, int k);
};

/// True iff a full scan of all antennas leaves transmission time: u > (p+q)M.
bool feasible(const ProtocolBudget& b);

/// Channel uses left after scanning every antenna and switching back to the
/// best one. Throws InfeasibleError when u <= (p+q)M.
int n_sc(const ProtocolBudget& b);

/// Channel uses consumed by i switches: (i+1) measurements plus i switches.
int z(const ProtocolBudget& b, int i);

/// Feedback cost actually paid after stopping with i switches done: the
/// nominal d when it fits the remaining budget, otherwise the cost of
/// waiting for the transmitter's automatic send at M(p+q).
int actual_feedback_delay(const ProtocolBudget& b, int i);

/// Transmission blocklength when stopping after i switches (i < M), or n_sc
/// for the full-scan fallback (i = M). Throws InfeasibleError when fewer
/// than one channel use would remain.
int n_i(const ProtocolBudget& b, int i);

/// All blocklengths n_0 .. n_M. Requires a feasible budget; for a feasible
/// budget every entry is >= 1.
std::vector<int> n_values(const ProtocolBudget& b);

} // namespace fbdiv::timing
