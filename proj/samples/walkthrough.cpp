// Walk through the quartic double solid example: the involution tau_q, the
// stability parameters it fixes, the walls for (0, H, -2) along the fixed
// family, and the classes sitting over -mu2 in the Kuznetsov lattice.

#include <iostream>

#include "mukai/mukai.hpp"

int main() {
    using namespace mukai;
    const SurfaceParams sp(Int(2));

    const LatticeIsometry t = tau_q();
    std::cout << "tau_q on (r, a, s):\n" << t.exact_matrix() << "\n";
    const FixedPair fp = fixed_pair(t);
    std::cout << "fixed (x, y) = (" << fp.params->x << ", " << fp.params->y << ")\n";
    std::cout << "invariant lattice rows:\n" << fixed_lattice(t) << "\n";

    const MukaiVector v = MukaiVector::exact(0, 1, -2);
    for (const WallReport& w : find_walls(quartic_family(), v, sp, WallMode::Exact, 0, 10)) {
        std::cout << "wall at t = " << w.t << " (linear " << w.t_linear << "): " << w.destabilizer << " + " << w.quotient
                  << ", " << to_string(w.classification.kind) << "\n";
    }

    const KuLattice ku(KuName::QDS);
    std::cout << "classes over -mu2:";
    for (const MukaiVector& u : fiber(ku, {0, -1}, sp, FiberMode::Exact)) std::cout << " " << u;
    std::cout << "\n";
}
