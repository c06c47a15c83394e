#include "windatc/admittance.hpp"

#include <complex>

namespace windatc::grid {

AdmittanceMatrix build_admittance(const PowerNetwork& net) {
    using cd = std::complex<double>;
    const int n = net.n_buses();
    AdmittanceMatrix Y = AdmittanceMatrix::Zero(n, n);

    for (const Branch& br : net.branches()) {
        int i = net.bus_index(br.from);
        int j = net.bus_index(br.to);
        cd y = 1.0 / cd(br.r, br.x);
        cd ysh(0.0, br.charging / 2.0);
        double t = br.tap;
        Y(i, i) += (y + ysh) / (t * t);
        Y(j, j) += y + ysh;
        Y(i, j) -= y / t;
        Y(j, i) -= y / t;
    }

    for (const Bus& bus : net.buses()) {
        int i = net.bus_index(bus.id);
        Y(i, i) += cd(bus.shunt_g, bus.shunt_b) / net.base_mva();
    }
    return Y;
}

}  // namespace windatc::grid
