#include "cpbnr/observables.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>

namespace cpbnr {

ReducedInnerProducts inner_products(const AmplitudeState& state) {
    ReducedInnerProducts p;
    for (const std::complex<double>& c : state.ce) p.r11 += std::norm(c);
    for (const std::complex<double>& c : state.cg) p.r22 += std::norm(c);
    // cg[n] holds C_{g,n+1}, so the paper's pairing C*_{e,n+1} C_{g,n+1} is
    // conj(ce[n+1]) * cg[n].
    for (std::size_t n = 0; n + 1 < state.ce.size(); ++n)
        p.r12 += std::conj(state.ce[n + 1]) * state.cg[n];
    return p;
}

double entropy_from_products(const ReducedInnerProducts& p, bool renormalize) {
    double r11 = p.r11;
    double r22 = p.r22;
    std::complex<double> r12 = p.r12;
    if (renormalize) {
        const double total = r11 + r22;
        if (!(total > 0.0))
            throw consistency_error("cannot renormalize a state with vanishing norm");
        r11 /= total;
        r22 /= total;
        r12 /= total;
    }

    const double diff = r11 - r22;
    const double disc = std::sqrt(diff * diff + 4.0 * std::norm(r12));
    const double lp = 0.5 * (1.0 + disc);
    double lm = 1.0 - lp;

    if (lm < 0.0) {
        if (lm < -1e-12) {
            std::ostringstream msg;
            msg << "reduced-state eigenvalue " << lm << " below -1e-12 (r11=" << r11
                << ", r22=" << r22 << ", |r12|=" << std::abs(r12) << ")";
            throw consistency_error(msg.str());
        }
        lm = 0.0;
    }
    const double lp_used = 1.0 - lm;

    const double ln2 = std::log(2.0);
    double s = 0.0;
    if (lp_used > 0.0) s -= lp_used * std::log(lp_used);
    if (lm > 0.0) s -= lm * std::log(lm);
    if (s < 0.0) s = 0.0;
    if (s > ln2) s = ln2;
    return s;
}

double entropy(const AmplitudeState& state) {
    return entropy_from_products(inner_products(state));
}

double inversion(const AmplitudeState& state) {
    const ReducedInnerProducts p = inner_products(state);
    return p.r11 - p.r22;
}

ObservableSeries series(const std::vector<AmplitudeState>& states, bool renormalize_entropy) {
    ObservableSeries out;
    out.tau.reserve(states.size());
    out.entropy.reserve(states.size());
    out.inversion.reserve(states.size());
    out.norm2.reserve(states.size());
    for (const AmplitudeState& st : states) {
        const ReducedInnerProducts p = inner_products(st);
        out.tau.push_back(st.t);
        out.entropy.push_back(entropy_from_products(p, renormalize_entropy));
        out.inversion.push_back(p.r11 - p.r22);
        out.norm2.push_back(p.r11 + p.r22);
    }
    return out;
}

} // namespace cpbnr
