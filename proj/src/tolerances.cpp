#include "opflab/tolerances.hpp"

#include <stdexcept>

namespace opflab {

void Tolerances::set(const std::string& name, double value) {
    if (value <= 0) throw std::invalid_argument("tolerance must be positive: " + name);
    if (name == "hermiticity") hermiticity = value;
    else if (name == "psd_floor") psd_floor = value;
    else if (name == "equality") equality = value;
    else if (name == "support") support = value;
    else if (name == "completeness") completeness = value;
    else if (name == "rank_cut") rank_cut = value;
    else if (name == "casimir_rel") casimir_rel = value;
    else if (name == "prob_clamp") prob_clamp = value;
    else throw std::invalid_argument("unknown tolerance: " + name);
}

std::map<std::string, double> Tolerances::as_map() const {
    return {
        {"hermiticity", hermiticity}, {"psd_floor", psd_floor},
        {"equality", equality},       {"support", support},
        {"completeness", completeness}, {"rank_cut", rank_cut},
        {"casimir_rel", casimir_rel}, {"prob_clamp", prob_clamp},
    };
}

Tolerances& tolerances() {
    static Tolerances t;
    return t;
}

}  // namespace opflab
