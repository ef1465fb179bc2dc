// Prints the explicit-formula residual along a gamma_max ladder for a
// chosen product, with the per-class kernel partials of the last level.
//
//   residual_ladder [t1 t2 z]

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "motohashi/motohashi.hpp"

using namespace motohashi;

int main(int argc, char** argv) {
    try {
        const SpectralParams p = argc == 4 ? SpectralParams(std::atof(argv[1]), std::atof(argv[2]), std::atof(argv[3]))
                                           : SpectralParams(1.0, 2.0, 4.0);
        const auto zeros = ZeroTable::from_file(MOTOHASHI_DEFAULT_ZEROS);
        const MotohashiProduct product(p, &zeros);
        std::vector<ExplicitFormulaParams> list;
        for (const double g : {50.0, 100.0, 200.0, 500.0}) {
            ExplicitFormulaParams ep;
            ep.s = Complex{3.0, 0.5};
            ep.policy.gamma_max = g;
            ep.policy.k_max = 400;
            ep.policy.rect = Rect(-6.0, 3.0, -99.5, 100.5);
            list.push_back(ep);
        }
        const auto reports = residual_sweep(list, product, zeros);
        std::printf("gamma_max,residual_abs,tail_bound\n");
        for (std::size_t i = 0; i < reports.size(); ++i)
            std::printf("%g,%.6e,%.6e\n", list[i].policy.gamma_max, std::abs(reports[i].residual),
                        kernel_tail_bound(list[i], p, zeros));
        std::printf("\nclass,re,im,points\n");
        const auto& last = reports.back();
        for (const auto c : kAllClasses)
            std::printf("%s,%.6e,%.6e,%zu\n", std::string(to_string(c)).c_str(), last.per_class.at(c).real(),
                        last.per_class.at(c).imag(), last.per_class_points.count(c) ? last.per_class_points.at(c) : 0);
    } catch (const Error& e) {
        std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
        return 2;
    }
}
