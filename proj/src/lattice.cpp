#include "qdiff/classify.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/moduli.hpp"

#include <set>

namespace qd {

GlobalLattice global_lattice(const DiffModule& M, const Rat& T) {
    const auto types = formal_decompose(M, T);
    std::set<Rat> slopes;
    for (const auto& t : types) slopes.insert(t.type.slope);
    GlobalLattice out;
    out.slopes.assign(slopes.begin(), slopes.end());
    if (slopes.size() == 1 && *slopes.begin() == Rat(0)) {
        out.kind = LatticeCase::RegularSingular;
        out.normal_form = DiffModule::from_B(to_series(rs_normalize(M, T).W), T);
        return out;
    }
    if (slopes.size() == 1) {
        out.kind = LatticeCase::Pure;
        bool first = true;
        for (const auto& t : types)
            for (long long k = 0; k < t.mult; ++k) {
                DiffModule P = pure_module(t.type);
                out.normal_form = first ? P : construct(ConstructKind::DSum, out.normal_form, P);
                first = false;
            }
        return out;
    }
    if (slopes.size() > 2)
        fail(ErrorKind::UnsupportedShape, "global normal form is only implemented for at most two slopes");
    out.kind = LatticeCase::TwoSlopes;
    out.normal_form = moduli_point(M, T).normal_form;
    return out;
}

}  // namespace qd
