// Library tour: set up two linear forms on Z_5, check the intersection
// conditions, test D_{2,1} membership of the joint law, and run the
// symmetrize -> eliminate -> classify pipeline on a point-mass instance.

#include <cstdio>

#include "charlab/charlab.hpp"

using namespace charlab;

int main() {
    Group X({5});
    CoeffSystem cs = CoeffSystem::from_scalars(X, {{1, 1}, {1, 2}});

    ConditionResult c11 = check_condition_11(cs);
    ConditionResult c12 = check_condition_12(cs);
    std::printf("condition (11): %s, condition (12): %s\n", c11.holds ? "holds" : "fails",
                c12.holds ? "holds" : "fails");

    // independent inputs with nonvanishing characteristic functions
    Distribution mu1 = sample_distribution(X, 2024, 0.6);
    Distribution mu2 = sample_distribution(X, 2025, 0.6);
    JointCharFunction joint = joint_of_linear_forms(cs, {mu1, mu2});
    DmkResult dm = is_in_Dmk(joint, 1);
    std::printf("random marginals: D_{2,1} residual %.3e -> %s\n", dm.residual,
                dm.member ? "member" : "not a member");

    // point masses: the joint is always a member and the full pipeline runs
    Distribution d1 = Distribution::delta(X, {2});
    Distribution d2 = Distribution::delta(X, {4});
    JointCharFunction joint0 = joint_of_linear_forms(cs, {d1, d2});
    DmkResult dm0 = is_in_Dmk(joint0, 1);
    PipelineOutcome pipe = run_member_pipeline(cs, {d1, d2}, dm0.residual, 1e-9, 42);
    std::printf("point masses:   D_{2,1} residual %.3e -> member; pipeline %s\n", dm0.residual,
                pipe.ok ? "certified" : pipe.failure.c_str());
    for (const EliminationCertificate& cert : pipe.certificates)
        std::printf("  psi_%zu: polynomial degree %d, residual %.3e, %zu elimination shifts\n",
                    cert.target + 1, cert.final_degree, cert.residual, cert.shifts.size());
    return 0;
}
