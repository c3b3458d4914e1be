#include "rigidflow/admissibility.hpp"

#include <algorithm>
#include <cmath>

namespace rigidflow {

double lambda_max_rank_one(Vec2 grad, double rho) {
    if (!(rho > 0.0)) throw InputError("lambda_max_rank_one: rho must be > 0");
    return grad.norm2() / rho;
}

double lambda_max_rank_one(Vec3 grad, double rho) {
    if (!(rho > 0.0)) throw InputError("lambda_max_rank_one: rho must be > 0");
    return grad.norm2() / rho;
}

double SubsolutionSamples::bound(int dim) const {
    double acc = -1e300;
    for (std::size_t i = 0; i < lambda_max.size(); ++i) {
        double v = 0.5 * dim * (lambda_max[i] + dt_phi[i] + pressure[i]);
        if (!std::isfinite(v)) throw InputError("subsolution samples: non-finite field value");
        acc = std::max(acc, v);
    }
    return acc;
}

LambdaSchedule select_lambda(const std::vector<double>& times,
                             const std::vector<SubsolutionSamples>& slices, int dim, double epsilon) {
    if (times.size() != slices.size()) throw InputError("select_lambda: time/sample count mismatch");
    if (!(epsilon > 0.0)) throw InputError("select_lambda: epsilon must be > 0");
    LambdaSchedule sched;
    sched.times = times;
    sched.epsilon = epsilon;
    sched.lambda.resize(slices.size());
    sched.attained_max.resize(slices.size());
    for (std::size_t k = 0; k < slices.size(); ++k) {
        sched.attained_max[k] = slices[k].bound(dim);
        sched.lambda[k] = sched.attained_max[k] + epsilon;
    }
    return sched;
}

EnergyRow total_energy(const EnergySliceInput& in, int dim) {
    EnergyRow row;
    row.time = in.time;
    row.lambda = in.lambda;
    row.rigid = in.rigid;
    row.fluid = in.lambda * in.fluid_area + in.integral_potential -
                0.5 * dim * (in.integral_dt_phi + in.integral_pressure);
    row.total = row.fluid + in.rigid;
    row.total_direct = in.integral_E + in.integral_potential + in.rigid;
    row.form_gap = std::abs(row.total_direct - row.total) / std::max(std::abs(row.total), 1e-300);
    return row;
}

std::vector<double> enforce_decreasing_energy(const std::vector<EnergySliceInput>& slices, int dim,
                                              const std::vector<double>& lambda, double delta) {
    if (slices.size() != lambda.size())
        throw InputError("enforce_decreasing_energy: slice/lambda count mismatch");
    std::vector<double> raised = lambda;
    if (slices.size() < 2) return raised;
    auto closed_total = [&](std::size_t k, double lam) {
        return lam * slices[k].fluid_area + slices[k].integral_potential -
               0.5 * dim * (slices[k].integral_dt_phi + slices[k].integral_pressure) + slices[k].rigid;
    };
    double next = closed_total(slices.size() - 1, raised.back());
    for (std::size_t k = slices.size() - 1; k-- > 0;) {
        double cur = closed_total(k, raised[k]);
        double need = next + delta;
        if (cur < need) {
            raised[k] += (need - cur) / slices[k].fluid_area;
            cur = need;
        }
        next = cur;
    }
    return raised;
}

EnergyInequalityVerdict energy_inequality_check(const std::vector<double>& totals, int s,
                                                double reference) {
    EnergyInequalityVerdict v;
    v.holds = true;
    for (std::size_t k = static_cast<std::size_t>(s); k < totals.size(); ++k) {
        if (totals[k] > reference) {
            v.holds = false;
            v.first_violation = static_cast<int>(k);
            break;
        }
    }
    return v;
}

}  // namespace rigidflow
