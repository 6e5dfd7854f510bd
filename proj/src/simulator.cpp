#include "slskit/simulator.hpp"

#include <iomanip>
#include <sstream>

#include "slskit/errors.hpp"

namespace slskit {

SimulationResult run_simulation(SystemModel& system, ControllerModel& controller,
                                NoiseModel& noise, int horizon) {
    if (horizon < 1) {
        throw InvalidArgument("run_simulation: horizon must be >= 1");
    }
    const SystemDims d = system.dims();
    if (noise.dim() != d.nw) {
        throw DimensionMismatch("run_simulation: noise dimension " +
                                std::to_string(noise.dim()) + " != system nw " +
                                std::to_string(d.nw));
    }
    if (controller.measurement_dim() != d.ny) {
        throw DimensionMismatch("run_simulation: controller expects y of dimension " +
                                std::to_string(controller.measurement_dim()) +
                                ", system produces " + std::to_string(d.ny));
    }
    if (controller.control_dim() != d.nu) {
        throw DimensionMismatch("run_simulation: controller produces u of dimension " +
                                std::to_string(controller.control_dim()) +
                                ", system expects " + std::to_string(d.nu));
    }
    if (system.direct_feedthrough()) {
        throw UnsupportedFeedthrough(
            "run_simulation: systems with direct measurement feedthrough (D22 != 0) create "
            "an algebraic loop; closed-loop simulation rejects them");
    }

    system.reset();
    controller.reset();
    noise.reset();

    SimulationResult r{Signal(d.nx), Signal(d.ny), Signal(d.nu),
                       Signal(d.nw), Signal(d.nz), SimulationMetadata{}};
    r.metadata.horizon = horizon;
    r.metadata.system = system.describe();
    r.metadata.controller = controller.describe();
    r.metadata.noise = noise.describe();

    for (int t = 0; t < horizon; ++t) {
        const Vector w = noise.sample(t);
        const Vector x = system.state();
        const Vector y = system.measure(w);
        const Vector u = controller.control(y);
        const auto out = system.step(u, w);
        r.x.push_back(x);
        r.y.push_back(y);
        r.u.push_back(u);
        r.w.push_back(w);
        r.zbar.push_back(out.zbar);
    }
    return r;
}

std::unique_ptr<ControllerModel> run_synthesis(const SynthesisAlgorithm& algorithm,
                                               const SystemModel& system) {
    const SystemDims d = system.dims();
    if (d.nu == 0) {
        throw DimensionMismatch("run_synthesis: system has no actuators (nu = 0)");
    }
    if (d.nx == 0) {
        throw DimensionMismatch("run_synthesis: system has no state (nx = 0)");
    }
    auto controller = algorithm.synthesize(system);
    if (controller->measurement_dim() != d.ny || controller->control_dim() != d.nu) {
        throw DimensionMismatch("run_synthesis: synthesized controller dimensions (" +
                                std::to_string(controller->measurement_dim()) + ", " +
                                std::to_string(controller->control_dim()) +
                                ") do not match the system (ny, nu)");
    }
    return controller;
}

namespace {

double signal_energy(const Signal& s) {
    double e = 0.0;
    for (int t = 0; t < s.length(); ++t) {
        e += s[t].squaredNorm();
    }
    return e;
}

double signal_max_diff(const Signal& a, const Signal& b) {
    double m = 0.0;
    for (int t = 0; t < a.length(); ++t) {
        m = std::max(m, (a[t] - b[t]).cwiseAbs().maxCoeff());
    }
    return m;
}

}  // namespace

ComparisonReport compare(std::span<const SimulationResult> results) {
    if (results.empty()) {
        throw InvalidArgument("compare: no results given");
    }
    const auto& base = results[0];
    const Signal* base_signals[] = {&base.x, &base.y, &base.u, &base.w, &base.zbar};
    for (const auto& r : results) {
        const Signal* sig[] = {&r.x, &r.y, &r.u, &r.w, &r.zbar};
        if (r.metadata.horizon != base.metadata.horizon) {
            throw DimensionMismatch("compare: results have different horizons");
        }
        for (int s = 0; s < 5; ++s) {
            if (sig[s]->dimension() != base_signals[s]->dimension()) {
                throw DimensionMismatch("compare: results have different signal dimensions");
            }
        }
    }

    ComparisonReport rep;
    rep.signal_names = {"x", "y", "u", "w", "zbar"};
    const int n = static_cast<int>(results.size());
    rep.max_abs_diff = Matrix::Zero(n, 5);
    rep.energy = Matrix::Zero(n, 5);
    for (int i = 0; i < n; ++i) {
        const auto& r = results[static_cast<size_t>(i)];
        const Signal* sig[] = {&r.x, &r.y, &r.u, &r.w, &r.zbar};
        for (int s = 0; s < 5; ++s) {
            rep.energy(i, s) = signal_energy(*sig[s]);
            rep.max_abs_diff(i, s) = signal_max_diff(*sig[s], *base_signals[s]);
        }
    }
    return rep;
}

std::string ComparisonReport::format() const {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3);
    os << "signal      ";
    for (const auto& n : signal_names) {
        os << std::setw(12) << n;
    }
    os << '\n';
    for (int i = 0; i < energy.rows(); ++i) {
        os << "energy[" << i << "]   ";
        for (int s = 0; s < energy.cols(); ++s) {
            os << std::setw(12) << energy(i, s);
        }
        os << '\n';
        if (i > 0) {
            os << "maxdiff[" << i << "]  ";
            for (int s = 0; s < max_abs_diff.cols(); ++s) {
                os << std::setw(12) << max_abs_diff(i, s);
            }
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace slskit
