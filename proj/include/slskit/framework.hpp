#pragma once

#include <memory>
#include <string>

#include "slskit/signal.hpp"
#include "slskit/types.hpp"

namespace slskit {

struct SystemDims {
    int nx = 0;  // state
    int nu = 0;  // control
    int nw = 0;  // noise
    int ny = 0;  // measurement
    int nz = 0;  // regulated output
};

// ---------------------------------------------------------------------------
// Conceptual component contracts. Users customize the workflows by inheriting
// from these and instantiating their subclasses; the workflow functions below
// drive the instances.
// ---------------------------------------------------------------------------

/// A plant: driven by control u and noise w, produces state x, measurement y,
/// and regulated output zbar. May carry internal state.
class SystemModel {
  public:
    virtual ~SystemModel() = default;

    struct StepOutput {
        Vector x_next;
        Vector y;
        Vector zbar;
    };

    virtual SystemDims dims() const = 0;

    /// Restore the initial internal state.
    virtual void reset() = 0;

    /// Current state (before any step this is the initial state).
    virtual Vector state() const = 0;

    /// Measurement produced by the current state under noise w, without
    /// advancing the state. Must not depend on u (see direct_feedthrough).
    virtual Vector measure(const Vector& w) const = 0;

    /// Consume one (u, w) pair: outputs are computed from the pre-step state,
    /// then the internal state advances to x_next.
    virtual StepOutput step(const Vector& u, const Vector& w) = 0;

    /// True when the measurement depends directly on the control (D22 != 0
    /// for an LTI system). Such systems are rejected by the simulator.
    virtual bool direct_feedthrough() const { return false; }

    virtual std::string describe() const = 0;
};

/// Turns measurements y into controls u, causally: the output at step t
/// depends only on measurements at steps <= t.
class ControllerModel {
  public:
    virtual ~ControllerModel() = default;

    virtual int measurement_dim() const = 0;
    virtual int control_dim() const = 0;

    virtual void reset() = 0;
    virtual Vector control(const Vector& y) = 0;

    virtual std::string describe() const = 0;
};

/// Disturbance / noise process for the simulation workflow. Excluded from the
/// synthesis workflow by construction. Identical seeds must yield identical
/// sample sequences.
class NoiseModel {
  public:
    virtual ~NoiseModel() = default;

    virtual int dim() const = 0;
    virtual void reset() = 0;

    /// Sample for step t; the simulator calls this once per step, in order.
    virtual Vector sample(int t) = 0;

    virtual std::string describe() const = 0;
};

/// Takes a SystemModel and synthesizes a ControllerModel. May work in the
/// frequency domain internally, but the returned controller exposes only the
/// time-domain control(y) -> u interface.
class SynthesisAlgorithm {
  public:
    virtual ~SynthesisAlgorithm() = default;

    virtual std::unique_ptr<ControllerModel> synthesize(const SystemModel& system) const = 0;

    virtual std::string describe() const = 0;
};

// ---------------------------------------------------------------------------
// Workflows
// ---------------------------------------------------------------------------

struct SimulationMetadata {
    int horizon = 0;
    std::string system;
    std::string controller;
    std::string noise;
};

/// Histories of all five signals over a common horizon.
struct SimulationResult {
    Signal x;
    Signal y;
    Signal u;
    Signal w;
    Signal zbar;
    SimulationMetadata metadata;
};

/// Synthesis workflow: dimension checks at entry, then the algorithm runs.
std::unique_ptr<ControllerModel> run_synthesis(const SynthesisAlgorithm& algorithm,
                                               const SystemModel& system);

/// Simulation workflow: resets all components, then steps the closed loop for
/// `horizon` steps. Defined in the simulator module.
SimulationResult run_simulation(SystemModel& system, ControllerModel& controller,
                                NoiseModel& noise, int horizon);

}  // namespace slskit
