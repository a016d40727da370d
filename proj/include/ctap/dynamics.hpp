#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ctap/graph.hpp"

namespace ctap {

// Time-dependent control schedules, the protocol Hamiltonian
// H(t) = F(t)·A·F*(t) with F = diag(f_1..f_{|V1|}, 1..1), Schrödinger
// integration, and the threshold time T*.  Units: ħ = 1 and the weight
// scale J = 1, so times are in units of 1/J.

enum class ControlShape {
    RampUp,   // t/T           (zero only at t = 0)
    RampDown, // 1 − t/T       (zero only at t = T)
    Constant, // value         (scaled by the straddle factor)
    SeqUp,    // min(2t/T, 1)  (zero only at t = 0)
    SeqDown,  // max(1 − 2t/T, 0)  (zero on [T/2, T])
};

struct Control {
    ControlShape shape = ControlShape::Constant;
    double value = 1.0; // used by Constant, before straddling
};

struct ControlSchedule {
    double total_time = 0.0;
    double straddle = 1.0; // multiplies every Constant control
    int sender = -1;       // a
    int receiver = -1;     // b
    int n1 = 0;
    std::vector<Control> controls; // one per V1 vertex

    double eval(int v, double t) const;

    // Enforces the control-scheme constraints: f_a(0) = 0, f_b(T) = 0,
    // f_v ≠ 0 at all times for non-parties, and no two controls zero
    // simultaneously — by shape analysis plus a dense sampling of 10³
    // time points.  Throws InvalidParameter on violation.
    void validate(const std::vector<int>& parties) const;
};

// Counter-intuitive pulse pair: f_a = t/T, f_b = 1 − t/T, every other V1
// control constant 1 (times the straddle factor s).  Throws SameEndpoints
// when a = b; a and b must be parties of the graph.
ControlSchedule default_schedule(const WeightedGraph& g, int a, int b, double T,
                                 double s = 1.0);

// Sequential variant: f_a = min(2t/T, 1), f_b = max(1 − 2t/T, 0); the
// receiver-side ramp finishes before the sender-side ramp ends.
ControlSchedule sequential_schedule(const WeightedGraph& g, int a, int b, double T);

// H(t) = F(t)·A·F*(t).  Throws InvalidParameter for t outside [0, T].
Eigen::MatrixXcd hamiltonian_at(const ControlSchedule& s, const Eigen::MatrixXcd& a,
                                double t);

// Instantaneous dark state: F(t)⁻¹|z⟩ normalized, where z is the unique
// kernel vector of A.  At a time where a party control vanishes the
// localized limit |p⟩ is returned (exactly |a⟩ at t=0, |b⟩ at t=T);
// a vanishing control on a zero-amplitude vertex has no limit and throws
// DarkStateUndefined.
Eigen::VectorXcd dark_state_at(const ControlSchedule& s, const Eigen::MatrixXcd& a,
                               double t);

struct TransferResult {
    Eigen::VectorXcd final_state;
    double error = 1.0;            // E = 1 − |⟨b|U_T|a⟩|
    double acquired_phase = 0.0;   // arg(⟨b|U_T|a⟩)
    double predicted_phase = 0.0;  // kernel-ratio prediction (NaN when undefined)
    double v2_population_max = 0.0;
    double unitarity_defect = 0.0;    // ‖U_T†·U_T − I‖_max
    double zero_energy_defect = 0.0;  // max over steps of ‖H·z(t)‖/‖H‖_F
    bool kernel_unique = false;       // nullity(A) == 1 (defect fields valid)
};

struct TracePoint {
    double t = 0.0;
    Eigen::VectorXcd psi;
};

// Midpoint piecewise-constant propagator: U_k = exp(−i·H(t_k+Δ/2)·Δ) via
// per-step hermitian eigendecomposition; unconditionally unitary and
// second-order in Δ.  Populates every TransferResult field; throws
// IntegrationUnstable if the unitarity defect exceeds 1e-6.  When `trace`
// is given it receives the state at t = 0 and after every step.
TransferResult evolve(const ControlSchedule& s, const Eigen::MatrixXcd& a, int steps,
                      std::vector<TracePoint>* trace = nullptr);

// Phase the transferred amplitude acquires, predicted from the kernel
// vector z of A_G.  The measured phase arg(⟨b|U_T|a⟩) converges to
// arg(z_b/z_a): adiabatic following carries the kernel's component
// phases, entering on a (conjugating z_a) and exiting on b.  Throws
// PartyUnsupported when z_a or z_b vanishes.
double transfer_phase_prediction(const WeightedGraph& g, int a, int b);

// Minimal protocol time with transfer error below `threshold`: doubling
// from T = 1 (requiring two consecutive passing probes before trusting
// the bracket — error vs T oscillates in the diabatic regime), then
// bisection to 1% relative resolution.  Throws TStarNotFound beyond the
// cap.  steps_per_unit fixes the integration density.
double find_tstar(const WeightedGraph& g, int a, int b, double s,
                  double threshold = 0.05, int steps_per_unit = 20,
                  double cap = 1e5);

} // namespace ctap
