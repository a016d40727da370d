#include "ctap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctap/errors.hpp"
#include "ctap/viability.hpp"

namespace ctap {

namespace {

constexpr double kControlZero = 1e-12; // |f| below this counts as a zero control

void require_party(const WeightedGraph& g, int v, const char* role) {
    const auto& p = g.parties();
    if (!std::binary_search(p.begin(), p.end(), v))
        throw PartyUnsupported(std::string(role) + " vertex " + std::to_string(v) +
                               " is not in the party set");
}

// One propagator step: ψ ← exp(−i·H·Δ)·ψ, optionally accumulating the
// full U.  H is hermitian; the real-symmetric case takes the cheaper
// real eigensolver.
struct Stepper {
    bool real;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esd;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esz;

    static Eigen::VectorXcd phases(const Eigen::VectorXd& eigs, double dt) {
        return (eigs.cast<Complex>().array() * Complex(0.0, -dt)).exp().matrix();
    }

    void apply(const Eigen::MatrixXcd& h, double dt, Eigen::VectorXcd& psi,
               Eigen::MatrixXcd* u_acc) {
        if (real) {
            esd.compute(h.real());
            const Eigen::MatrixXcd v = esd.eigenvectors().cast<Complex>();
            const Eigen::VectorXcd phase = phases(esd.eigenvalues(), dt);
            psi = v * (phase.asDiagonal() * (v.transpose() * psi));
            if (u_acc)
                *u_acc = v * (phase.asDiagonal() * (v.transpose() * *u_acc));
        } else {
            esz.compute(h);
            const auto& v = esz.eigenvectors();
            const Eigen::VectorXcd phase = phases(esz.eigenvalues(), dt);
            psi = v * (phase.asDiagonal() * (v.adjoint() * psi));
            if (u_acc)
                *u_acc = v * (phase.asDiagonal() * (v.adjoint() * *u_acc));
        }
    }
};

// Transfer error only, no propagator accumulation — the inner loop of the
// T* search.
double transfer_error_probe(const ControlSchedule& s, const Eigen::MatrixXcd& a,
                            int steps) {
    const int n = static_cast<int>(a.rows());
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi(s.sender) = 1.0;
    const double dt = s.total_time / steps;
    Stepper st{a.imag().cwiseAbs().maxCoeff() == 0.0, {}, {}};
    Eigen::VectorXcd f = Eigen::VectorXcd::Ones(n);
    Eigen::MatrixXcd h(n, n);
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) * dt;
        for (int v = 0; v < s.n1; ++v) f(v) = s.eval(v, t);
        h = f.asDiagonal() * a * f.asDiagonal();
        st.apply(h, dt, psi, nullptr);
    }
    return 1.0 - std::abs(psi(s.receiver));
}

} // namespace

double ControlSchedule::eval(int v, double t) const {
    const Control& c = controls.at(static_cast<std::size_t>(v));
    switch (c.shape) {
        case ControlShape::RampUp: return t / total_time;
        case ControlShape::RampDown: return 1.0 - t / total_time;
        case ControlShape::Constant: return c.value * straddle;
        case ControlShape::SeqUp: return std::min(2.0 * t / total_time, 1.0);
        case ControlShape::SeqDown: return std::max(1.0 - 2.0 * t / total_time, 0.0);
    }
    return 0.0;
}

void ControlSchedule::validate(const std::vector<int>& parties) const {
    if (total_time <= 0.0) throw InvalidParameter("schedule: total_time must be positive");
    if (static_cast<int>(controls.size()) != n1)
        throw InvalidParameter("schedule: need one control per V1 vertex");
    if (sender < 0 || sender >= n1 || receiver < 0 || receiver >= n1)
        throw InvalidParameter("schedule: sender/receiver must be V1 vertices");
    if (std::abs(eval(sender, 0.0)) > kControlZero)
        throw InvalidParameter("schedule: f_a(0) must be 0");
    if (std::abs(eval(receiver, total_time)) > kControlZero)
        throw InvalidParameter("schedule: f_b(T) must be 0");

    // Shape analysis: zeros can only come from ramps (at one endpoint or,
    // for SeqDown, an interval) or from zero constants.
    int up = 0, down = 0;
    for (int v = 0; v < n1; ++v) {
        const Control& c = controls[v];
        const bool party = std::binary_search(parties.begin(), parties.end(), v);
        const bool can_vanish = c.shape != ControlShape::Constant ||
                                std::abs(c.value * straddle) <= kControlZero;
        if (!party && can_vanish)
            throw InvalidParameter("schedule: control on non-party vertex " +
                                   std::to_string(v) + " can reach zero");
        if (c.shape == ControlShape::RampUp || c.shape == ControlShape::SeqUp) ++up;
        if (c.shape == ControlShape::RampDown || c.shape == ControlShape::SeqDown) ++down;
    }
    if (up > 1 || down > 1)
        throw InvalidParameter(
            "schedule: two ramps of the same direction are zero simultaneously");

    // Dense sampling cross-check (10³ points): at most one control zero at
    // any sampled time.
    const int samples = 1000;
    for (int i = 0; i <= samples; ++i) {
        const double t = total_time * i / samples;
        int zeros = 0;
        for (int v = 0; v < n1; ++v)
            if (std::abs(eval(v, t)) <= kControlZero) ++zeros;
        if (zeros > 1)
            throw InvalidParameter("schedule: two controls are zero at t = " +
                                   std::to_string(t));
    }
}

namespace {

ControlSchedule make_schedule(const WeightedGraph& g, int a, int b, double T, double s,
                              ControlShape up, ControlShape down) {
    if (a == b) throw SameEndpoints("schedule: sender and receiver coincide (vertex " +
                                    std::to_string(a) + ")");
    if (T <= 0.0) throw InvalidParameter("schedule: total time must be positive");
    require_party(g, a, "sender");
    require_party(g, b, "receiver");
    ControlSchedule sch;
    sch.total_time = T;
    sch.straddle = s;
    sch.sender = a;
    sch.receiver = b;
    sch.n1 = g.n1();
    sch.controls.assign(g.n1(), Control{ControlShape::Constant, 1.0});
    sch.controls[a] = {up, 0.0};
    sch.controls[b] = {down, 0.0};
    sch.validate(g.parties());
    return sch;
}

} // namespace

ControlSchedule default_schedule(const WeightedGraph& g, int a, int b, double T,
                                 double s) {
    return make_schedule(g, a, b, T, s, ControlShape::RampUp, ControlShape::RampDown);
}

ControlSchedule sequential_schedule(const WeightedGraph& g, int a, int b, double T) {
    return make_schedule(g, a, b, T, 1.0, ControlShape::SeqUp, ControlShape::SeqDown);
}

Eigen::MatrixXcd hamiltonian_at(const ControlSchedule& s, const Eigen::MatrixXcd& a,
                                double t) {
    if (t < 0.0 || t > s.total_time)
        throw InvalidParameter("hamiltonian_at: t outside [0, T]");
    const int n = static_cast<int>(a.rows());
    // Controls are real, so F* = F and the conjugation on the right is a
    // plain re-scaling.
    Eigen::VectorXcd f = Eigen::VectorXcd::Ones(n);
    for (int v = 0; v < s.n1; ++v) f(v) = s.eval(v, t);
    return f.asDiagonal() * a * f.asDiagonal();
}

Eigen::VectorXcd dark_state_at(const ControlSchedule& s, const Eigen::MatrixXcd& a,
                               double t) {
    if (t < 0.0 || t > s.total_time)
        throw InvalidParameter("dark_state_at: t outside [0, T]");
    Eigen::VectorXcd z = zero_eigenvector(a); // throws DegenerateKernel if nullity != 1
    const int n = static_cast<int>(a.rows());

    // A vanishing control localizes the dark state on its vertex when the
    // kernel amplitude there is nonzero; otherwise the limit fails.
    for (int v = 0; v < s.n1; ++v) {
        if (std::abs(s.eval(v, t)) > kControlZero) continue;
        if (std::abs(z(v)) <= kSnapTol)
            throw DarkStateUndefined("dark_state_at: control on vertex " +
                                     std::to_string(v) + " vanishes at t = " +
                                     std::to_string(t) +
                                     " but the kernel has no amplitude there");
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e(v) = 1.0;
        return e;
    }

    Eigen::VectorXcd zt = z;
    for (int v = 0; v < s.n1; ++v) zt(v) /= s.eval(v, t);
    zt.normalize();
    return zt;
}

TransferResult evolve(const ControlSchedule& s, const Eigen::MatrixXcd& a, int steps,
                      std::vector<TracePoint>* trace) {
    if (steps < 1) throw InvalidParameter("evolve: steps must be >= 1");
    const int n = static_cast<int>(a.rows());
    TransferResult r;

    Eigen::VectorXcd kernel;
    try {
        kernel = zero_eigenvector(a);
        r.kernel_unique = true;
    } catch (const DegenerateKernel&) {
        r.kernel_unique = false; // evolution still runs; defect fields flagged
    }

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
    psi(s.sender) = 1.0;
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    const double dt = s.total_time / steps;
    if (trace) {
        trace->clear();
        trace->reserve(static_cast<std::size_t>(steps) + 1);
        trace->push_back({0.0, psi});
    }
    Stepper st{n == 0 || a.imag().cwiseAbs().maxCoeff() == 0.0, {}, {}};

    Eigen::VectorXcd f = Eigen::VectorXcd::Ones(n);
    Eigen::MatrixXcd h(n, n);
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) * dt;
        for (int v = 0; v < s.n1; ++v) f(v) = s.eval(v, t);
        h = f.asDiagonal() * a * f.asDiagonal();

        if (r.kernel_unique) {
            // Instantaneous dark state F⁻¹z at the midpoint; H annihilates
            // it up to eigensolver noise ("the eigenvalue is exactly 0
            // throughout the whole protocol").
            Eigen::VectorXcd zt = kernel;
            bool defined = true;
            for (int v = 0; v < s.n1 && defined; ++v) {
                const double fv = std::abs(f(v));
                if (fv <= kControlZero)
                    defined = std::abs(kernel(v)) <= kSnapTol; // amplitude must be absent
                else
                    zt(v) /= f(v);
            }
            if (defined) {
                for (int v = 0; v < s.n1; ++v)
                    if (std::abs(f(v)) <= kControlZero) zt(v) = 0.0;
                zt.normalize();
                const double hnorm = h.norm();
                if (hnorm > 0.0)
                    r.zero_energy_defect =
                        std::max(r.zero_energy_defect, (h * zt).norm() / hnorm);
            }
        }

        st.apply(h, dt, psi, &u);
        if (trace) trace->push_back({(k + 1) * dt, psi});
        double pop2 = 0.0;
        for (int v = s.n1; v < n; ++v) pop2 += std::norm(psi(v));
        r.v2_population_max = std::max(r.v2_population_max, pop2);
    }

    r.final_state = psi;
    const Complex amp = psi(s.receiver);
    r.error = 1.0 - std::abs(amp);
    r.acquired_phase = std::arg(amp);
    r.unitarity_defect = (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n))
                             .cwiseAbs()
                             .maxCoeff();
    if (r.unitarity_defect > 1e-6)
        throw IntegrationUnstable("evolve: unitarity defect " +
                                  std::to_string(r.unitarity_defect) + " exceeds 1e-6");

    r.predicted_phase = std::numeric_limits<double>::quiet_NaN();
    if (r.kernel_unique) {
        const Complex za = kernel(s.sender), zb = kernel(s.receiver);
        if (std::abs(za) > kSnapTol && std::abs(zb) > kSnapTol)
            r.predicted_phase = std::arg(zb / za);
    }
    return r;
}

double transfer_phase_prediction(const WeightedGraph& g, int a, int b) {
    if (!g.in_v1(a) || !g.in_v1(b))
        throw PartyPlacement("transfer_phase_prediction: endpoints must be V1 vertices");
    Eigen::VectorXcd z = zero_eigenvector(g);
    if (std::abs(z(a)) <= kSnapTol || std::abs(z(b)) <= kSnapTol)
        throw PartyUnsupported(
            "transfer_phase_prediction: kernel amplitude vanishes on an endpoint");
    // The state enters the dark state through ⟨z(0)|a⟩ ∝ conj(z_a) and
    // leaves it on b with amplitude z_b, so the measured phase is
    // arg(z_b/z_a).  (The source text prints the reciprocal ratio; the
    // adiabatic oracle fixes this orientation.)
    return std::arg(z(b) / z(a));
}

double find_tstar(const WeightedGraph& g, int a, int b, double s, double threshold,
                  int steps_per_unit, double cap) {
    if (threshold <= 0.0 || threshold > 1.0)
        throw InvalidParameter("find_tstar: threshold must lie in (0, 1]");
    if (steps_per_unit < 1)
        throw InvalidParameter("find_tstar: steps_per_unit must be >= 1");
    {
        const int dim = nullity(adjacency(g));
        if (dim != 1)
            throw TStarNotFound("find_tstar: zero eigenspace has dimension " +
                                std::to_string(dim) +
                                "; no dark-state channel to follow");
    }

    auto error_at = [&](double T) {
        ControlSchedule sch = default_schedule(g, a, b, T, s);
        const int steps = std::max(1, static_cast<int>(std::ceil(T * steps_per_unit)));
        return transfer_error_probe(sch, adjacency(g), steps);
    };

    // Doubling phase: trust the bracket only after two consecutive passes.
    double t_hi = -1.0;
    double last_fail = -1.0;
    bool prev_pass = false;
    double prev_t = 0.0;
    for (double T = 1.0; T <= cap; T *= 2.0) {
        const bool pass = error_at(T) < threshold;
        if (pass && prev_pass) {
            t_hi = prev_t;
            break;
        }
        if (!pass) last_fail = T;
        prev_pass = pass;
        prev_t = T;
    }
    if (t_hi < 0.0)
        throw TStarNotFound("find_tstar: no passing time below cap " +
                            std::to_string(cap));
    if (last_fail < 0.0 || last_fail > t_hi)
        return t_hi; // every probed time passed; T* is the smallest probed

    double t_lo = last_fail;
    while ((t_hi - t_lo) / t_hi > 0.01) {
        const double mid = 0.5 * (t_lo + t_hi);
        if (error_at(mid) < threshold)
            t_hi = mid;
        else
            t_lo = mid;
    }
    return t_hi;
}

} // namespace ctap
