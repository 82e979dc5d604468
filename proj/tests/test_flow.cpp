#include <catch2/catch_amalgamated.hpp>

#include <cf/flow.hpp>
#include <cf/lax.hpp>
#include <cf/spectral.hpp>

#include <cmath>
#include <random>

using namespace cf;
using Catch::Approx;

namespace {

PeakonState random_state(std::mt19937& rng, int d) {
    std::uniform_real_distribution<double> gap(0.3, 1.4);
    std::uniform_real_distribution<double> mass(0.3, 2.0);
    std::uniform_real_distribution<double> start(-2, 0);
    std::bernoulli_distribution flip(0.5);
    std::vector<Real> x(static_cast<std::size_t>(d));
    std::vector<Real> m(static_cast<std::size_t>(d));
    Real pos = start(rng);
    for (int j = 0; j < d; ++j) {
        x[static_cast<std::size_t>(j)] = pos;
        pos += gap(rng);
        m[static_cast<std::size_t>(j)] = flip(rng) ? mass(rng) : -mass(rng);
    }
    return PeakonState::make(0, x, m);
}

std::vector<Real> gaps_of(const PeakonState& s) {
    std::vector<Real> g;
    for (int j = 0; j + 1 < s.d(); ++j)
        g.push_back(s.x[static_cast<std::size_t>(j + 1)] - s.x[static_cast<std::size_t>(j)]);
    return g;
}

Real max_drift(const Trajectory& traj) {
    Real worst = 0;
    for (Real v : invariant_drift(traj)) worst = std::max(worst, v);
    return worst;
}

/* the antisymmetric two-body configuration that closes its gap in finite time */
const std::vector<Real> kCollidingX = {1.0, 2.0};
const std::vector<Real> kCollidingM = {5.0, -1.0};

ModelParams colliding_params() {
    return ModelParams::make(2.0, 0.018, kCollidingM);
}

}  // namespace

TEST_CASE("gap coordinates reproduce the Lax trace", "[flow]") {
    std::mt19937 rng(41);
    for (int d = 1; d <= 5; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            const PeakonState s = random_state(rng, d);
            const ModelParams p = ModelParams::make(0.7 + 0.3 * (trial % 3), 0.1 * (trial % 2), s.m);
            const std::vector<Real> from_gaps = trace_invariants_from_gaps(gaps_of(s), s.m, p);
            const std::vector<Real> from_A = trace_invariants(build_A(s, p));
            REQUIRE(from_gaps.size() == from_A.size());
            Real scale = 1;
            for (Real c : from_A) scale = std::max(scale, std::abs(c));
            for (std::size_t i = 0; i < from_A.size(); ++i)
                REQUIRE(std::abs(from_gaps[i] - from_A[i]) < 1e-12 * scale);
        }
    }
}

TEST_CASE("same-sign pair reaches t_end with conserved invariants", "[flow]") {
    const ModelParams p = ModelParams::make(1.0, 0.1, {1.0, 2.0});
    const PeakonState s0 = PeakonState::make(0, {0.0, 1.0}, {1.0, 2.0});
    const Trajectory traj = integrate(s0, p, 50.0, IntegratorConfig{});

    REQUIRE(traj.termination == Termination::reached_t_end);
    REQUIRE(traj.samples.front().t == Approx(0));
    REQUIRE(traj.samples.back().t == Approx(50.0));
    REQUIRE(traj.invariant_log.size() == traj.samples.size());
    REQUIRE(traj.invariant_log.front().size() == 3);
    REQUIRE(max_drift(traj) < 1e-8);
    REQUIRE(sign_check(traj));

    /* time never runs backwards and the ordering never breaks */
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        REQUIRE(traj.samples[i].t > traj.samples[i - 1].t);
        REQUIRE(traj.samples[i].min_gap() > 0);
    }
}

TEST_CASE("four same-sign peakons stay ordered over a long run", "[flow]") {
    /* the growing kernel tail pushes spread-out states to infinity in finite
       time once beta_+ e^{2 nu spread} is large, so the long run needs a
       moderate nu and a small beta_+ */
    const std::vector<Real> m = {0.8, 1.5, 0.6, 1.1};
    const ModelParams p = ModelParams::make(0.6, 0.01, m);
    const PeakonState s0 = PeakonState::make(0, {-1.5, -0.4, 0.7, 2.0}, m);
    const Trajectory traj = integrate(s0, p, 20.0, IntegratorConfig{});

    REQUIRE(traj.termination == Termination::reached_t_end);
    REQUIRE(max_drift(traj) < 1e-8);
    REQUIRE(sign_check(traj));
    for (const PeakonState& s : traj.samples) REQUIRE(s.min_gap() > 1e-9);
}

TEST_CASE("logged invariants match the Lax trace along the run", "[flow]") {
    const ModelParams p = ModelParams::make(1.0, 0.1, {1.0, 2.0});
    const PeakonState s0 = PeakonState::make(0, {0.0, 1.0}, {1.0, 2.0});
    const Trajectory traj = integrate(s0, p, 2.0, IntegratorConfig{});

    REQUIRE(traj.termination == Termination::reached_t_end);
    const std::size_t stride = std::max<std::size_t>(1, traj.samples.size() / 7);
    for (std::size_t i = 0; i < traj.samples.size(); i += stride) {
        const std::vector<Real> logged = traj.invariant_log[i];
        const std::vector<Real> direct = trace_invariants(build_A(traj.samples[i], p));
        REQUIRE(logged.size() == direct.size());
        Real scale = 1;
        for (Real c : direct) scale = std::max(scale, std::abs(c));
        for (std::size_t k = 0; k < direct.size(); ++k)
            REQUIRE(std::abs(logged[k] - direct[k]) < 1e-11 * scale);
    }
}

TEST_CASE("mass negation reverses the flow", "[flow]") {
    /*
     * If (x(t), m(t)) solves the system with the default constant, then
     * (x(-t), -m(-t)) solves it with the constant rebuilt for the negated
     * masses. Running forward, flipping, and running forward again must
     * return to the start.
     */
    const std::vector<Real> m0 = {1.3, 0.7};
    const ModelParams p = ModelParams::make(1.0, 0.1, m0);
    const PeakonState s0 = PeakonState::make(0, {-0.4, 0.7}, m0);

    const Trajectory fwd = integrate(s0, p, 3.0, IntegratorConfig{});
    REQUIRE(fwd.termination == Termination::reached_t_end);

    PeakonState mid = fwd.samples.back();
    std::vector<Real> m_neg = mid.m;
    for (Real& v : m_neg) v = -v;
    const ModelParams p_neg = ModelParams::make(p.nu, p.beta_plus, m_neg);
    const PeakonState s_mid = PeakonState::make(0, mid.x, m_neg);

    const Trajectory back = integrate(s_mid, p_neg, 3.0, IntegratorConfig{});
    REQUIRE(back.termination == Termination::reached_t_end);

    const PeakonState end = back.samples.back();
    for (int j = 0; j < 2; ++j) {
        REQUIRE(end.x[static_cast<std::size_t>(j)] ==
                Approx(s0.x[static_cast<std::size_t>(j)]).margin(1e-6));
        REQUIRE(-end.m[static_cast<std::size_t>(j)] ==
                Approx(s0.m[static_cast<std::size_t>(j)]).margin(1e-6));
    }
}

TEST_CASE("opposite-sign pair collides in finite time", "[flow][collision]") {
    const ModelParams p = colliding_params();
    const PeakonState s0 = PeakonState::make(0, kCollidingX, kCollidingM);
    const Trajectory traj = integrate(s0, p, 10.0, IntegratorConfig{});

    REQUIRE(traj.termination == Termination::collision);
    REQUIRE(traj.collision_index == 0);
    REQUIRE(traj.collision_time > 0);
    REQUIRE(traj.collision_time < 10.0);
    REQUIRE(traj.collision_time == Approx(traj.samples.back().t));

    /* the terminal gap sits at the detection threshold, not past it */
    const Real g_end = traj.samples.back().min_gap();
    REQUIRE(g_end > 0);
    REQUIRE(g_end < 2e-9);
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i)
        REQUIRE(traj.samples[i].min_gap() > 1e-9);

    /* masses diverge in opposite directions while their sum is conserved */
    const PeakonState& end = traj.samples.back();
    REQUIRE(end.m[0] > 100);
    REQUIRE(end.m[1] < -100);
    REQUIRE(end.total_mass() == Approx(4.0).epsilon(1e-8));
    REQUIRE(max_drift(traj) < 1e-6);
}

TEST_CASE("mass cap turns a near-collision into a blow-up stop", "[flow]") {
    const ModelParams p = colliding_params();
    const PeakonState s0 = PeakonState::make(0, kCollidingX, kCollidingM);
    IntegratorConfig cfg;
    cfg.mass_cap = 10;
    const Trajectory traj = integrate(s0, p, 10.0, cfg);

    REQUIRE(traj.termination == Termination::blowup);
    Real worst = 0;
    for (Real v : traj.samples.back().m) worst = std::max(worst, std::abs(v));
    REQUIRE(worst > 10);
    /* stopped well before the gap itself closed */
    REQUIRE(traj.samples.back().min_gap() > 1e-6);
}

TEST_CASE("unreachable thresholds exhaust the step size", "[flow]") {
    const ModelParams p = colliding_params();
    const PeakonState s0 = PeakonState::make(0, kCollidingX, kCollidingM);
    IntegratorConfig cfg;
    cfg.collision_gap = 1e-300;
    cfg.mass_cap = 1e290;
    const Trajectory traj = integrate(s0, p, 10.0, cfg);

    /*
     * With both event thresholds out of reach the integrator is forced into
     * the singularity and the step size underflows.
     */
    REQUIRE(traj.termination == Termination::step_failure);
    REQUIRE(traj.samples.back().t < 10.0);
    REQUIRE(traj.samples.back().min_gap() < 1e-9);
}

TEST_CASE("a state born inside the threshold stops immediately", "[flow]") {
    const ModelParams p = ModelParams::make(1.0, 0.0, {1.0, 1.0});
    const PeakonState s0 = PeakonState::make(0, {0.0, 1e-10}, {1.0, 1.0});
    const Trajectory traj = integrate(s0, p, 1.0, IntegratorConfig{});

    REQUIRE(traj.termination == Termination::collision);
    REQUIRE(traj.samples.size() == 1);
    REQUIRE(traj.collision_time == Approx(0));
    REQUIRE(traj.collision_index == 0);
}

TEST_CASE("integration rejects an empty time span", "[flow][errors]") {
    const ModelParams p = ModelParams::make(1.0, 0.0, {1.0});
    const PeakonState s0 = PeakonState::make(2.0, {0.0}, {1.0});
    REQUIRE_THROWS_AS(integrate(s0, p, 2.0, IntegratorConfig{}), Error);
    REQUIRE_THROWS_AS(integrate(s0, p, 1.0, IntegratorConfig{}), Error);
}

TEST_CASE("single peakon travels at constant speed", "[flow]") {
    /* d = 1: u(x_1) is constant in time, m_1 never changes */
    const ModelParams p = ModelParams::make(1.5, 0.2, {0.9});
    const PeakonState s0 = PeakonState::make(0, {-0.3}, {0.9});
    const Trajectory traj = integrate(s0, p, 4.0, IntegratorConfig{});

    REQUIRE(traj.termination == Termination::reached_t_end);
    const Real speed = potential(s0, p, s0.x[0]).u;
    const PeakonState& end = traj.samples.back();
    REQUIRE(end.m[0] == Approx(0.9).epsilon(1e-12));
    REQUIRE(end.x[0] == Approx(-0.3 + 4.0 * speed).epsilon(1e-10));
}
