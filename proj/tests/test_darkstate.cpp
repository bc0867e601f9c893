#include "tchlab/darkstate.hpp"
#include "tchlab/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace tch;
using namespace tch::dark;

namespace {

// sum_j g_j sigma_j^+ applied directly to the amplitude vector (atom 0 is the MSB).
Eigen::VectorXcd raise(const AtomicState& psi, const std::vector<double>& g) {
    const std::size_t s = psi.atoms;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amp.size());
    for (Eigen::Index idx = 0; idx < psi.amp.size(); ++idx)
        for (std::size_t j = 0; j < s; ++j) {
            const Eigen::Index bit = Eigen::Index(1) << (s - 1 - j);
            if (!(idx & bit)) out(idx | bit) += g[j] * psi.amp(idx);
        }
    return out;
}

DecayConfig fast_config(std::size_t atoms) {
    DecayConfig c;
    c.kappa = 1e-4;
    c.g = 1e-3;
    c.atoms = atoms;
    return c;
}

}  // namespace

TEST_CASE("singlet and triplet") {
    const auto s = singlet_state();
    const double r = 1 / std::sqrt(2.0);
    CHECK(std::abs(s.amp(1) - r) < 1e-15);
    CHECK(std::abs(s.amp(2) + r) < 1e-15);
    CHECK(std::abs(s.amp(0)) == 0.0);
    CHECK(std::abs(s.amp(3)) == 0.0);
    CHECK(std::abs(s.amp.dot(triplet_state().amp)) < 1e-15);
}

TEST_CASE("singlet products") {
    const auto p = singlet_product({{0, 1}, {2, 3}}, 4);
    CHECK(p.norm_squared() == doctest::Approx(1.0));
    CHECK((p.amp.array().abs() > 1e-12).count() == 4);
    for (Eigen::Index k = 0; k < p.amp.size(); ++k)
        if (std::abs(p.amp(k)) > 1e-12) CHECK(std::abs(p.amp(k)) == doctest::Approx(0.5));
    CHECK_THROWS_AS(singlet_product({{0, 1}, {1, 2}}, 4), std::invalid_argument);
    CHECK_THROWS_AS(singlet_product({{0, 1}}, 3), std::invalid_argument);
}

TEST_CASE("three-level multi-singlet") {
    const auto d = multi_singlet_d3();
    CHECK(d.size() == 27);
    CHECK(d.norm() == doctest::Approx(1.0));
    CHECK((d.array().abs() > 1e-12).count() == 6);
    for (Eigen::Index k = 0; k < 27; ++k)
        if (std::abs(d(k)) > 1e-12) CHECK(std::abs(d(k)) == doctest::Approx(1 / std::sqrt(6.0)));
    // Swapping atoms (0,1), (1,2), (0,2) flips the sign.
    auto swapped = [&](int a, int b) {
        Eigen::VectorXcd out(27);
        for (int l0 = 0; l0 < 3; ++l0)
            for (int l1 = 0; l1 < 3; ++l1)
                for (int l2 = 0; l2 < 3; ++l2) {
                    int l[3] = {l0, l1, l2};
                    std::swap(l[a], l[b]);
                    out(9 * l0 + 3 * l1 + l2) = d(9 * l[0] + 3 * l[1] + l[2]);
                }
        return out;
    };
    CHECK((swapped(0, 1) + d).norm() < 1e-15);
    CHECK((swapped(1, 2) + d).norm() < 1e-15);
    CHECK((swapped(0, 2) + d).norm() < 1e-15);
}

TEST_CASE("darkness") {
    const double g = 0.7;
    const auto s = is_dark(singlet_state(), {g, g});
    CHECK(s.dark);
    CHECK(s.absorption_residual < 1e-12);
    const auto t = is_dark(triplet_state(), {g, g});
    CHECK_FALSE(t.dark);
    CHECK(t.absorption_residual == doctest::Approx(g * std::sqrt(2.0)));
    CHECK(t.absorption_residual == doctest::Approx(raise(triplet_state(), {g, g}).norm()));
    const auto u = is_dark(singlet_state(), {0.3, 0.8});
    CHECK(u.absorption_residual == doctest::Approx(0.5 / std::sqrt(2.0)));
    // Every perfect matching for s = 4.
    for (auto pairing : std::vector<std::vector<std::pair<std::size_t, std::size_t>>>{
             {{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}, {{0, 3}, {1, 2}}}) {
        const auto psi = singlet_product(pairing, 4);
        const auto d = is_dark(psi, {g, g, g, g});
        CHECK(d.absorption_residual < 1e-12);
        CHECK(d.emission_residual < 1e-12);
        CHECK(raise(psi, {g, g, g, g}).norm() < 1e-12);
    }
}

TEST_CASE("dark and empty-cavity emission follow kappa exp(-kappa t)") {
    for (std::size_t s : {0u, 2u, 4u}) {
        auto c = fast_config(s);
        const auto psi = s == 0 ? AtomicState::ground(0) : singlet_product(adjacent_pairing(s), s);
        const auto r = emission_density(psi, c);
        double err = 0.0;
        for (std::size_t k = 0; k < r.time.size(); ++k)
            err = std::max(err, std::abs(r.density[k] - c.kappa * std::exp(-c.kappa * r.time[k])));
        CHECK(err < 1e-3 * c.kappa);
        CHECK(err < 1e-3);
    }
    auto c = fast_config(2);
    auto c0 = fast_config(0);
    c0.dt = c.resolved_dt();
    const auto dark = emission_density(singlet_state(), c);
    const auto empty = emission_density(AtomicState::ground(0), c0);
    REQUIRE(dark.time.size() == empty.time.size());
    double diff = 0.0;
    for (std::size_t k = 0; k < dark.time.size(); ++k) diff = std::max(diff, std::abs(dark.density[k] - empty.density[k]));
    CHECK(diff < 1e-6);
}

TEST_CASE("light state is delayed and the density is a proper censored distribution") {
    auto c = fast_config(2);
    const auto light = emission_density(AtomicState::ground(2), c);
    const auto dark = emission_density(singlet_state(), c);
    CHECK(light.mean_time > 1.0 / c.kappa);
    CHECK(dark.mean_time < light.mean_time);
    for (const auto* r : {&light, &dark}) {
        for (std::size_t k = 1; k < r->survival.size(); ++k) CHECK(r->survival[k] <= r->survival[k - 1] + 1e-15);
        CHECK(*std::min_element(r->density.begin(), r->density.end()) >= -1e-6);
        double integral = 0.0;
        for (std::size_t k = 1; k < r->time.size(); ++k)
            integral += 0.5 * (r->density[k] + r->density[k - 1]) * (r->time[k] - r->time[k - 1]);
        CHECK(std::abs(integral + r->survival.back() - 1.0) < 1e-4);
        CHECK(r->escape_probability == doctest::Approx(1.0 - r->survival.back()));
    }
}

TEST_CASE("sampling") {
    DecayConfig c;
    c.kappa = 1.0;
    c.g = 10.0;
    c.atoms = 0;
    const auto r = emission_density(AtomicState::ground(0), c);
    const auto s = sample_emission_times(r, 100000, 3);
    REQUIRE(s.time.size() == 100000);
    const double mean = std::accumulate(s.time.begin(), s.time.end(), 0.0) / double(s.time.size());
    double var = 0.0;
    for (double t : s.time) var += (t - mean) * (t - mean);
    const double se = std::sqrt(var / double(s.time.size() - 1) / double(s.time.size()));
    CHECK(std::abs(mean - 1.0) < 3 * se);
    CHECK(sample_emission_times(r, 0, 3).time.empty());
    const auto again = sample_emission_times(r, 1000, 3);
    CHECK(again.time == sample_emission_times(r, 1000, 3).time);
    CHECK(again.time != sample_emission_times(r, 1000, 4).time);
}

TEST_CASE("classifier") {
    SUBCASE("ties go to light") {
        const auto c = classify_dark({1.5, 1.5, 1.5}, 1.0, 2.0, 0.0);
        CHECK(c.decision == Hypothesis::Light);
    }
    SUBCASE("empty sample set") {
        CHECK_THROWS_AS(classify_dark({}, 1.0, 2.0), EmptySampleError);
    }
    DecayConfig c;
    c.kappa = 1.0;
    c.g = 10.0;
    c.atoms = 0;
    const auto dark = emission_density(AtomicState::ground(0), c);
    const double light_mean = 1.5;
    SUBCASE("dark samples decide dark in at least 99 of 100 seeds") {
        int correct = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto s = sample_emission_times(dark, 10000, seed);
            correct += classify_dark(s.time, dark.mean_time, light_mean, 0.03, seed) .decision == Hypothesis::Dark;
        }
        CHECK(correct >= 99);
    }
    SUBCASE("full detector noise removes the information") {
        double z = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto s = sample_emission_times(dark, 10000, seed);
            z += classify_dark(s.time, dark.mean_time, light_mean, 0.5, seed).z_score;
        }
        const double clean = classify_dark(sample_emission_times(dark, 10000, 0).time, dark.mean_time, light_mean, 0.0).z_score;
        CHECK(std::abs(z / 20) < 3.0);
        CHECK(clean > 20.0);
    }
    SUBCASE("classification error falls with the number of trials") {
        // Close hypotheses so the error is measurable at small n.
        const double near_light = dark.mean_time * 1.05;
        std::vector<double> err;
        for (std::size_t n : {100u, 1000u, 10000u}) {
            int wrong = 0;
            for (std::uint64_t seed = 0; seed < 200; ++seed) {
                const auto s = sample_emission_times(dark, n, 1000 + seed);
                wrong += classify_dark(s.time, dark.mean_time, near_light, 0.03, seed).decision != Hypothesis::Dark;
            }
            err.push_back(wrong / 200.0);
        }
        MESSAGE("error rates " << err[0] << " " << err[1] << " " << err[2]);
        CHECK(err[0] >= err[1]);
        CHECK(err[1] >= err[2]);
        CHECK(err[0] > err[2]);
    }
}

TEST_CASE("configuration checks") {
    DecayConfig c;
    c.kappa = 0.0;
    CHECK_THROWS(c.validate());
    c = DecayConfig{};
    c.atoms = 17;
    CHECK_THROWS(c.validate());
}
