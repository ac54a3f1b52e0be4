// SPDX-License-Identifier: Apache-2.0
//
// covol - zero-forcing SINR fields and coherent-signal volumes for
// distributed-antenna multiuser downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: nine end-to-end criteria, one pass/fail line each.
// Run with no arguments for all criteria or with an index (1-9) for one.
// Golden snapshots live in tests/golden; set COVOL_WRITE_GOLDEN=1 to
// regenerate them after an intentional behavior change.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "covol/config.hpp"
#include "covol/io.hpp"
#include "covol/se_table.hpp"
#include "covol/simulation.hpp"
#include "covol/sinr.hpp"
#include "covol/volume.hpp"
#include "oracles.hpp"
#include "scenario_helpers.hpp"

namespace {

using covol::ChannelMode;
using covol::CoherentVolume;
using covol::Displacement;
using covol::Simulation;
using covol::SinrField;
using covol::Vec3;
using helpers::Setup;

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& msg) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += msg;
    }

    void expect(bool cond, const std::string& msg) {
        if (!cond) fail(msg);
    }
};

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::filesystem::path golden_dir() {
    return std::filesystem::path(COVOL_GOLDEN_DIR);
}

bool write_golden_mode() { return std::getenv("COVOL_WRITE_GOLDEN") != nullptr; }

/// Compare a rendered golden payload (name,value CSV) against the archived
/// file, within a relative tolerance per value.
void check_golden(Check& c, const std::string& name,
                  const std::vector<std::pair<std::string, double>>& values, double tol) {
    const auto path = golden_dir() / name;
    if (write_golden_mode()) {
        std::string text = "key,value\n";
        for (const auto& [k, v] : values) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            text += k + "," + buf + "\n";
        }
        covol::detail::write_file_atomic(path, text);
        std::printf("    (wrote golden %s)\n", path.string().c_str());
        return;
    }
    if (!std::filesystem::exists(path)) {
        c.fail("missing golden file " + path.string());
        return;
    }
    std::istringstream in(covol::read_file(path));
    std::string line;
    std::getline(in, line);  // header
    std::size_t i = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.rfind(',');
        const std::string key = line.substr(0, comma);
        const double expect = std::stod(line.substr(comma + 1));
        if (i >= values.size()) {
            c.fail("golden " + name + " has more rows than produced");
            return;
        }
        if (values[i].first != key) {
            c.fail("golden " + name + " row " + std::to_string(i) + ": key '" + values[i].first +
                   "' vs archived '" + key + "'");
            return;
        }
        const double got = values[i].second;
        const double err = expect == 0.0 ? std::abs(got) : rel_diff(got, expect);
        if (err > tol) {
            c.fail("golden " + name + " row '" + key + "': got " + std::to_string(got) +
                   " archived " + std::to_string(expect));
            return;
        }
        ++i;
    }
    if (i != values.size()) c.fail("golden " + name + " has fewer rows than produced");
}

// ---------------------------------------------------------------------------
// 1. zero-forcing invariant on 100 seeded scenarios
// ---------------------------------------------------------------------------
Check criterion_1() {
    Check c;
    covol::Rng meta(1000);
    int built = 0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t users = 2 + static_cast<std::size_t>(meta.raw() % 7);   // 2..8
        const std::size_t antennas = users + static_cast<std::size_t>(meta.raw() % (users + 1));
        const bool clusters = i % 3 == 0;
        const Setup s =
            helpers::finish(helpers::random_scenario(users, antennas, 5000 + i, clusters));
        ++built;
        for (std::size_t u = 0; u < users; ++u) {
            const covol::CVector h_u = covol::channel_vector(s.h, u);
            const double h_norm = covol::vec_norm(h_u);
            for (std::size_t v = 0; v < users; ++v) {
                if (v == u) continue;
                const double cross =
                    std::abs(covol::hermitian_inner(h_u, s.w.weights.col(v)));
                if (cross > 1e-9 * h_norm) {
                    c.fail("scenario " + std::to_string(i) + ": cross term " +
                           std::to_string(cross / h_norm));
                }
            }
            const double snr = covol::snr_at_origin(s.h, s.w, u, s.scenario.noise_power);
            const double sinr0 =
                covol::sinr_exact(s.scenario, s.paths, s.w, u, Vec3{0, 0, 0},
                                  ChannelMode::Spherical)
                    .value();
            if (rel_diff(sinr0, snr) > 1e-9) {
                c.fail("scenario " + std::to_string(i) + ": SINR(0) off by " +
                       std::to_string(rel_diff(sinr0, snr)));
            }
        }
        if (!c.ok) break;
    }
    c.expect(built == 100, "expected 100 scenarios");
    return c;
}

// ---------------------------------------------------------------------------
// 2. multipole series vs direct plane-wave evaluation up to kr = 10
// ---------------------------------------------------------------------------
Check criterion_2() {
    Check c;
    for (bool clusters : {false, true}) {
        const Setup s = helpers::finish(helpers::random_scenario(4, 8, clusters ? 61 : 62, clusters));
        const double k = s.scenario.wavenumber();
        covol::Rng rng(7);
        for (double kr : {0.5, 2.0, 5.0, 8.0, 10.0}) {
            const double r = kr / k;
            const int order = static_cast<int>(std::ceil(kr)) + 30;
            for (int trial = 0; trial < 4; ++trial) {
                const Vec3 r_hat = rng.unit_sphere();
                for (std::size_t u = 0; u < 4; ++u) {
                    const auto b = covol::multipole_coeffs(s.paths, u, r_hat, order);
                    const covol::CVector series = covol::channel_multipole(b, k, r, order);
                    const covol::CVector direct = covol::displaced_channel_vector(
                        s.scenario, s.paths, u, r_hat * r, ChannelMode::PlaneWave);
                    double num = 0.0, den = 0.0;
                    for (std::size_t n = 0; n < direct.size(); ++n) {
                        num += std::norm(series[n] - direct[n]);
                        den += std::norm(direct[n]);
                    }
                    if (std::sqrt(num / den) > 1e-8) {
                        c.fail("channel series error " + std::to_string(std::sqrt(num / den)) +
                               " at kr=" + std::to_string(kr));
                    }
                    const double exact = covol::sinr_exact(s.scenario, s.paths, s.w, u, r_hat * r,
                                                           ChannelMode::PlaneWave)
                                             .value();
                    const double series_sinr =
                        covol::sinr_multipole(s.scenario, s.paths, s.w, u,
                                              Displacement{r, r_hat}, order)
                            .value();
                    if (rel_diff(series_sinr, exact) > 1e-6) {
                        c.fail("sinr series error " + std::to_string(rel_diff(series_sinr, exact)) +
                               " at kr=" + std::to_string(kr));
                    }
                }
                if (!c.ok) return c;
            }
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// 3. cone degeneracy: no interference along the cone axis
// ---------------------------------------------------------------------------
Check criterion_3() {
    Check c;
    for (double theta : {0.4, 0.9, 1.4}) {
        const Setup s = helpers::cone_scenario(theta);
        const double lambda = s.scenario.wavelength();
        const Vec3 axis{0, 0, 1};
        for (double frac = 0.05; frac <= 1.0; frac += 0.05) {
            const auto parts = covol::sinr_multipole(s.scenario, s.paths, s.w, 0,
                                                     Displacement{frac * lambda, axis}, 50);
            if (parts.interference > 1e-12 * s.scenario.noise_power) {
                c.fail("interference " + std::to_string(parts.interference) + " at r/lambda=" +
                       std::to_string(frac) + " theta=" + std::to_string(theta));
                return c;
            }
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// 4. approximation ladder on synthetic orthogonal-LOS scenarios
// ---------------------------------------------------------------------------
Check criterion_4() {
    Check c;
    for (std::size_t n_users : {4, 6}) {
        const Setup s = helpers::orthogonal_los(n_users, n_users, 40.0);
        const double lambda = s.scenario.wavelength();
        const double k = s.scenario.wavenumber();
        covol::Rng rng(11);

        for (int trial = 0; trial < 6; ++trial) {
            const Vec3 r_hat = rng.unit_sphere();
            for (std::size_t u = 0; u < n_users; ++u) {
                // Small-displacement form vs the full series at r <= lambda/100.
                for (double frac : {0.2, 0.6, 1.0}) {
                    const double r = frac * lambda / 100.0;
                    const double full =
                        covol::sinr_multipole(s.scenario, s.paths, s.w, u,
                                              Displacement{r, r_hat}, 40)
                            .value();
                    const double small = covol::sinr_small_displacement(
                                             s.scenario, s.paths, s.h, s.w, u, Displacement{r, r_hat})
                                             .value();
                    if (rel_diff(small, full) > 0.01) {
                        c.fail("order-1 form off by " + std::to_string(rel_diff(small, full)));
                    }
                }
                // Lorentzian vs exact at r <= lambda/50.
                const auto g = covol::geometry_fractions(s.h, s.paths, u, r_hat);
                const double snr = covol::snr_at_origin(s.h, s.w, u, s.scenario.noise_power);
                for (double frac : {0.3, 1.0}) {
                    const double r = frac * lambda / 50.0;
                    const double lor = covol::sinr_lorentzian(g, snr, k, r);
                    const double exact = covol::sinr_exact(s.scenario, s.paths, s.w, u, r_hat * r,
                                                           ChannelMode::PlaneWave)
                                             .value();
                    if (rel_diff(lor, exact) > 0.05) {
                        c.fail("lorentzian off by " + std::to_string(rel_diff(lor, exact)));
                    }
                }
                // Closed-form radius vs bisection on the exact profile,
                // in the regime where the radius is at most lambda/20.
                for (double t_db : {14.0, 17.0, 20.0, 25.0}) {
                    const double threshold = std::pow(10.0, t_db / 10.0);
                    if (threshold >= snr) continue;
                    const auto closed = covol::coherent_radius(g, snr, threshold, lambda);
                    if (closed.degenerate || closed.meters > lambda / 20.0) continue;
                    const double bisected = oracles::bisect_first_crossing(
                        [&](double x) {
                            return covol::sinr_exact(s.scenario, s.paths, s.w, u, r_hat * x,
                                                     ChannelMode::PlaneWave)
                                .value();
                        },
                        threshold, lambda, lambda / 400.0, lambda / 1e6);
                    if (rel_diff(closed.meters, bisected) > 0.10) {
                        c.fail("radius closed form " + std::to_string(closed.meters) +
                               " vs bisection " + std::to_string(bisected) + " at " +
                               std::to_string(t_db) + " dB");
                    }
                }
            }
            if (!c.ok) return c;
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// 5. radius property suite
// ---------------------------------------------------------------------------
Check criterion_5() {
    Check c;

    // (a) joint wavelength rescaling leaves the SINR field invariant.
    {
        covol::Scenario base = helpers::random_scenario(3, 7, 83);
        base.propagation.pathloss_ref_db = 15.0;
        base.propagation.pathloss_exponent = 2.2;
        const Setup a = helpers::finish(base);
        const double scale = 3.0;
        covol::Scenario scaled = base;
        scaled.propagation.carrier_hz = base.propagation.carrier_hz / scale;
        for (auto& p : scaled.users) p = p * scale;
        for (auto& p : scaled.antennas) p = p * scale;
        const Setup b = helpers::finish(scaled);
        covol::Rng rng(29);
        for (int trial = 0; trial < 40; ++trial) {
            const Vec3 r_hat = rng.unit_sphere();
            const double r = rng.uniform(0.0, 1.0) * a.scenario.wavelength();
            for (std::size_t u = 0; u < 3; ++u) {
                const double va = covol::sinr_exact(a.scenario, a.paths, a.w, u, r_hat * r,
                                                    ChannelMode::Spherical)
                                      .value();
                const double vb = covol::sinr_exact(b.scenario, b.paths, b.w, u,
                                                    r_hat * (r * scale), ChannelMode::Spherical)
                                      .value();
                if (rel_diff(va, vb) > 1e-9) {
                    c.fail("rescaled field differs by " + std::to_string(rel_diff(va, vb)));
                }
            }
        }
    }

    // (b) radius strictly decreases in the threshold.
    covol::GeometryFractions g;
    g.xi = {0.4, 0.35, 0.25};
    g.cos_gamma = {0.9, 0.1, -0.6};
    double prev = std::numeric_limits<double>::infinity();
    for (double t_db = -15.0; t_db < 40.0; t_db += 1.0) {
        const double r = covol::coherent_radius(g, 1e4, std::pow(10.0, t_db / 10.0), 1.0).meters;
        if (!(r < prev)) c.fail("radius not strictly decreasing at " + std::to_string(t_db));
        prev = r;
    }

    // (c) SNR saturation: 40 dB -> 60 dB moves the radius by < 1%.
    const double r40 = covol::coherent_radius(g, 1e4, std::pow(10.0, 0.5), 1.0).meters;
    const double r60 = covol::coherent_radius(g, 1e6, std::pow(10.0, 0.5), 1.0).meters;
    c.expect(rel_diff(r40, r60) < 0.01,
             "radius changed by " + std::to_string(rel_diff(r40, r60)) + " from 40 to 60 dB");

    // (d) centralized degeneracy: equal cosines give the infinity sentinel.
    covol::GeometryFractions eq;
    eq.xi = {0.5, 0.25, 0.25};
    eq.cos_gamma = {0.42, 0.42, 0.42};
    const auto sentinel = covol::coherent_radius(eq, 1e4, 10.0, 1.0);
    c.expect(sentinel.degenerate && sentinel.is_infinite(),
             "expected infinite degenerate radius");
    return c;
}

// ---------------------------------------------------------------------------
// 6. centralized vs distributed presets
// ---------------------------------------------------------------------------
Check criterion_6() {
    Check c;
    const Simulation fig2 = covol::build_simulation(covol::preset("fig2"));
    const Simulation fig3 = covol::build_simulation(covol::preset("fig3"));
    const SinrField field2 = covol::sample_main_field(fig2);
    const SinrField field3 = covol::sample_main_field(fig3);

    const double lambda = fig2.scenario.wavelength();
    const double threshold = std::pow(10.0, 0.5);  // 5 dB
    const std::size_t n_users = fig2.scenario.num_users();

    std::vector<CoherentVolume> vols2, vols3;
    std::vector<Vec3> refs;
    for (std::size_t u = 0; u < n_users; ++u) {
        // Axis to the centralized array, used for both layouts.
        const Vec3 ref = covol::layout_reference(fig2, u);
        refs.push_back(ref);
        covol::VolumeOptions opts;
        opts.bisect_tol = lambda / 1000.0;
        opts.march_step = lambda / 32.0;
        opts.max_radius = 30.0 * lambda;
        opts.reference_direction = ref;
        vols2.push_back(covol::extract_volume(field2, u, fig2.scenario.users[u], threshold,
                                              covol::make_evaluator(fig2, u), opts));
        vols3.push_back(covol::extract_volume(field3, u, fig3.scenario.users[u], threshold,
                                              covol::make_evaluator(fig3, u), opts));
    }

    // Displacing a quarter wavelength toward the array center costs less
    // SINR than the same displacement sideways (the elongation mechanism).
    const auto rows = covol::compare_layouts(vols2, vols3, refs, refs);
    std::vector<std::pair<std::string, double>> golden;
    {
        const double on_axis = covol::sinr_exact(fig2.scenario, fig2.paths, fig2.w, 1,
                                                 refs[1] * (lambda / 4.0), ChannelMode::Spherical)
                                   .value();
        const double sideways = covol::sinr_exact(fig2.scenario, fig2.paths, fig2.w, 1,
                                                  Vec3{1, 0, 0} * (lambda / 4.0),
                                                  ChannelMode::Spherical)
                                    .value();
        c.expect(on_axis > sideways, "quarter-wave displacement toward the array must beat "
                                     "the sideways one");
        golden.emplace_back("fig2.user1.quarterwave_on_axis_sinr", on_axis);
        golden.emplace_back("fig2.user1.quarterwave_sideways_sinr", sideways);
    }
    for (const auto& row : rows) {
        const std::string tag = "user" + std::to_string(row.user);
        if (!(row.elongation_a > row.elongation_b)) {
            c.fail(tag + ": centralized anisotropy " + std::to_string(row.elongation_a) +
                   " not greater than distributed " + std::to_string(row.elongation_b));
        }
        if (!(row.radius_b < row.radius_a)) {
            c.fail(tag + ": distributed radius " + std::to_string(row.radius_b) +
                   " not smaller than centralized " + std::to_string(row.radius_a));
        }
        golden.emplace_back(tag + ".centralized_radius_lambda", row.radius_a / lambda);
        golden.emplace_back(tag + ".distributed_radius_lambda", row.radius_b / lambda);
        golden.emplace_back(tag + ".centralized_elongation", row.elongation_a);
        golden.emplace_back(tag + ".distributed_elongation", row.elongation_b);
    }
    check_golden(c, "fig2_fig3_comparison.csv", golden, 5e-3);

    // Envelope snapshot of the distributed layout, every 64th grid point.
    std::vector<std::pair<std::string, double>> env;
    for (std::size_t lin = 0; lin < field3.envelope.size(); lin += 64) {
        env.emplace_back("env" + std::to_string(lin), field3.envelope[lin]);
    }
    check_golden(c, "fig3_envelope_sample.csv", env, 1e-9);
    return c;
}

// ---------------------------------------------------------------------------
// 7. fig4 coherent volumes
// ---------------------------------------------------------------------------
Check criterion_7() {
    Check c;
    const Simulation sim = covol::build_simulation(covol::preset("fig4"));
    const double lambda = sim.scenario.wavelength();
    const SinrField overview = covol::sample_main_field(sim);
    const std::vector<CoherentVolume> volumes = covol::extract_volumes(sim, overview);
    c.expect(volumes.size() == 10, "expected 10 volumes");

    std::vector<std::pair<std::string, double>> golden;
    for (const CoherentVolume& vol : volumes) {
        const std::string tag = "user" + std::to_string(vol.user);
        if (vol.empty) c.fail(tag + ": empty volume");
        if (!(vol.equivalent_radius < lambda / 2.0)) {
            c.fail(tag + ": radius " + std::to_string(vol.equivalent_radius / lambda) +
                   " lambda >= 0.5");
        }
        // Mutual compatibility: no volume reaches over any other user's
        // location (zero forcing pins nulls there).
        for (std::size_t v = 0; v < sim.scenario.num_users(); ++v) {
            if (v == vol.user) continue;
            const auto idx = vol.grid.nearest(sim.scenario.users[v]);
            if (!idx.empty() && vol.mask[vol.grid.linear_index(idx)] != 0) {
                c.fail(tag + ": volume covers user " + std::to_string(v));
            }
        }
        golden.emplace_back(tag + ".radius_lambda", vol.equivalent_radius / lambda);
    }
    check_golden(c, "fig4_volumes.csv", golden, 5e-3);
    return c;
}

// ---------------------------------------------------------------------------
// 8. SINR -> spectral efficiency anchor
// ---------------------------------------------------------------------------
Check criterion_8() {
    Check c;
    const covol::SeTable table = covol::default_se_table();
    c.expect(covol::sinr_to_se(5.0, table) == 1.48, "5 dB must map to exactly 1.48 bps/Hz");
    c.expect(covol::sinr_to_se(-100.0, table) == 0.0, "deep outage must map to 0");
    return c;
}

// ---------------------------------------------------------------------------
// 9. preset determinism: rerun -> byte-identical outputs
// ---------------------------------------------------------------------------
Check criterion_9() {
    Check c;
    const auto base = std::filesystem::temp_directory_path() / "covol_acceptance_det";
    std::filesystem::remove_all(base);
    const covol::SeTable table = covol::default_se_table();
    for (const std::string name : {"fig2", "fig3", "fig4"}) {
        std::vector<std::string> field_csv, volume_csv, pgm, meta;
        for (int run = 0; run < 2; ++run) {
            const Simulation sim = covol::build_simulation(covol::preset(name));
            const SinrField field = covol::sample_main_field(sim);
            const auto volumes = covol::extract_volumes(sim, field);
            const auto dir = base / (name + "_" + std::to_string(run));
            const auto paths = covol::write_outputs(field, volumes, sim, table, dir);
            field_csv.push_back(covol::read_file(paths.field_csv));
            volume_csv.push_back(covol::read_file(paths.volumes_csv));
            pgm.push_back(covol::read_file(paths.envelope_pgm));
            meta.push_back(covol::read_file(paths.metadata));
        }
        c.expect(field_csv[0] == field_csv[1], name + ": field.csv differs between reruns");
        c.expect(volume_csv[0] == volume_csv[1], name + ": volumes.csv differs between reruns");
        c.expect(pgm[0] == pgm[1], name + ": envelope.pgm differs between reruns");
        c.expect(meta[0] == meta[1], name + ": run_metadata.txt differs between reruns");
        if (!c.ok) break;
    }
    std::filesystem::remove_all(base);
    return c;
}

struct Criterion {
    int index;
    const char* name;
    double budget_seconds;
    std::function<Check()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "zero-forcing invariant on 100 seeded scenarios", 10.0, criterion_1},
        {2, "multipole series matches direct evaluation to kr = 10", 30.0, criterion_2},
        {3, "cone-degenerate direction carries no interference", 0.0, criterion_3},
        {4, "approximation ladder on orthogonal-LOS scenarios", 0.0, criterion_4},
        {5, "coherent-radius property suite", 0.0, criterion_5},
        {6, "centralized vs distributed layouts", 300.0, criterion_6},
        {7, "dense coherent volumes, 10 users in a 2-wavelength cube", 600.0, criterion_7},
        {8, "spectral-efficiency anchor at 5 dB", 0.0, criterion_8},
        {9, "preset reruns are byte-identical", 0.0, criterion_9},
    };

    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    int failures = 0;
    for (const Criterion& cr : criteria) {
        if (only != 0 && cr.index != only) continue;
        const auto start = std::chrono::steady_clock::now();
        Check result;
        try {
            result = cr.run();
        } catch (const std::exception& e) {
            result.fail(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.budget_seconds > 0.0 && elapsed > cr.budget_seconds) {
            result.fail("runtime " + std::to_string(elapsed) + " s exceeds budget of " +
                        std::to_string(cr.budget_seconds) + " s");
        }
        std::printf("criterion %d %s: %s (%.1f s)\n", cr.index, result.ok ? "PASS" : "FAIL",
                    cr.name, elapsed);
        if (!result.ok) {
            std::printf("    %s\n", result.detail.c_str());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
