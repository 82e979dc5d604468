#pragma once

/*
 * Command implementations behind the command-line tool. Each cmd_* function
 * does the work of one subcommand, writes its outputs, and returns the
 * process exit code, so tests can drive them without spawning a process.
 *
 * Exit codes: 0 success (simulate: reached t_end), 10 collision, 11 blowup,
 * 2 input/config error, 3 integration step failure, 4 reconstruction error.
 */

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "collision.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "inverse.hpp"
#include "io.hpp"
#include "lax.hpp"
#include "model.hpp"
#include "spectral.hpp"

namespace cf {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitIntegration = 3;
constexpr int kExitReconstruction = 4;
constexpr int kExitCollision = 10;
constexpr int kExitBlowup = 11;

namespace detail {

inline std::string json_list(const std::vector<Real>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_real(v[i]);
    return s + "]";
}

inline std::string json_str(const std::string& s) { return "\"" + s + "\""; }

}  // namespace detail

/*
 * Integrate the configured state to t_end; emit trajectory.csv
 * (t, x_1..x_d, m_1..m_d) and invariants.csv (t, relative drift of each
 * trace coefficient) under the output directory.
 */
inline int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    Trajectory traj;
    try {
        const ModelParams p = cfg.params();
        const PeakonState s0 = cfg.state();
        traj = integrate(s0, p, cfg.t_end, cfg.integ);

        std::filesystem::create_directories(cfg.out_dir);
        const int d = s0.d();
        std::vector<std::string> header{"t"};
        for (int j = 1; j <= d; ++j) header.push_back("x_" + std::to_string(j));
        for (int j = 1; j <= d; ++j) header.push_back("m_" + std::to_string(j));
        std::vector<std::vector<Real>> rows;
        rows.reserve(traj.samples.size());
        for (const PeakonState& s : traj.samples) {
            std::vector<Real> row{s.t};
            row.insert(row.end(), s.x.begin(), s.x.end());
            row.insert(row.end(), s.m.begin(), s.m.end());
            rows.push_back(std::move(row));
        }
        write_csv(cfg.out_dir + "/trajectory.csv", header, rows);

        std::vector<std::string> inv_header{"t"};
        for (int i = 0; i <= d; ++i) inv_header.push_back("c" + std::to_string(i));
        std::vector<std::vector<Real>> inv_rows;
        const std::vector<Real>& c0 = traj.invariant_log.front();
        for (std::size_t k = 0; k < traj.samples.size(); ++k) {
            std::vector<Real> row{traj.samples[k].t};
            for (std::size_t i = 0; i < c0.size(); ++i) {
                const Real denom = std::max(std::abs(c0[i]), Real(1e-12));
                row.push_back(std::abs(traj.invariant_log[k][i] - c0[i]) / denom);
            }
            inv_rows.push_back(std::move(row));
        }
        write_csv(cfg.out_dir + "/invariants.csv", inv_header, inv_rows);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitInput;
    }

    const PeakonState& last = traj.samples.back();
    const char* label = traj.termination == Termination::reached_t_end ? "reached_t_end"
                        : traj.termination == Termination::collision   ? "collision"
                        : traj.termination == Termination::blowup      ? "blowup"
                                                                       : "step_failure";
    log << "termination=" << label << " t_final=" << fmt_real(last.t)
        << " samples=" << traj.samples.size();
    if (traj.termination == Termination::collision)
        log << " gap_index=" << traj.collision_index << " t_c=" << fmt_real(traj.collision_time);
    log << "\n";

    if (cfg.format == "json") {
        std::ofstream js(cfg.out_dir + "/summary.json");
        js << "{\n  \"termination\": " << detail::json_str(label)
           << ",\n  \"t_final\": " << fmt_real(last.t) << ",\n  \"samples\": " << traj.samples.size()
           << ",\n  \"x_final\": " << detail::json_list(last.x)
           << ",\n  \"m_final\": " << detail::json_list(last.m) << "\n}\n";
    }

    switch (traj.termination) {
        case Termination::reached_t_end: return kExitOk;
        case Termination::collision: return kExitCollision;
        case Termination::blowup: return kExitBlowup;
        case Termination::step_failure: return kExitIntegration;
    }
    return kExitIntegration;
}

/*
 * Report the spectral data of the configured state as a JSON document:
 * trace coefficients, curve polynomial, branch points, genus, and the
 * sheet selected by the sign of the constant trace coefficient.
 */
inline int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    ModelParams p;
    PeakonState s0;
    try {
        p = cfg.params();
        s0 = cfg.state();
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return kExitInput;
    }

    const MatrixPoly2 A = build_A(s0, p);
    const Poly tr = A.trace();
    std::string warning;
    SpectralData sd;
    bool have_curve = true;
    try {
        sd = curve_data(A, p);
    } catch (const DegenerateCurve& e) {
        have_curve = false;
        warning = e.what();
    }

    const Real cd = tr[0];
    std::string sheet = cd > 0 ? "upper" : cd < 0 ? "lower" : "undefined";
    if (cd == 0) warning = warning.empty() ? "branch point at origin" : warning + "; branch point at origin";

    out << "{\n";
    out << "  \"trace_coefficients\": " << detail::json_list(tr.coeffs()) << ",\n";
    if (have_curve) {
        out << "  \"curve_coefficients\": " << detail::json_list(sd.P.coeffs()) << ",\n";
        std::vector<Real> re, im;
        for (const Complex& b : sd.branch_points) {
            re.push_back(b.real());
            im.push_back(b.imag());
        }
        out << "  \"branch_points_re\": " << detail::json_list(re) << ",\n";
        out << "  \"branch_points_im\": " << detail::json_list(im) << ",\n";
        out << "  \"genus\": " << sd.genus << ",\n";
        out << "  \"perfect_square\": " << (sd.perfect_square ? "true" : "false") << ",\n";
        if (sd.perfect_square)
            warning = warning.empty() ? "perfect square: genus drops to 0"
                                      : warning + "; perfect square: genus drops to 0";
    } else {
        const Poly P = Real(0.25) * (tr * tr) -
                       Poly::monomial(p.det_beta(), static_cast<std::size_t>(2 * s0.d()));
        out << "  \"curve_coefficients\": " << detail::json_list(P.coeffs()) << ",\n";
    }
    out << "  \"c_d\": " << fmt_real(cd) << ",\n";
    out << "  \"sheet\": " << detail::json_str(sheet) << ",\n";
    out << "  \"warning\": " << detail::json_str(warning) << "\n";
    out << "}\n";
    return kExitOk;
}

/* Reconstruct positions and masses from a Weyl-series file. */
inline int cmd_invert(const std::string& weyl_path, std::ostream& out,
                      const std::string& format) {
    WeylFile f;
    try {
        f = read_weyl(weyl_path);
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return kExitInput;
    }
    try {
        ModelParams p;
        p.nu = f.nu;
        const StringData sd = reconstruct_string(f.series(), f.d, f.M, p);
        const PeakonState s = string_to_peakons(sd, p);
        if (format == "json") {
            out << "{\n  \"x\": " << detail::json_list(s.x) << ",\n  \"m\": " << detail::json_list(s.m)
                << "\n}\n";
        } else {
            for (int j = 0; j < s.d(); ++j)
                out << "x_" << (j + 1) << "=" << fmt_real(s.x[static_cast<std::size_t>(j)]) << " m_"
                    << (j + 1) << "=" << fmt_real(s.m[static_cast<std::size_t>(j)]) << "\n";
        }
        return kExitOk;
    } catch (const Error& e) {
        out << "error: reconstruction failed: " << e.what() << "\n";
        return kExitReconstruction;
    }
}

/*
 * Forward-construct the Weyl series of the configured state, write it next
 * to the trajectory outputs, invert it, and compare against the input.
 * Passes when every coordinate returns to within 1e-6 relative.
 */
inline int cmd_roundtrip(const RunConfig& cfg, std::ostream& out) {
    ModelParams p;
    PeakonState s0;
    try {
        p = cfg.params();
        s0 = cfg.state();
        bool pos = s0.m[0] > 0;
        for (Real mj : s0.m)
            if ((mj > 0) != pos) throw ConfigError("roundtrip: same-sign masses required");
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return kExitInput;
    }

    try {
        const int d = s0.d();
        const int order = cfg.weyl_order > 0 ? cfg.weyl_order : 2 * d;
        const MatrixPoly2 A = build_A(s0, p);
        const SpectralData sd = curve_data(A, p);
        const WeylSeries W = weyl_series(A, sd, order);

        std::filesystem::create_directories(cfg.out_dir);
        write_weyl(cfg.out_dir + "/weyl.txt", W, d, p.nu, s0.total_mass());

        const StringData str = reconstruct_string(W, sd, p);
        const PeakonState rec = string_to_peakons(str, p);

        bool pass = true;
        for (int j = 0; j < d; ++j) {
            const std::size_t k = static_cast<std::size_t>(j);
            const Real ex = std::abs(rec.x[k] - s0.x[k]) / std::max(Real(1), std::abs(s0.x[k]));
            const Real em = std::abs(rec.m[k] - s0.m[k]) / std::abs(s0.m[k]);
            pass = pass && ex < 1e-6 && em < 1e-6;
            out << "x_" << (j + 1) << " rel_err=" << fmt_real(ex) << "  m_" << (j + 1)
                << " rel_err=" << fmt_real(em) << "\n";
        }
        out << (pass ? "PASS" : "FAIL") << "\n";
        return pass ? kExitOk : kExitReconstruction;
    } catch (const Error& e) {
        out << "error: round trip failed: " << e.what() << "\n";
        return kExitReconstruction;
    }
}

/* Report the d=2 collision invariant and canonical form for a config. */
inline int cmd_collide(const RunConfig& cfg, std::ostream& out) {
    ModelParams p;
    PeakonState s0;
    try {
        p = cfg.params();
        s0 = cfg.state();
        if (s0.d() != 2) throw ConfigError("collide: requires exactly d=2");
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return kExitInput;
    }
    try {
        const Real M = s0.total_mass();
        const Real C2 = c2_invariant(s0, p);
        const CollisionForm f = canonical_form(p, M, C2);
        out << "{\n";
        out << "  \"M\": " << fmt_real(M) << ",\n";
        out << "  \"C2\": " << fmt_real(C2) << ",\n";
        out << "  \"pole_location\": " << fmt_real(f.pole_location) << ",\n";
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                out << "  \"entry_" << i << j << "_num\": "
                    << detail::json_list(f.entries[i][j].num.coeffs()) << ",\n";
                out << "  \"entry_" << i << j << "_den\": "
                    << detail::json_list(f.entries[i][j].den.coeffs())
                    << (i == 1 && j == 1 ? "\n" : ",\n");
            }
        out << "}\n";
        return kExitOk;
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

}  // namespace cf
