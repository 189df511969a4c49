#include "grasshopper/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <set>

#include "grasshopper/errors.hpp"
#include "grasshopper/io.hpp"
#include "grasshopper/objective.hpp"

namespace grasshopper {
namespace {

// Maps library exceptions onto exit codes. `parse_code` lets verify report
// malformed colourings as usage errors.
int guarded(std::ostream& err, const std::function<int()>& body, int parse_code = kExitIo) {
    try {
        return body();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return parse_code;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const GeometryError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

std::string sanitize(std::string_view text) {
    std::string out;
    for (char ch : text) {
        const bool keep = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ||
                          ch == '.';
        out += keep ? ch : '_';
    }
    return out;
}

struct RunOutput {
    fs::path colouring_path;
    ResultsRow row;
};

// Writes one colouring file and appends its results row.
RunOutput persist_run(const fs::path& out_dir, const SphereGrid& grid, SolveResult& run,
                      const std::string& init_label) {
    RunOutput o;
    o.colouring_path = colouring_file_name(out_dir, run.record.theta, run.record.algorithm,
                                           run.record.seed, init_label);
    write_colouring(o.colouring_path, grid.depth(), run.record.theta, run.colouring);
    run.record.colouring_ref = o.colouring_path.string();
    o.row = make_results_row(run.record, init_label);
    append_results_row(out_dir / kResultsFileName, o.row);
    return o;
}

MultiStartResult run_batch(const SphereGrid& grid, const KernelIndex& index,
                           std::vector<Colouring> inits, Algorithm algorithm,
                           const AnnealSchedule& schedule, std::uint64_t seed) {
    MultiStartResult result = multi_start(grid, index, inits, algorithm, schedule);
    if (algorithm == Algorithm::greedy) {
        for (std::size_t r = 0; r < result.runs.size(); ++r) result.runs[r].record.seed = seed + r;
    }
    return result;
}

}  // namespace

double ThetaSpec::radians() const {
    double theta = value;
    switch (unit) {
        case Unit::radians:
            break;
        case Unit::fraction_of_pi:
            theta = value * std::numbers::pi;
            break;
        case Unit::c_value:
            if (!(value > 0.0)) throw DomainError("c must be positive");
            theta = 2.0 * std::numbers::pi / value;
            break;
    }
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw DomainError("theta " + std::to_string(theta) + " rad is outside [0, pi]");
    }
    return theta;
}

InitSpec InitSpec::parse(std::string_view text) {
    InitSpec spec;
    if (text == "hemisphere") {
        spec.kind = Kind::hemisphere;
    } else if (text == "random") {
        spec.kind = Kind::random;
    } else if (text.starts_with("file:") && text.size() > 5) {
        spec.kind = Kind::file;
        spec.path = std::string(text.substr(5));
    } else {
        throw ConfigError("init must be hemisphere, random or file:<path>, got '" +
                          std::string(text) + "'");
    }
    return spec;
}

std::string InitSpec::label() const {
    switch (kind) {
        case Kind::hemisphere:
            return "hemisphere";
        case Kind::random:
            return "random";
        case Kind::file:
            return "file-" + sanitize(path.stem().string());
    }
    return "";
}

AnnealSchedule resolve_schedule(const SphereGrid& grid, const ScheduleOverrides& overrides,
                                std::uint64_t seed) {
    AnnealSchedule s = overrides.slow ? slow_schedule(grid) : default_schedule(grid);
    if (overrides.t0) s.t0 = *overrides.t0;
    if (overrides.alpha) s.alpha = *overrides.alpha;
    if (overrides.steps) s.steps = *overrides.steps;
    s.seed = seed;
    s.validate();
    return s;
}

Colouring make_init(const SphereGrid& grid, const InitSpec& init, std::uint64_t seed,
                    std::size_t run) {
    switch (init.kind) {
        case InitSpec::Kind::hemisphere:
            return init_hemisphere(grid);
        case InitSpec::Kind::random:
            return init_random(grid, seed + run);
        case InitSpec::Kind::file: {
            const ColouringFile file = read_colouring(init.path);
            if (file.depth != grid.depth()) {
                throw ShapeError("initial colouring has depth " + std::to_string(file.depth) +
                                 ", grid has depth " + std::to_string(grid.depth()));
            }
            return init_from_colouring(grid, file.colouring);
        }
    }
    throw ConfigError("unknown init kind");
}

fs::path colouring_file_name(const fs::path& out_dir, double theta, Algorithm algorithm,
                             std::uint64_t seed, const std::string& init_label) {
    return out_dir / ("col_" + std::string(to_string(algorithm)) + "_theta" +
                      format_double(theta) + "_seed" + std::to_string(seed) + "_" +
                      sanitize(init_label) + ".col");
}

VerifyReport verify_colouring(const SphereGrid& grid, const Colouring& c, double theta,
                              const std::optional<fs::path>& cache_dir) {
    if (c.size() != grid.pair_count()) {
        throw ShapeError("colouring has " + std::to_string(c.size()) + " pairs, grid has " +
                         std::to_string(grid.pair_count()));
    }
    VerifyReport report;
    report.theta = theta;

    const std::vector<double> full = c.expand(grid);
    double colour = 0.0;
    bool pairs_ok = true;
    for (std::size_t p = 0; p < grid.pair_count(); ++p) {
        pairs_ok = pairs_ok && full[grid.upper()[p]] + full[grid.lower()[p]] == 1.0;
    }
    for (double v : full) colour += v;
    report.antipodal = pairs_ok && colour == static_cast<double>(grid.pair_count());

    const KernelIndex index = cached_index(grid, theta, cache_dir);
    report.point_p = point_probabilities(grid, index, c);
    report.p = total_probability(grid, index, c);
    const KernelIndex reflected = cached_index(grid, std::numbers::pi - theta, cache_dir);
    report.p_reflected = total_probability(grid, reflected, c);
    return report;
}

std::string point_table_csv(const SphereGrid& grid, const Colouring& c,
                            std::span<const double> point_p) {
    constexpr double kDeg = 180.0 / std::numbers::pi;
    std::string out = "index,lon,lat,coloured,p_i\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vec3& v = grid.point(i);
        double lon = std::atan2(v.y, v.x) * kDeg;
        if (lon >= 180.0) lon -= 360.0;
        const double lat = std::asin(std::clamp(v.z, -1.0, 1.0)) * kDeg;
        out += std::to_string(i) + ',' + format_double(lon) + ',' + format_double(lat) + ',' +
               (c.full_value(grid, i) == 1.0 ? '1' : '0') + ',' + format_double(point_p[i]) +
               '\n';
    }
    return out;
}

int cmd_build_grid(int depth, const fs::path& out_path, std::ostream& out, std::ostream& err) {
    if (depth < 0 || depth > kMaxDepth) {
        err << "error: depth must be in [0, " << kMaxDepth << "], got " << depth << "\n";
        return kExitUsage;
    }
    return guarded(err, [&] {
        const SphereGrid grid = build_grid(depth);
        write_grid(out_path, grid);
        out << "n2=" << grid.size() << " h=" << format_double(grid.resolution()) << "\n";
        return kExitOk;
    });
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        const SphereGrid grid = read_grid(o.grid_path);
        const double theta = o.theta.radians();
        if (o.runs < 1) throw ConfigError("--runs must be at least 1");
        if (o.log_events && (o.runs != 1 || o.algorithm != Algorithm::sa)) {
            throw ConfigError("--log-events needs a single annealing run");
        }
        const AnnealSchedule schedule = resolve_schedule(grid, o.schedule, o.seed);
        std::vector<Colouring> inits;
        for (unsigned r = 0; r < o.runs; ++r) inits.push_back(make_init(grid, o.init, o.seed, r));

        const KernelIndex index = cached_index(grid, theta, o.cache_index);
        fs::create_directories(o.out_dir);

        MultiStartResult result;
        if (o.log_events) {
            std::ofstream log(*o.log_events);
            if (!log) throw IoError("cannot open " + o.log_events->string());
            log << "step,temperature,pair,delta,accepted\n";
            result.runs.push_back(simulated_annealing(
                grid, index, inits[0], schedule, [&log](const AnnealEvent& e) {
                    log << e.step << ',' << format_double(e.temperature) << ',' << e.pair << ','
                        << format_double(e.delta) << ',' << (e.accepted ? 1 : 0) << '\n';
                }));
            if (!log) throw IoError("write failed for " + o.log_events->string());
        } else {
            result = run_batch(grid, index, std::move(inits), o.algorithm, schedule, o.seed);
        }

        const std::string label = o.init.label();
        for (std::size_t r = 0; r < result.runs.size(); ++r) {
            const RunOutput written = persist_run(o.out_dir, grid, result.runs[r], label);
            out << "run " << r << " seed=" << written.row.seed
                << " P=" << format_double(written.row.final_p)
                << " flips=" << written.row.accepted << " colouring=" << written.colouring_path.string()
                << "\n";
        }
        const RunRecord& best = result.best_run().record;
        out << "final P=" << format_double(best.final_p)
            << " P_hem=" << format_double(hemisphere_reference(theta)) << "\n";
        return kExitOk;
    });
}

int cmd_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        if (o.grid_path.has_value() == o.depth.has_value()) {
            throw ConfigError("sweep needs exactly one of --grid or --depth");
        }
        if (o.thetas.empty()) throw ConfigError("sweep needs at least one theta");
        if (o.runs < 1) throw ConfigError("--runs must be at least 1");
        std::vector<double> thetas;
        for (const ThetaSpec& t : o.thetas) thetas.push_back(t.radians());

        const SphereGrid grid = o.grid_path ? read_grid(*o.grid_path) : build_grid(*o.depth);
        const AnnealSchedule schedule = resolve_schedule(grid, o.schedule, o.seed);
        fs::create_directories(o.out_dir);
        const fs::path results_path = o.out_dir / kResultsFileName;

        std::map<std::string, ResultsRow> done;
        if (fs::exists(results_path)) {
            for (auto& row : read_results(results_path)) done.emplace(row.key(), row);
        }

        std::optional<Colouring> previous;
        std::size_t solved = 0, skipped = 0, failed = 0;
        for (const double theta : thetas) {
            try {
                const bool chained = o.chain && previous.has_value();
                const std::string label = chained ? "chain" : o.init.label();

                std::vector<const ResultsRow*> existing;
                for (unsigned r = 0; r < o.runs; ++r) {
                    ResultsRow probe;
                    probe.theta = theta;
                    probe.algorithm = std::string(to_string(o.algorithm));
                    probe.seed = o.seed + r;
                    probe.init = label;
                    auto it = done.find(probe.key());
                    if (it != done.end()) existing.push_back(&it->second);
                }
                if (existing.size() == o.runs) {
                    ++skipped;
                    const ResultsRow* best = existing[0];
                    for (const ResultsRow* row : existing) {
                        if (row->final_p > best->final_p) best = row;
                    }
                    out << "theta=" << format_double(theta) << " already done, best P="
                        << format_double(best->final_p) << "\n";
                    if (o.chain) {
                        previous = read_colouring(colouring_file_name(o.out_dir, theta,
                                                                      o.algorithm, best->seed,
                                                                      label))
                                       .colouring;
                    }
                    continue;
                }

                std::vector<Colouring> inits;
                for (unsigned r = 0; r < o.runs; ++r) {
                    inits.push_back(chained ? *previous : make_init(grid, o.init, o.seed, r));
                }
                const KernelIndex index = cached_index(grid, theta, o.cache_index);
                MultiStartResult result =
                    run_batch(grid, index, std::move(inits), o.algorithm, schedule, o.seed);
                for (auto& run : result.runs) {
                    const RunOutput written = persist_run(o.out_dir, grid, run, label);
                    done.emplace(written.row.key(), written.row);
                }
                previous = result.best_run().colouring;
                ++solved;
                out << "theta=" << format_double(theta)
                    << " best P=" << format_double(result.best_run().record.final_p)
                    << " P_hem=" << format_double(hemisphere_reference(theta)) << "\n";
            } catch (const Error& e) {
                ++failed;
                err << "error: theta=" << format_double(theta) << ": " << e.what() << "\n";
            } catch (const fs::filesystem_error& e) {
                ++failed;
                err << "error: theta=" << format_double(theta) << ": " << e.what() << "\n";
            }
        }
        out << "solved=" << solved << " skipped=" << skipped << " failed=" << failed << "\n";
        return failed > 0 ? kExitPartial : kExitOk;
    });
}

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
    const int code = guarded(err, [&]() -> int {
        const SphereGrid grid = read_grid(o.grid_path);
        return guarded(err, [&]() -> int {
            const ColouringFile file = read_colouring(o.colouring_path);
            if (file.depth != grid.depth() || file.colouring.size() != grid.pair_count()) {
                throw ShapeError("colouring depth " + std::to_string(file.depth) +
                                 " does not match grid depth " + std::to_string(grid.depth()));
            }
            const double theta = o.theta ? o.theta->radians() : file.theta;
            const VerifyReport report = verify_colouring(grid, file.colouring, theta, o.cache_index);
            out << "theta=" << format_double(theta) << "\n"
                << "P=" << format_double(report.p) << "\n"
                << "P_reflected=" << format_double(report.p_reflected) << "\n"
                << "sum=" << format_double(report.p + report.p_reflected) << "\n"
                << "antipodal=" << (report.antipodal ? "ok" : "FAILED") << "\n";
            if (o.points_out) {
                write_file_atomic(*o.points_out,
                                  point_table_csv(grid, file.colouring, report.point_p));
            }
            return report.antipodal ? kExitOk : kExitUsage;
        }, kExitUsage);
    });
    return code;
}

}  // namespace grasshopper
