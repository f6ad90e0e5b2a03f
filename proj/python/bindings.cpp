#include <fran/allocation.hpp>
#include <fran/config.hpp>
#include <fran/core_model.hpp>
#include <fran/errors.hpp>
#include <fran/handover.hpp>
#include <fran/ra_game.hpp>
#include <fran/random.hpp>
#include <fran/report.hpp>
#include <fran/sim_engine.hpp>

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace fran;

namespace {

FueId fue_id(std::uint32_t i) { return FueId(i); }
NodeId node_id(std::uint32_t i) { return NodeId(i); }

template <class Key, class Parse>
std::map<Key, double> keyed(const std::map<std::string, double>& in, Parse parse)
{
    std::map<Key, double> out;
    for (const auto& [name, value] : in) {
        out[parse(name)] = value;
    }
    return out;
}

py::dict row_dict(const MetricRow& r)
{
    py::dict d;
    d["sweep_param"] = r.sweep_param;
    d["sweep_value"] = r.sweep_value;
    d["variant"] = r.variant;
    d["metric"] = r.metric;
    d["mean"] = r.mean;
    d["std_err"] = r.std_err;
    d["n_reps"] = r.n_reps;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "FRAN handover and resource-allocation simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

    py::enum_<Scheme>(m, "Scheme")
        .value("proposed", Scheme::proposed)
        .value("existing_fran", Scheme::existing_fran)
        .value("non_fran", Scheme::non_fran);
    py::enum_<Procedure>(m, "Procedure").value("fran", Procedure::fran).value("non_fran", Procedure::non_fran);
    py::enum_<HandoverKind>(m, "HandoverKind")
        .value("fap_to_fap", HandoverKind::fap_to_fap)
        .value("fap_to_mrrh", HandoverKind::fap_to_mrrh)
        .value("mrrh_to_fap", HandoverKind::mrrh_to_fap)
        .value("srrh_to_srrh", HandoverKind::srrh_to_srrh)
        .value("srrh_to_mrrh", HandoverKind::srrh_to_mrrh);

    // ---- core model

    py::class_<TopologyConfig>(m, "TopologyConfig")
        .def(py::init<>())
        .def_readwrite("mrrh_radius", &TopologyConfig::mrrh_radius)
        .def_readwrite("n_faps", &TopologyConfig::n_faps)
        .def_readwrite("n_fues_per_fap", &TopologyConfig::n_fues_per_fap)
        .def_readwrite("n_macro_fues", &TopologyConfig::n_macro_fues)
        .def_readwrite("fap_radius", &TopologyConfig::fap_radius)
        .def_readwrite("fap_min_distance", &TopologyConfig::fap_min_distance)
        .def_readwrite("speed_low", &TopologyConfig::speed_low)
        .def_readwrite("speed_high", &TopologyConfig::speed_high)
        .def_readwrite("p_high_speed", &TopologyConfig::p_high_speed)
        .def_readwrite("cache_hit_min", &TopologyConfig::cache_hit_min)
        .def_readwrite("cache_hit_max", &TopologyConfig::cache_hit_max)
        .def("validate", &TopologyConfig::validate);

    py::class_<FogAccessPoint>(m, "FogAccessPoint")
        .def_property_readonly("id", [](const FogAccessPoint& a) { return to_index(a.id); })
        .def_property_readonly("position", [](const FogAccessPoint& a) { return py::make_tuple(a.position.x, a.position.y); })
        .def_readonly("radius", &FogAccessPoint::radius)
        .def_readonly("cache_hit_ratio", &FogAccessPoint::cache_hit_ratio);

    py::class_<FogUser>(m, "FogUser")
        .def_property_readonly("id", [](const FogUser& u) { return to_index(u.id); })
        .def_property_readonly("position", [](const FogUser& u) { return py::make_tuple(u.position.x, u.position.y); })
        .def_property_readonly("serving_node", [](const FogUser& u) { return to_index(u.serving_node); })
        .def_readonly("speed", &FogUser::speed);

    py::class_<Topology>(m, "Topology")
        .def_readonly("mrrh_radius", &Topology::mrrh_radius)
        .def_readonly("faps", &Topology::faps)
        .def_readonly("fues", &Topology::fues)
        .def("receiver_count", &Topology::receiver_count)
        .def("users_of", [](const Topology& t, std::uint32_t node) {
            std::vector<std::size_t> out;
            for (FueId f : t.users_of(node_id(node))) {
                out.push_back(to_index(f));
            }
            return out;
        })
        .def("validate", &Topology::validate);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init(&ChannelParams::defaults))
        .def_readwrite("pathloss_exponent", &ChannelParams::pathloss_exponent)
        .def_readwrite("reference_gain", &ChannelParams::reference_gain)
        .def_readwrite("noise_power", &ChannelParams::noise_power)
        .def_readwrite("bandwidth", &ChannelParams::bandwidth)
        .def_readwrite("n_subchannels", &ChannelParams::n_subchannels)
        .def_static("thermal_noise", &ChannelParams::thermal_noise)
        .def("validate", &ChannelParams::validate);

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def(py::init<std::size_t, std::size_t, std::size_t>(), py::arg("n_fues"), py::arg("n_receivers"),
             py::arg("n_subchannels"))
        .def("gain", [](const ChannelRealization& c, std::uint32_t f, std::uint32_t rx,
                        std::size_t k) { return c.gain(fue_id(f), node_id(rx), k); })
        .def("set_gain", [](ChannelRealization& c, std::uint32_t f, std::uint32_t rx, std::size_t k,
                            double v) { c.set_gain(fue_id(f), node_id(rx), k, v); })
        .def_property_readonly("fue_count", &ChannelRealization::fue_count)
        .def_property_readonly("receiver_count", &ChannelRealization::receiver_count)
        .def_property_readonly("subchannel_count", &ChannelRealization::subchannel_count);

    m.def("path_gain", &path_gain, py::arg("params"), py::arg("distance_m"));
    m.def(
        "generate_topology",
        [](const TopologyConfig& c, std::uint64_t seed) {
            Rng rng(seed);
            return generate_topology(c, rng);
        },
        py::arg("config"), py::arg("seed"));
    m.def(
        "draw_channel",
        [](const Topology& t, const ChannelParams& p, std::uint64_t seed) {
            Rng rng(seed);
            return draw_channel(t, p, rng);
        },
        py::arg("topology"), py::arg("params"), py::arg("seed"));

    py::class_<PowerGrid>(m, "PowerGrid")
        .def(py::init<std::vector<double>>(), py::arg("levels"))
        .def_static("logarithmic", &PowerGrid::logarithmic, py::arg("p_min"), py::arg("p_max"), py::arg("count"))
        .def_static("defaults", &PowerGrid::defaults)
        .def("__len__", &PowerGrid::size)
        .def("__getitem__", &PowerGrid::operator[])
        .def_property_readonly("levels", [](const PowerGrid& g) {
            return std::vector<double>(g.levels().begin(), g.levels().end());
        });

    py::class_<Allocation>(m, "Allocation")
        .def(py::init<const Topology&, std::size_t, PowerGrid>(), py::arg("topology"), py::arg("n_subchannels"),
             py::arg("grid"))
        .def("assign", [](Allocation& a, std::uint32_t f, std::size_t k, std::size_t l) { a.assign(fue_id(f), k, l); },
             py::arg("fue"), py::arg("subchannel"), py::arg("level") = 0)
        .def("set_level", [](Allocation& a, std::uint32_t f, std::size_t k,
                             std::size_t l) { a.set_level(fue_id(f), k, l); })
        .def("is_assigned", [](const Allocation& a, std::uint32_t f, std::size_t k) { return a.is_assigned(fue_id(f), k); })
        .def("level", [](const Allocation& a, std::uint32_t f, std::size_t k) { return a.level(fue_id(f), k); })
        .def("power", [](const Allocation& a, std::uint32_t f, std::size_t k) { return a.power(fue_id(f), k); })
        .def("total_power", [](const Allocation& a, std::uint32_t f) { return a.total_power(fue_id(f)); })
        .def("subchannels_of", [](const Allocation& a, std::uint32_t f) {
            std::vector<std::size_t> out;
            for (const auto& s : a.assignments(fue_id(f))) {
                out.push_back(s.subchannel);
            }
            return out;
        })
        .def("players", [](const Allocation& a) {
            std::vector<std::size_t> out;
            for (FueId f : a.players()) {
                out.push_back(to_index(f));
            }
            return out;
        })
        .def_property_readonly("fue_count", &Allocation::fue_count)
        .def_property_readonly("subchannel_count", &Allocation::subchannel_count)
        .def(py::self == py::self);

    m.def(
        "sinr",
        [](std::uint32_t f, std::size_t k, const Allocation& a, const ChannelRealization& ch,
           const ChannelParams& p) { return sinr(fue_id(f), k, a, ch, p); },
        py::arg("fue"), py::arg("subchannel"), py::arg("allocation"), py::arg("channel"), py::arg("params"));
    m.def("rate", &rate, py::arg("sinr"), py::arg("params"));
    m.def(
        "total_rate",
        [](std::uint32_t f, const Allocation& a, const ChannelRealization& ch, const ChannelParams& p) {
            return total_rate(fue_id(f), a, ch, p);
        },
        py::arg("fue"), py::arg("allocation"), py::arg("channel"), py::arg("params"));

    // ---- resource-allocation game

    py::class_<UtilityParams>(m, "UtilityParams")
        .def(py::init<>())
        .def_readwrite("price_coefficient", &UtilityParams::price_coefficient)
        .def_readwrite("price_exponent", &UtilityParams::price_exponent)
        .def_readwrite("reward_coefficient", &UtilityParams::reward_coefficient)
        .def("validate", &UtilityParams::validate);

    py::class_<GameSettings>(m, "GameSettings")
        .def(py::init<>())
        .def_readwrite("max_iters", &GameSettings::max_iters)
        .def_readwrite("epsilon", &GameSettings::epsilon);

    py::class_<GameResult>(m, "GameResult")
        .def_readonly("allocation", &GameResult::allocation)
        .def_readonly("iterations", &GameResult::iterations)
        .def_readonly("converged", &GameResult::converged)
        .def_readonly("total_net_utility", &GameResult::total_net_utility)
        .def_readonly("monotone_violations", &GameResult::monotone_violations)
        .def_readonly("budget_saturations", &GameResult::budget_saturations)
        .def_property_readonly("per_fue_utility", [](const GameResult& r) {
            std::map<std::size_t, double> out;
            for (const auto& [f, u] : r.per_fue_utility) {
                out[to_index(f)] = u;
            }
            return out;
        });

    m.def(
        "net_utility",
        [](std::uint32_t f, const Allocation& a, const ChannelRealization& ch, const UtilityParams& u,
           const ChannelParams& c, const Topology& t) { return net_utility(fue_id(f), a, ch, u, c, t); },
        py::arg("fue"), py::arg("allocation"), py::arg("channel"), py::arg("utility"), py::arg("params"),
        py::arg("topology"));
    m.def("assign_subchannels", &assign_subchannels, py::arg("topology"), py::arg("channel"), py::arg("utility"),
          py::arg("params"), py::arg("grid"));
    m.def("iterate_to_ne", &iterate_to_ne, py::arg("allocation"), py::arg("channel"), py::arg("utility"),
          py::arg("params"), py::arg("topology"), py::arg("settings") = GameSettings{});
    m.def("verify_ne", &verify_ne, py::arg("allocation"), py::arg("channel"), py::arg("utility"), py::arg("params"),
          py::arg("topology"), py::arg("epsilon") = 1e-9);
    m.def(
        "run_baseline",
        [](const std::string& scheme, const Topology& t, const ChannelRealization& ch, const ChannelParams& c,
           const UtilityParams& u, const PowerGrid& g, const GameSettings& s) {
            return run_baseline(parse_scheme(scheme), t, ch, c, u, g, s);
        },
        py::arg("scheme"), py::arg("topology"), py::arg("channel"), py::arg("params"), py::arg("utility"),
        py::arg("grid"), py::arg("settings") = GameSettings{});

    // ---- handover signaling

    py::class_<OverheadProfile>(m, "OverheadProfile")
        .def(py::init(&OverheadProfile::defaults))
        .def_static("empty", &OverheadProfile::empty)
        .def("set_processing", [](OverheadProfile& p, const std::string& e,
                                  double v) { p.set_processing(parse_entity_kind(e), v); })
        .def("set_link", [](OverheadProfile& p, const std::string& l, double v) { p.set_link(parse_link_kind(l), v); })
        .def("processing", [](const OverheadProfile& p, const std::string& e) { return p.processing(parse_entity_kind(e)); })
        .def("link", [](const OverheadProfile& p, const std::string& l) { return p.link(parse_link_kind(l)); })
        .def("validate", &OverheadProfile::validate);

    m.def(
        "build_trace",
        [](const std::string& kind, const std::string& procedure) {
            std::ostringstream out;
            write_trace(out, build_trace(parse_handover_kind(kind), parse_procedure(procedure)));
            std::vector<std::vector<std::string>> messages;
            std::string line;
            std::istringstream in(out.str());
            while (std::getline(in, line)) {
                std::vector<std::string> fields;
                std::string field;
                std::istringstream cols(line);
                while (std::getline(cols, field, '\t')) {
                    fields.push_back(field);
                }
                messages.push_back(fields);
            }
            return messages;
        },
        py::arg("kind"), py::arg("procedure"),
        "Messages as [name, from, via..., to] lists.");
    m.def(
        "trace_overhead",
        [](const std::string& kind, const std::string& procedure, const OverheadProfile& profile) {
            const auto b = trace_overhead(build_trace(parse_handover_kind(kind), parse_procedure(procedure)), profile);
            return py::make_tuple(b.processing, b.transmitting);
        },
        py::arg("kind"), py::arg("procedure"), py::arg("profile") = OverheadProfile::defaults(),
        "(processing, transmitting) cost of one handover.");
    m.def(
        "speed_gate",
        [](double speed, double threshold, const std::string& source, const std::string& target,
           const std::string& procedure) {
            return speed_gate(speed, threshold, parse_entity_kind(source), parse_entity_kind(target),
                              parse_procedure(procedure));
        },
        py::arg("speed"), py::arg("threshold"), py::arg("source"), py::arg("target"), py::arg("procedure"));

    py::class_<SessionModel>(m, "SessionModel")
        .def(py::init([](double lambda, double hold, double eta) {
                 SessionModel s;
                 s.arrival_rate = lambda;
                 s.mean_holding_time = hold;
                 s.residence_rate = eta;
                 return s;
             }),
             py::arg("arrival_rate") = 0.1, py::arg("mean_holding_time") = 5.0, py::arg("residence_rate") = 0.0)
        .def_readwrite("arrival_rate", &SessionModel::arrival_rate)
        .def_readwrite("mean_holding_time", &SessionModel::mean_holding_time)
        .def_readwrite("residence_rate", &SessionModel::residence_rate)
        .def("validate", &SessionModel::validate);

    py::class_<ScenarioProbabilities>(m, "ScenarioProbabilities")
        .def_readonly("p_s2", &ScenarioProbabilities::p_s2)
        .def_readonly("s1_expected", &ScenarioProbabilities::s1_expected)
        .def_readonly("expected_handovers_per_session", &ScenarioProbabilities::expected_handovers_per_session);

    m.def("fluid_flow_residence_rate", &fluid_flow_residence_rate, py::arg("mean_speed"), py::arg("cell_radius"));
    m.def("scenario_probabilities", &scenario_probabilities, py::arg("session"));
    m.def(
        "expected_overhead_rate",
        [](const SessionModel& s, const std::map<std::string, double>& costs,
           const std::map<std::string, double>& mix) {
            return expected_overhead_rate(s, keyed<HandoverKind>(costs, parse_handover_kind),
                                          keyed<HandoverKind>(mix, parse_handover_kind));
        },
        py::arg("session"), py::arg("trace_costs"), py::arg("mix"));

    // ---- simulation engine

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init(&SimConfig::defaults))
        .def_readwrite("horizon", &SimConfig::horizon)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("session", &SimConfig::session)
        .def_readwrite("topology", &SimConfig::topology)
        .def_readwrite("channel", &SimConfig::channel)
        .def_readwrite("utility", &SimConfig::utility)
        .def_readwrite("grid", &SimConfig::grid)
        .def_readwrite("game", &SimConfig::game)
        .def_readwrite("overhead", &SimConfig::overhead)
        .def_readwrite("procedure", &SimConfig::procedure)
        .def_readwrite("speed_threshold", &SimConfig::speed_threshold)
        .def_readwrite("replications", &SimConfig::replications)
        .def_readwrite("snapshots", &SimConfig::snapshots)
        .def_property(
            "mix",
            [](const SimConfig& c) {
                std::map<std::string, double> out;
                for (const auto& [k, p] : c.mix) {
                    out[std::string(to_string(k))] = p;
                }
                return out;
            },
            [](SimConfig& c, const std::map<std::string, double>& mix) {
                c.mix = keyed<HandoverKind>(mix, parse_handover_kind);
            })
        .def("mean_speed", &SimConfig::mean_speed)
        .def("slow_fraction", &SimConfig::slow_fraction)
        .def("validate", &SimConfig::validate);

    py::class_<ReplicationRecord>(m, "ReplicationRecord")
        .def_readonly("seed", &ReplicationRecord::seed)
        .def_readonly("sessions", &ReplicationRecord::sessions)
        .def_readonly("handovers", &ReplicationRecord::handovers)
        .def_readonly("scenario1", &ReplicationRecord::scenario1)
        .def_readonly("scenario2", &ReplicationRecord::scenario2)
        .def_readonly("crossings", &ReplicationRecord::crossings)
        .def_readonly("gated", &ReplicationRecord::gated)
        .def_readonly("fast_mrrh_to_fap", &ReplicationRecord::fast_mrrh_to_fap)
        .def_readonly("overhead_rate", &ReplicationRecord::overhead_rate)
        .def_readonly("processing_overhead", &ReplicationRecord::processing_overhead)
        .def_readonly("transmitting_overhead", &ReplicationRecord::transmitting_overhead)
        .def_readonly("causal", &ReplicationRecord::causal)
        .def_readonly("games", &ReplicationRecord::games)
        .def_readonly("games_converged", &ReplicationRecord::games_converged)
        .def_readonly("game_rows", &ReplicationRecord::game_rows)
        .def_property_readonly("utility", [](const ReplicationRecord& r) {
            std::map<std::string, double> out;
            for (Scheme s : kAllSchemes) {
                out[std::string(to_string(s))] = r.utility[static_cast<std::size_t>(s)];
            }
            return out;
        })
        .def("overhead", &ReplicationRecord::overhead)
        .def("handovers_per_session", &ReplicationRecord::handovers_per_session);

    m.def("trace_costs", [](const std::string& procedure, const OverheadProfile& profile) {
        std::map<std::string, double> out;
        for (const auto& [k, c] : trace_costs(parse_procedure(procedure), profile)) {
            out[std::string(to_string(k))] = c;
        }
        return out;
    }, py::arg("procedure"), py::arg("profile") = OverheadProfile::defaults());
    m.def("analytic_overhead_rate", &analytic_overhead_rate, py::arg("config"));
    m.def("run_replication", &run_replication, py::arg("config"), py::arg("seed"));
    m.def(
        "run_experiment",
        [](const SimConfig& c, const std::string& param, const std::vector<double>& values, const std::string& study) {
            Study s;
            if (study == "overhead") {
                s = Study::overhead;
            } else if (study == "utility") {
                s = Study::utility;
            } else {
                throw ConfigError("study must be overhead or utility, got '" + study + "'");
            }
            const auto report = run_experiment(c, {parse_sweep_param(param), values}, s);
            py::list rows;
            for (const auto& r : report.rows) {
                rows.append(row_dict(r));
            }
            return rows;
        },
        py::arg("config"), py::arg("param"), py::arg("values"), py::arg("study") = "overhead",
        "Aggregated metric rows as dicts with the metrics CSV columns.");

    // ---- configuration and report

    m.def(
        "parse_config_text",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_config_text(in).sim;
        },
        py::arg("text"));
    m.def("parse_config", &parse_config, py::arg("path"));
    m.def(
        "metrics_csv",
        [](const std::vector<py::dict>& rows) {
            std::vector<MetricRow> out;
            for (const auto& d : rows) {
                out.push_back({d["sweep_param"].cast<std::string>(), d["sweep_value"].cast<double>(),
                               d["variant"].cast<std::string>(), d["metric"].cast<std::string>(),
                               d["mean"].cast<double>(), d["std_err"].cast<double>(),
                               d["n_reps"].cast<std::size_t>()});
            }
            std::ostringstream s;
            write_metrics_csv(s, out);
            return s.str();
        },
        py::arg("rows"));
}
