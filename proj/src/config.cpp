#include <fran/config.hpp>
#include <fran/errors.hpp>
#include <fran/text.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace fran {

namespace {

namespace pt = boost::property_tree;

class Section
{
public:
    Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

    std::optional<std::string> raw(const std::string& key)
    {
        used_.insert(key);
        if (tree_ == nullptr) {
            return std::nullopt;
        }
        auto found = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!found) {
            return std::nullopt;
        }
        std::optional<std::string> v = *found;
        {
            // ini_parser keeps inline text verbatim; strip trailing comments.
            auto pos = v->find_first_of(";#");
            if (pos != std::string::npos) {
                v->erase(pos);
            }
            while (!v->empty() && std::isspace(static_cast<unsigned char>(v->back()))) {
                v->pop_back();
            }
        }
        return v;
    }

    void number(const std::string& key, double& out)
    {
        if (auto v = raw(key)) {
            out = parse_number(*v, qualified(key));
            if (!std::isfinite(out)) {
                throw ConfigError(qualified(key) + ": must be finite");
            }
        }
    }

    template <typename Int>
    void count(const std::string& key, Int& out)
    {
        if (auto v = raw(key)) {
            const double d = parse_number(*v, qualified(key));
            if (!(d >= 0.0) || d != std::floor(d) || d > 9.0e15) {
                throw ConfigError(qualified(key) + ": must be a nonnegative integer");
            }
            out = static_cast<Int>(d);
        }
    }

    std::string qualified(const std::string& key) const { return name_ + "." + key; }

    /// Reject keys nobody asked for.
    void check_unused() const
    {
        if (tree_ == nullptr) {
            return;
        }
        for (const auto& [key, child] : *tree_) {
            if (!used_.contains(key)) {
                throw ConfigError(qualified(key) + ": unknown key");
            }
        }
    }

private:
    std::string name_;
    const pt::ptree* tree_;
    std::set<std::string> used_;
};

std::vector<double> parse_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number(item, what));
    }
    if (out.empty()) {
        throw ConfigError(what + ": needs at least one value");
    }
    return out;
}

} // namespace

ParsedConfig parse_config_text(std::istream& in, const std::string& source_name)
{
    pt::ptree root;
    try {
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source_name + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    static const std::set<std::string> known = {"sim",   "session", "topology", "channel",  "utility",
                                                "power", "game",    "handover", "overhead", "sweep"};
    for (const auto& [name, child] : root) {
        if (!known.contains(name)) {
            throw ConfigError(name + ": unknown section");
        }
        if (child.empty() && !child.data().empty()) {
            throw ConfigError(name + ": key outside any section");
        }
    }
    auto section = [&](const std::string& name) {
        auto it = root.find(name);
        return Section(name, it == root.not_found() ? nullptr : &it->second);
    };

    ParsedConfig parsed;
    SimConfig& c = parsed.sim;

    auto sim = section("sim");
    sim.number("horizon", c.horizon);
    sim.count("seed", c.seed);
    sim.count("replications", c.replications);
    sim.count("snapshots", c.snapshots);
    sim.check_unused();

    auto topo = section("topology");
    topo.number("mrrh_radius", c.topology.mrrh_radius);
    topo.count("n_faps", c.topology.n_faps);
    topo.count("n_fues_per_fap", c.topology.n_fues_per_fap);
    topo.count("n_macro_fues", c.topology.n_macro_fues);
    topo.number("fap_radius", c.topology.fap_radius);
    topo.number("fap_min_distance", c.topology.fap_min_distance);
    topo.number("speed_low", c.topology.speed_low);
    topo.number("speed_high", c.topology.speed_high);
    topo.number("p_high_speed", c.topology.p_high_speed);
    topo.number("cache_hit_min", c.topology.cache_hit_min);
    topo.number("cache_hit_max", c.topology.cache_hit_max);
    topo.check_unused();

    auto session = section("session");
    session.number("arrival_rate", c.session.arrival_rate);
    session.number("mean_holding_time", c.session.mean_holding_time);
    double residence = -1.0;
    bool residence_given = false;
    if (session.raw("residence_rate")) {
        session.number("residence_rate", residence);
        residence_given = true;
    }
    session.check_unused();

    auto channel = section("channel");
    channel.number("pathloss_exponent", c.channel.pathloss_exponent);
    double ref_db = 10.0 * std::log10(c.channel.reference_gain);
    channel.number("reference_gain_db", ref_db);
    c.channel.reference_gain = std::pow(10.0, ref_db / 10.0);
    channel.number("bandwidth_hz", c.channel.bandwidth);
    channel.count("n_subchannels", c.channel.n_subchannels);
    double psd = -174.0;
    channel.number("noise_psd_dbm_hz", psd);
    c.channel.noise_power = std::pow(10.0, (psd - 30.0) / 10.0) * c.channel.bandwidth;
    channel.number("noise_power_w", c.channel.noise_power);
    channel.check_unused();

    auto utility = section("utility");
    utility.number("price_coefficient", c.utility.price_coefficient);
    utility.number("price_exponent", c.utility.price_exponent);
    utility.number("reward_coefficient", c.utility.reward_coefficient);
    utility.check_unused();

    auto power = section("power");
    double p_min = c.grid.min();
    double p_max = c.grid.max();
    std::size_t n_levels = c.grid.size();
    power.number("p_min_w", p_min);
    power.number("p_max_w", p_max);
    power.count("n_levels", n_levels);
    power.check_unused();
    c.grid = PowerGrid::logarithmic(p_min, p_max, n_levels);

    auto game = section("game");
    game.count("max_iters", c.game.max_iters);
    game.number("epsilon", c.game.epsilon);
    game.check_unused();

    auto handover = section("handover");
    if (auto v = handover.raw("procedure")) {
        c.procedure = parse_procedure(*v);
    }
    handover.number("speed_threshold", c.speed_threshold);
    HandoverMix mix;
    for (auto kind : kAllHandoverKinds) {
        const std::string key = "mix_" + std::string(to_string(kind));
        if (handover.raw(key)) {
            double p = 0.0;
            handover.number(key, p);
            mix[kind] = p;
        }
    }
    if (!mix.empty()) {
        c.mix = mix;
    }
    handover.check_unused();

    auto overhead = section("overhead");
    for (auto k : kAllEntityKinds) {
        double v = c.overhead.processing(k);
        overhead.number("processing_" + std::string(to_string(k)), v);
        c.overhead.set_processing(k, v);
    }
    for (auto l : kAllLinkKinds) {
        double v = c.overhead.link(l);
        overhead.number("link_" + std::string(to_string(l)), v);
        c.overhead.set_link(l, v);
    }
    overhead.check_unused();

    auto sweep = section("sweep");
    if (auto v = sweep.raw("study")) {
        if (*v == "overhead") {
            parsed.study = Study::overhead;
        } else if (*v == "utility") {
            parsed.study = Study::utility;
        } else {
            throw ConfigError("sweep.study: expected overhead or utility, got '" + *v + "'");
        }
    }
    auto param = sweep.raw("param");
    auto values = sweep.raw("values");
    if (param.has_value() != values.has_value()) {
        throw ConfigError("sweep: param and values must be given together");
    }
    if (param) {
        parsed.sweep = Sweep{parse_sweep_param(*param), parse_list(*values, "sweep.values")};
    }
    sweep.check_unused();

    if (residence_given) {
        c.session.residence_rate = residence;
    } else {
        c.topology.validate();
        c.session.residence_rate = fluid_flow_residence_rate(c.mean_speed(), c.topology.fap_radius);
    }
    c.validate();
    return parsed;
}

ParsedConfig parse_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path.string() + "'");
    }
    return parse_config_text(in, path.string());
}

SimConfig parse_config(const std::filesystem::path& path)
{
    return parse_config_file(path).sim;
}

} // namespace fran
