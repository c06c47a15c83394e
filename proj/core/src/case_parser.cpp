#include <algorithm>
#include <fstream>
#include <sstream>

#include "windatc/network.hpp"

namespace windatc::grid {

PowerNetwork::PowerNetwork(double base_mva, std::vector<Bus> buses, std::vector<Branch> branches,
                           std::vector<Generator> generators)
    : base_mva_(base_mva),
      buses_(std::move(buses)),
      branches_(std::move(branches)),
      generators_(std::move(generators)) {
    if (base_mva_ <= 0.0) throw NetworkError("base MVA must be positive");
    if (buses_.empty()) throw NetworkError("network has no buses");

    for (int i = 0; i < static_cast<int>(buses_.size()); ++i) {
        const Bus& b = buses_[i];
        if (!index_.emplace(b.id, i).second)
            throw NetworkError("duplicate bus id " + std::to_string(b.id));
        if (!(0.0 < b.voltage_min && b.voltage_min <= b.voltage_max))
            throw NetworkError("bus " + std::to_string(b.id) + ": bad voltage bounds");
        (b.area == Area::Sending ? sending_ : receiving_).insert(b.id);
    }

    gen_at_bus_.assign(buses_.size(), -1);
    int slack_gen = -1;
    for (int g = 0; g < static_cast<int>(generators_.size()); ++g) {
        const Generator& gen = generators_[g];
        auto it = index_.find(gen.bus_id);
        if (it == index_.end())
            throw NetworkError("generator references unknown bus " + std::to_string(gen.bus_id));
        if (gen_at_bus_[it->second] != -1)
            throw NetworkError("multiple generators at bus " + std::to_string(gen.bus_id));
        gen_at_bus_[it->second] = g;
        if (gen.p_min > gen.p_max || gen.q_min > gen.q_max)
            throw NetworkError("generator at bus " + std::to_string(gen.bus_id) +
                               ": inverted limits");
        if (gen.is_slack) {
            if (slack_gen != -1)
                throw NetworkError("duplicate slack: buses " +
                                   std::to_string(generators_[slack_gen].bus_id) + " and " +
                                   std::to_string(gen.bus_id));
            slack_gen = g;
            slack_index_ = it->second;
        }
    }
    if (slack_gen == -1) throw NetworkError("no slack generator defined");

    for (int i = 0; i < static_cast<int>(buses_.size()); ++i) {
        Bus& b = buses_[i];
        if (gen_at_bus_[i] >= 0)
            b.kind = generators_[gen_at_bus_[i]].is_slack ? BusKind::Slack : BusKind::PV;
        else
            b.kind = BusKind::PQ;
    }

    for (int k = 0; k < static_cast<int>(branches_.size()); ++k) {
        const Branch& br = branches_[k];
        if (br.from == br.to)
            throw NetworkError("branch " + std::to_string(k) + " is a self-loop at bus " +
                               std::to_string(br.from));
        if (!index_.count(br.from) || !index_.count(br.to))
            throw NetworkError("branch " + std::to_string(br.from) + "-" +
                               std::to_string(br.to) + " references an unknown bus");
        if (br.r == 0.0 && br.x == 0.0)
            throw NetworkError("branch " + std::to_string(br.from) + "-" +
                               std::to_string(br.to) + " has zero impedance");
        if (br.rate_mw < 0.0)
            throw NetworkError("branch " + std::to_string(br.from) + "-" +
                               std::to_string(br.to) + " has a negative rating");
        bool from_sending = sending_.count(br.from) > 0;
        bool to_sending = sending_.count(br.to) > 0;
        if (from_sending != to_sending) {
            TieLine tie;
            tie.branch_index = k;
            tie.aligned = from_sending;
            tie.from_bus = from_sending ? br.from : br.to;
            tie.to_bus = from_sending ? br.to : br.from;
            ties_.push_back(tie);
        }
    }
}

int PowerNetwork::bus_index(int external_id) const {
    auto it = index_.find(external_id);
    if (it == index_.end())
        throw NetworkError("unknown bus id " + std::to_string(external_id));
    return it->second;
}

namespace {

[[noreturn]] void fail(const std::string& path, int lineno, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

PowerNetwork parse_case(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open case file");

    double base_mva = 100.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Generator> gens;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string tag;
        if (!(ss >> tag)) continue;

        auto need = [&](auto& v, const char* what) {
            if (!(ss >> v)) fail(path, lineno, std::string("expected ") + what);
        };

        if (tag == "BASE_MVA") {
            need(base_mva, "base MVA value");
        } else if (tag == "BUS") {
            Bus b;
            std::string area;
            need(b.id, "bus id");
            need(area, "area tag (S or R)");
            need(b.load_p, "active load");
            need(b.load_q, "reactive load");
            need(b.shunt_g, "shunt conductance");
            need(b.shunt_b, "shunt susceptance");
            need(b.voltage_min, "voltage lower bound");
            need(b.voltage_max, "voltage upper bound");
            if (area == "S")
                b.area = Area::Sending;
            else if (area == "R")
                b.area = Area::Receiving;
            else
                fail(path, lineno, "area tag must be S or R, got '" + area + "'");
            buses.push_back(b);
        } else if (tag == "GEN") {
            Generator g;
            need(g.bus_id, "generator bus id");
            need(g.p_set, "dispatch setpoint");
            need(g.v_set, "voltage setpoint");
            need(g.p_min, "active lower bound");
            need(g.p_max, "active upper bound");
            need(g.q_min, "reactive lower bound");
            need(g.q_max, "reactive upper bound");
            std::string flag;
            if (ss >> flag) {
                if (flag == "slack")
                    g.is_slack = true;
                else
                    fail(path, lineno, "unexpected generator flag '" + flag + "'");
            }
            gens.push_back(g);
        } else if (tag == "BRANCH") {
            Branch br;
            need(br.from, "from bus");
            need(br.to, "to bus");
            need(br.r, "series resistance");
            need(br.x, "series reactance");
            need(br.charging, "charging susceptance");
            need(br.tap, "tap ratio");
            need(br.rate_mw, "flow rating");
            if (br.tap <= 0.0) fail(path, lineno, "tap ratio must be positive");
            branches.push_back(br);
        } else {
            fail(path, lineno, "unknown record '" + tag + "'");
        }
    }

    try {
        return PowerNetwork(base_mva, std::move(buses), std::move(branches), std::move(gens));
    } catch (const NetworkError& e) {
        throw NetworkError(path + ": " + e.what());
    }
}

}  // namespace windatc::grid
