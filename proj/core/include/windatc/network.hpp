#pragma once

#include <Eigen/Dense>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace windatc::grid {

enum class BusKind { Slack, PV, PQ };
enum class Area { Sending, Receiving };

struct Bus {
    int id = 0;  // external id from the case file
    BusKind kind = BusKind::PQ;
    Area area = Area::Sending;
    double load_p = 0.0;  // MW
    double load_q = 0.0;  // MVAr
    double shunt_g = 0.0;  // MW at U=1
    double shunt_b = 0.0;  // MVAr at U=1
    double voltage_min = 0.94;
    double voltage_max = 1.06;
};

struct Branch {
    int from = 0;  // external bus ids
    int to = 0;
    double r = 0.0;      // series resistance, pu
    double x = 0.0;      // series reactance, pu
    double charging = 0.0;  // total line charging susceptance, pu
    double tap = 1.0;    // off-nominal ratio on the from side
    double rate_mw = 0.0;  // thermal limit; flow bounds are [-rate, rate]
};

struct Generator {
    int bus_id = 0;
    double p_set = 0.0;  // MW, base-case dispatch at b = 1
    double v_set = 1.0;  // pu
    double p_min = 0.0, p_max = 0.0;   // MW
    double q_min = 0.0, q_max = 0.0;   // MVAr
    bool is_slack = false;
};

struct TieLine {
    int branch_index = 0;  // into PowerNetwork::branches
    int from_bus = 0;      // sending-area endpoint (external id)
    int to_bus = 0;        // receiving-area endpoint
    bool aligned = true;   // true if branch.from is the sending-area endpoint
};

/// Semantic problem in a parsed case (dangling bus, duplicate slack, ...).
class NetworkError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Immutable validated network. Buses are addressed internally by dense
/// indices 0..n-1 in file order; external ids map through bus_index().
class PowerNetwork {
public:
    PowerNetwork(double base_mva, std::vector<Bus> buses, std::vector<Branch> branches,
                 std::vector<Generator> generators);

    double base_mva() const { return base_mva_; }
    const std::vector<Bus>& buses() const { return buses_; }
    const std::vector<Branch>& branches() const { return branches_; }
    const std::vector<Generator>& generators() const { return generators_; }
    const std::vector<TieLine>& tie_lines() const { return ties_; }

    int n_buses() const { return static_cast<int>(buses_.size()); }
    int bus_index(int external_id) const;
    bool has_bus(int external_id) const { return index_.count(external_id) > 0; }
    int slack_index() const { return slack_index_; }

    /// Generator index at an internal bus index, or -1.
    int generator_at(int bus_idx) const { return gen_at_bus_[bus_idx]; }

    const std::set<int>& sending_buses() const { return sending_; }
    const std::set<int>& receiving_buses() const { return receiving_; }

private:
    double base_mva_;
    std::vector<Bus> buses_;
    std::vector<Branch> branches_;
    std::vector<Generator> generators_;
    std::vector<TieLine> ties_;
    std::map<int, int> index_;
    std::vector<int> gen_at_bus_;
    std::set<int> sending_, receiving_;  // external ids
    int slack_index_ = -1;
};

/// Syntax problem in a case file; message carries path and line number.
class ParseError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse the documented plain-text case format (BASE_MVA / BUS / GEN /
/// BRANCH records, '#' comments).
PowerNetwork parse_case(const std::string& path);

}  // namespace windatc::grid
