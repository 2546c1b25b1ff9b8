#include "cspsim/simnet.hpp"

namespace cspsim {

Status FaultPlan::validate() const {
    if (drop_den <= 0 || drop_num < 0 || drop_num >= drop_den) {
        return err(Errc::plan_invalid, "drop_rate must be a rational in [0,1)");
    }
    for (const auto& p : partitions) {
        if (p.end_tick <= p.start_tick)
            return err(Errc::plan_invalid, "partition window must be non-empty");
        for (const auto& node : p.side_a) {
            if (p.side_b.contains(node))
                return err(Errc::plan_invalid, "node on both partition sides: " + node);
        }
    }
    for (const auto& c : crashes) {
        if (c.restart_tick && *c.restart_tick <= c.crash_tick)
            return err(Errc::plan_invalid, "restart must come after crash: " + c.node_id);
    }
    return Status::ok();
}

Json FaultPlan::to_json() const {
    Json parts = Json::array();
    for (const auto& p : partitions) {
        parts.push_back(Json{{"a", std::vector<std::string>(p.side_a.begin(), p.side_a.end())},
                             {"b", std::vector<std::string>(p.side_b.begin(), p.side_b.end())},
                             {"end", p.end_tick},
                             {"start", p.start_tick}});
    }
    Json crash_docs = Json::array();
    for (const auto& c : crashes) {
        Json doc{{"crash", c.crash_tick}, {"node", c.node_id}};
        if (c.restart_tick) doc["restart"] = *c.restart_tick;
        crash_docs.push_back(doc);
    }
    return Json{{"crashes", crash_docs},
                {"drop_rate", Json{{"den", drop_den}, {"num", drop_num}}},
                {"partitions", parts}};
}

Outcome<FaultPlan> FaultPlan::from_json(const Json& doc) {
    FaultPlan plan;
    try {
        if (doc.contains("drop_rate")) {
            plan.drop_num = doc.at("drop_rate").at("num").get<std::int64_t>();
            plan.drop_den = doc.at("drop_rate").at("den").get<std::int64_t>();
        }
        if (doc.contains("partitions")) {
            for (const auto& p : doc.at("partitions")) {
                Partition part;
                for (const auto& n : p.at("a")) part.side_a.insert(n.get<std::string>());
                for (const auto& n : p.at("b")) part.side_b.insert(n.get<std::string>());
                part.start_tick = p.at("start").get<std::int64_t>();
                part.end_tick = p.at("end").get<std::int64_t>();
                plan.partitions.push_back(std::move(part));
            }
        }
        if (doc.contains("crashes")) {
            for (const auto& c : doc.at("crashes")) {
                CrashEvent ev;
                ev.node_id = c.at("node").get<std::string>();
                ev.crash_tick = c.at("crash").get<std::int64_t>();
                if (c.contains("restart")) ev.restart_tick = c.at("restart").get<std::int64_t>();
                plan.crashes.push_back(std::move(ev));
            }
        }
    } catch (const Json::exception& e) {
        return err(Errc::parse_error, e.what());
    }
    if (auto st = plan.validate(); !st) return st.error();
    return plan;
}

SimNet::SimNet(std::uint64_t seed, NetConfig cfg, FaultPlan plan, TraceSink trace)
    : rng_(Rng::derive(seed, /*stream=*/0xB617)), cfg_(cfg), plan_(std::move(plan)),
      trace_(std::move(trace)) {}

bool SimNet::alive_at(const std::string& node_id, std::int64_t tick) const {
    for (const auto& c : plan_.crashes) {
        if (c.node_id != node_id) continue;
        const std::int64_t up_again =
            c.restart_tick ? *c.restart_tick : std::numeric_limits<std::int64_t>::max();
        if (tick >= c.crash_tick && tick < up_again) return false;
    }
    return true;
}

bool SimNet::partitioned(const std::string& a, const std::string& b, std::int64_t tick) const {
    for (const auto& p : plan_.partitions) {
        if (tick < p.start_tick || tick >= p.end_tick) continue;
        const bool a_in_a = p.side_a.contains(a);
        const bool a_in_b = p.side_b.contains(a);
        const bool b_in_a = p.side_a.contains(b);
        const bool b_in_b = p.side_b.contains(b);
        if ((a_in_a && b_in_b) || (a_in_b && b_in_a)) return true;
    }
    return false;
}

std::uint64_t SimNet::incarnation(const std::string& node_id) const {
    auto it = incarnations_.find(node_id);
    return it == incarnations_.end() ? 0 : it->second;
}

void SimNet::note_restart(const std::string& node_id) {
    incarnations_[node_id] += 1;
}

void SimNet::trace_event(const Json& event) {
    if (trace_) trace_(event);
}

void SimNet::enqueue(Envelope env) {
    queue_[env.deliver_tick].push_back(std::move(env));
}

Status SimNet::schedule_send(const std::string& src, const std::string& dst, std::string type,
                             Json body) {
    if (!alive(src)) {
        return err(Errc::src_crashed, src);
    }
    Envelope env;
    env.msg_id = next_msg_id_++;
    env.src = src;
    env.dst = dst;
    env.type = std::move(type);
    env.body = std::move(body);
    env.send_tick = now_;
    // Fixed draw order: delay first, then the drop decision.
    const std::int64_t delay = 1 + static_cast<std::int64_t>(
                                       rng_.bounded(static_cast<std::uint64_t>(cfg_.max_delay)));
    env.deliver_tick = now_ + delay;
    const bool dropped = rng_.chance(static_cast<std::uint64_t>(plan_.drop_num),
                                     static_cast<std::uint64_t>(plan_.drop_den));
    if (dropped) {
        trace_event(Json{{"ev", "drop"},
                         {"msg_id", env.msg_id},
                         {"src", src},
                         {"dst", dst},
                         {"t", now_},
                         {"type", env.type}});
        return Status::ok();
    }
    if (partitioned(src, dst, env.deliver_tick)) {
        trace_event(Json{{"ev", "partition_block"},
                         {"msg_id", env.msg_id},
                         {"src", src},
                         {"dst", dst},
                         {"t", now_},
                         {"type", env.type}});
        return Status::ok();
    }
    trace_event(Json{{"deliver_t", env.deliver_tick},
                     {"ev", "send"},
                     {"msg_id", env.msg_id},
                     {"src", src},
                     {"dst", dst},
                     {"t", now_},
                     {"type", env.type}});
    enqueue(std::move(env));
    return Status::ok();
}

void SimNet::schedule_timer(const std::string& node_id, std::string type, Json body,
                            std::int64_t delay) {
    Envelope env;
    env.msg_id = next_msg_id_++;
    env.src = node_id;
    env.dst = node_id;
    env.type = std::move(type);
    env.body = std::move(body);
    env.send_tick = now_;
    env.deliver_tick = now_ + std::max<std::int64_t>(1, delay);
    env.incarnation = incarnation(node_id);
    env.reliable = true;
    enqueue(std::move(env));
}

void SimNet::schedule_control(const std::string& src, const std::string& dst, std::string type,
                              Json body, std::int64_t delay) {
    Envelope env;
    env.msg_id = next_msg_id_++;
    env.src = src;
    env.dst = dst;
    env.type = std::move(type);
    env.body = std::move(body);
    env.send_tick = now_;
    env.deliver_tick = now_ + std::max<std::int64_t>(1, delay);
    env.reliable = true;
    trace_event(Json{{"deliver_t", env.deliver_tick},
                     {"ev", "control"},
                     {"msg_id", env.msg_id},
                     {"src", src},
                     {"dst", dst},
                     {"t", now_},
                     {"type", env.type}});
    enqueue(std::move(env));
}

std::vector<CrashEvent> SimNet::crash_transitions_at(std::int64_t tick) const {
    std::vector<CrashEvent> out;
    for (const auto& c : plan_.crashes) {
        if (c.crash_tick == tick || (c.restart_tick && *c.restart_tick == tick)) {
            out.push_back(c);
        }
    }
    return out;
}

std::optional<std::int64_t> SimNet::next_deliver_tick() const {
    if (queue_.empty()) return std::nullopt;
    return queue_.begin()->first;
}

std::vector<Envelope> SimNet::deliver_at(std::int64_t tick) {
    now_ = tick;
    std::vector<Envelope> out;
    auto it = queue_.find(tick);
    if (it == queue_.end()) return out;
    for (auto& env : it->second) {
        if (!alive_at(env.dst, tick)) {
            trace_event(Json{{"ev", "lost_crashed"},
                             {"msg_id", env.msg_id},
                             {"dst", env.dst},
                             {"t", tick},
                             {"type", env.type}});
            continue;
        }
        if (env.reliable && env.src == env.dst && env.incarnation != incarnation(env.dst)) {
            // Timer armed before a crash; the restarted node re-arms its own.
            continue;
        }
        out.push_back(std::move(env));
    }
    queue_.erase(it);
    return out;
}

} // namespace cspsim
