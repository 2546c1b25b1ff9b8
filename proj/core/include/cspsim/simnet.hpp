#pragma once

#include "cspsim/canonical.hpp"
#include "cspsim/rng.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cspsim {

struct Envelope {
    std::uint64_t msg_id = 0;
    std::string src;
    std::string dst;
    std::string type;
    Json body;
    std::int64_t send_tick = 0;
    std::int64_t deliver_tick = 0; // >= send_tick + 1
    std::uint64_t incarnation = 0; // timers only: sender incarnation at schedule time
    bool reliable = false;         // control/timer path: no delay draw, drop, or partition
};

struct Partition {
    std::set<std::string> side_a;
    std::set<std::string> side_b;
    std::int64_t start_tick = 0;
    std::int64_t end_tick = 0; // exclusive
    bool operator==(const Partition&) const = default;
};

struct CrashEvent {
    std::string node_id;
    std::int64_t crash_tick = 0;
    std::optional<std::int64_t> restart_tick; // absent: never restarts
    bool operator==(const CrashEvent&) const = default;
};

struct FaultPlan {
    std::int64_t drop_num = 0; // drop_rate = drop_num / drop_den, in [0, 1)
    std::int64_t drop_den = 1;
    std::vector<Partition> partitions;
    std::vector<CrashEvent> crashes;

    Status validate() const;
    Json to_json() const;
    static Outcome<FaultPlan> from_json(const Json& doc);
    bool operator==(const FaultPlan&) const = default;
};

struct NetConfig {
    std::int64_t max_delay = 3; // network delay drawn uniformly from [1, max_delay]
};

/// Deterministic discrete-event message network. For every network send the
/// generator is consulted in a fixed order (delay draw, then drop draw), so a
/// given (seed, call sequence) always produces the same delivery schedule.
/// Messages to nodes that are crashed at delivery time are lost, not queued.
class SimNet {
  public:
    using TraceSink = std::function<void(const Json&)>;

    SimNet(std::uint64_t seed, NetConfig cfg, FaultPlan plan, TraceSink trace = nullptr);

    std::int64_t now() const { return now_; }
    bool alive(const std::string& node_id) const { return alive_at(node_id, now_); }
    bool alive_at(const std::string& node_id, std::int64_t tick) const;
    bool partitioned(const std::string& a, const std::string& b, std::int64_t tick) const;
    std::uint64_t incarnation(const std::string& node_id) const;

    /// Network path: seeded delay and drop, partition veto at the delivery
    /// tick. Errors with SrcCrashed when the sender is down.
    Status schedule_send(const std::string& src, const std::string& dst, std::string type,
                         Json body);

    /// Reliable self-delivery after `delay` ticks; dropped at delivery if the
    /// node restarted in between (stale incarnation).
    void schedule_timer(const std::string& node_id, std::string type, Json body,
                        std::int64_t delay);

    /// Reliable cross-node path for scenario control events; still lost if the
    /// destination is crashed at delivery.
    void schedule_control(const std::string& src, const std::string& dst, std::string type,
                          Json body, std::int64_t delay = 1);

    /// Crash/restart transitions that occur exactly at `tick`.
    std::vector<CrashEvent> crash_transitions_at(std::int64_t tick) const;
    /// Registers a restart so stale timers from before the crash are ignored.
    void note_restart(const std::string& node_id);

    /// Advances the clock to `tick` and returns the envelopes delivered there,
    /// ordered by (deliver_tick, msg_id). Lost deliveries (crashed dst, stale
    /// incarnation) are filtered here and traced.
    std::vector<Envelope> deliver_at(std::int64_t tick);

    bool has_pending() const { return !queue_.empty(); }
    std::optional<std::int64_t> next_deliver_tick() const;
    std::uint64_t messages_sent() const { return next_msg_id_; }

    void trace_event(const Json& event);

  private:
    void enqueue(Envelope env);

    Rng rng_;
    NetConfig cfg_;
    FaultPlan plan_;
    TraceSink trace_;
    std::int64_t now_ = 0;
    std::uint64_t next_msg_id_ = 0;
    std::map<std::int64_t, std::vector<Envelope>> queue_;
    std::map<std::string, std::uint64_t> incarnations_;
};

} // namespace cspsim
