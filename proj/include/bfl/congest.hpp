#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfl/instance.hpp"
#include "bfl/rng.hpp"

namespace bfl {

enum class MsgKind : uint8_t {
  held_count,      // client -> x1: distinct messages currently held
  ctrl_continue,   // x1 -> clients, then y1 -> facilities
  ctrl_break,      // a = spread start (to clients) , b = total remaining
  ctrl_abort,      // iteration cap hit
  hash_shift,      // facility -> clients: a = shift in 1..n_f
  edge,            // a = u, b = v with u < v
  facility_count,  // facility -> y1: deduped held count
  spread_index,    // y1 -> facility: a = prefix sum mod n_c
  witness_count,   // client -> x1: witnessed active pairs
  ctrl_run,        // x1 -> clients, then y1 -> facilities: loop continues
  ctrl_done,       // loop exit
  candidacy,       // facility -> clients: a = 1 joins
  dominated,       // client -> facility: witnessed edge to a candidate
  removed,         // facility -> clients
  radius,          // facility -> clients: a = numerator, b = denominator
  open_vote,       // client -> facility
  open_status,     // facility -> clients: opened
};

const char* msg_kind_name(MsgKind k);

struct Message {
  int64_t a = 0;
  int64_t b = 0;
  MsgKind kind{};
};

// Receiver/sender indices always refer to the opposite side of the bipartition.
struct Send {
  int to;
  Message msg;
};

struct Received {
  int from;
  Message msg;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NodeContext {
  int64_t round;
  Rng* rng;
  int n_f;
  int n_c;
};

class NodeProgram {
 public:
  virtual ~NodeProgram() = default;
  virtual void step(NodeContext& ctx, const std::vector<Received>& inbox,
                    std::vector<Send>& out) = 0;
  virtual bool halted() const = 0;
};

enum class Side : uint8_t { facility, client };

// Synchronous bipartite network: one message per directed (facility, client)
// pair per round, delivered at the start of the next round. Inboxes arrive
// sorted by sender id. Payload scalars are capped by scalar_bound; any
// violation is a hard SimulationError.
class Network {
 public:
  Network(int n_f, int n_c, uint64_t seed, int64_t scalar_bound,
          std::string* transcript = nullptr);

  static int64_t default_scalar_bound(const Instance& inst);
  static int64_t default_scalar_bound(int n_f, int n_c, int64_t f_max, int64_t d_max);

  void install_facility(int i, std::unique_ptr<NodeProgram> p);
  void install_client(int j, std::unique_ptr<NodeProgram> p);

  void run_round();
  // Runs until pred(*this) holds; throws SimulationError past round_cap.
  int64_t run_until(const std::function<bool(const Network&)>& pred, int64_t round_cap);
  int64_t run_until_halted(int64_t round_cap);

  bool all_halted() const;
  int64_t round() const { return round_; }
  int n_f() const { return n_f_; }
  int n_c() const { return n_c_; }
  int64_t scalar_bound() const { return scalar_bound_; }

  const std::vector<Received>& facility_inbox(int i) const { return f_inbox_[i]; }
  const std::vector<Received>& client_inbox(int j) const { return c_inbox_[j]; }
  NodeProgram* facility_program(int i) { return f_prog_[i].get(); }
  NodeProgram* client_program(int j) { return c_prog_[j].get(); }

  uint64_t node_random_int(Side side, int index, uint64_t range);

 private:
  // Validated sends are staged flat per round and scattered into the
  // per-receiver inboxes at round end; the stable scatter keeps sender order.
  struct Delivery {
    int32_t to;
    int32_t from;
    Message msg;
  };

  void validate_and_deliver(Side sender_side, int sender, std::vector<Send>& out,
                            std::vector<uint8_t>& seen);
  void scatter(std::vector<Delivery>& staged, std::vector<std::vector<Received>>& next, int n);

  int n_f_, n_c_;
  int64_t scalar_bound_;
  int64_t round_ = 0;
  std::vector<std::unique_ptr<NodeProgram>> f_prog_, c_prog_;
  std::vector<Rng> f_rng_, c_rng_;
  std::vector<std::vector<Received>> f_inbox_, c_inbox_;  // delivered, read next round
  std::vector<std::vector<Received>> f_next_, c_next_;
  std::vector<Delivery> f_staged_, c_staged_;
  std::vector<int64_t> scatter_cnt_;
  std::string* transcript_;
};

}  // namespace bfl
