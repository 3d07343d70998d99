#ifndef FUZZYTS_STRUCTURE_HPP
#define FUZZYTS_STRUCTURE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzyts/clustering.hpp"
#include "fuzzyts/gradients.hpp"
#include "fuzzyts/network.hpp"

namespace fuzzyts {

struct StructureConfig {
    double grow_threshold = 0.0025;    // T_g
    double remove_threshold = 0.0025;  // T_r, must be <= T_g
    double eta = 0.03;
    std::size_t stage1_iterations = 1000;
    std::size_t stage2_iterations = 3000;
    std::size_t episode_max = 100;
    std::size_t n_clusters = 5;
    double upsilon = 0.1;   // antecedent mean uncertainty
    double link_init = 0.1;
    std::uint64_t seed = 0;
    ModelOptions options;
};

// Cluster bookkeeping: every cluster is either available (B^C) or consumed
// by a rule (B^S); the totals are conserved.
struct ClusterBase {
    std::vector<Cluster> clusters;
    std::vector<bool> selected;  // per cluster id

    std::size_t available_count() const;
    std::size_t selected_count() const;
};

struct LearnerState {
    NetworkParams params;  // current accepted network (M may be 0 initially)
    double best_loss = 1e10;  // L_hr, sentinel until the first acceptance
    int status_flag = 0;      // F_s in {0,1,2,3}
    ClusterBase bases;
    std::vector<int> rule_cluster;  // provenance: rule index -> cluster id
};

struct LogEntry {
    std::size_t episode = 0;
    std::string action;  // grow | grow-rejected | remove | remove-rejected | stage2
    std::size_t rules = 0;
    double best_loss = 0.0;
    int status_flag = 0;
};

struct GrowCandidate {
    bool available = false;  // false when B^C is empty
    double loss = 0.0;       // L_g
    int cluster_id = -1;     // C_g
    NetworkParams net;       // Net_g
};

struct RemoveCandidate {
    double loss = 0.0;        // L_r
    std::size_t rule_index = 0;  // R_r
    int cluster_id = -1;      // C_r
    NetworkParams net;        // Net_r
};

// One growing step: trains a hypothetical network per available cluster
// (antecedents fixed, only the new rule's consequents randomized) and
// returns the loss minimizer. Ties break toward the lowest cluster id.
GrowCandidate grow_candidate(const LearnerState& state, const SampleSet& data,
                             const StructureConfig& config,
                             std::size_t episode);

// Accepts when the improvement meets T_g; on acceptance adopts the
// candidate network and moves its cluster from B^C to B^S.
bool try_grow(LearnerState& state, const GrowCandidate& candidate,
              const StructureConfig& config);

// One removing step over the current rules (requires >= 2 rules).
RemoveCandidate remove_candidate(const LearnerState& state,
                                 const SampleSet& data,
                                 const StructureConfig& config,
                                 std::size_t episode);

// Removes when the loss increase stays below T_r; returns whether removed.
bool try_remove(LearnerState& state, const RemoveCandidate& candidate,
                const StructureConfig& config);

// Stage 2: joint SGD over all parameters including antecedents.
double global_optimize(LearnerState& state, const SampleSet& data,
                       const StructureConfig& config, std::size_t episode);

struct LearnResult {
    NetworkParams params;
    std::vector<LogEntry> log;
    double final_loss = 0.0;
    std::vector<int> rule_cluster;
};

// The full two-stage episode loop: FCM pre-stage, rule growing/removing
// with the status-flag machine, stage-2 fine-tuning at F_s = 3, terminating
// when the structure survives a stage2 + stage1 round unchanged (or at
// episode_max). Deterministic for a fixed seed.
LearnResult learn(const SampleSet& train, const StructureConfig& config);

}  // namespace fuzzyts

#endif
