#include "fuzzyts/structure.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <random>
#include <stdexcept>

namespace fuzzyts {

std::size_t ClusterBase::available_count() const {
    std::size_t c = 0;
    for (bool s : selected) c += !s;
    return c;
}
std::size_t ClusterBase::selected_count() const {
    return selected.size() - available_count();
}

static std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b) {
    // splitmix64 over the combined words
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) +
                      0xbf58476d1ce4e5b9ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Appends one rule built from a cluster: antecedents from the cluster
// statistics, consequents randomized, everything else carried over.
static NetworkParams with_new_rule(const NetworkParams& base,
                                   const Cluster& cluster,
                                   const StructureConfig& config,
                                   std::uint64_t seed) {
    NetworkParams net = base;
    const auto mfs = init_rule_antecedent(cluster, config.upsilon);
    net.antecedents.insert(net.antecedents.end(), mfs.begin(), mfs.end());
    ++net.M;

    const std::size_t block = net.consequents.outputs * (net.n + 1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uc(-0.5, 0.5);
    std::uniform_real_distribution<double> us(0.0, 0.1);
    std::vector<double> c(block), s(block);
    for (std::size_t t = 0; t < block; ++t) {
        c[t] = uc(rng);
        s[t] = us(rng);
    }
    net.consequents.c.insert(net.consequents.c.end(), c.begin(), c.end());
    net.consequents.s.insert(net.consequents.s.end(), s.begin(), s.end());
    ++net.consequents.rules;
    return net;
}

GrowCandidate grow_candidate(const LearnerState& state, const SampleSet& data,
                             const StructureConfig& config,
                             std::size_t episode) {
    GrowCandidate best;
    best.loss = std::numeric_limits<double>::infinity();
    for (std::size_t cid = 0; cid < state.bases.clusters.size(); ++cid) {
        if (state.bases.selected[cid]) continue;
        const std::uint64_t cseed = mix_seed(config.seed, episode, cid);
        NetworkParams net =
            with_new_rule(state.params, state.bases.clusters[cid], config, cseed);
        TrainConfig tc;
        tc.eta = config.eta;
        tc.iterations = config.stage1_iterations;
        tc.mode = TrainMode::Stage1Local;
        tc.seed = mix_seed(cseed, 1, 0);
        const double loss = train_epochs(data, net, tc);
        if (loss < best.loss) {
            best.available = true;
            best.loss = loss;
            best.cluster_id = static_cast<int>(cid);
            best.net = std::move(net);
        }
    }
    return best;
}

bool try_grow(LearnerState& state, const GrowCandidate& candidate,
              const StructureConfig& config) {
    if (!candidate.available) return false;
    if (!(state.best_loss - candidate.loss >= config.grow_threshold))
        return false;
    state.params = candidate.net;
    state.best_loss = candidate.loss;
    state.status_flag = 1;
    state.bases.selected[candidate.cluster_id] = true;
    state.rule_cluster.push_back(candidate.cluster_id);
    return true;
}

RemoveCandidate remove_candidate(const LearnerState& state,
                                 const SampleSet& data,
                                 const StructureConfig& config,
                                 std::size_t episode) {
    if (state.params.M < 2)
        throw std::logic_error("remove_candidate requires at least 2 rules");
    RemoveCandidate best;
    best.loss = std::numeric_limits<double>::infinity();
    for (std::size_t h = 0; h < state.params.M; ++h) {
        NetworkParams net = state.params;
        net.remove_rule(h);
        TrainConfig tc;
        tc.eta = config.eta;
        tc.iterations = config.stage1_iterations;
        tc.mode = TrainMode::Stage1Local;
        tc.seed = mix_seed(config.seed, episode, 1000 + h);
        const double loss = train_epochs(data, net, tc);
        if (loss < best.loss) {
            best.loss = loss;
            best.rule_index = h;
            best.cluster_id = state.rule_cluster[h];
            best.net = std::move(net);
        }
    }
    return best;
}

bool try_remove(LearnerState& state, const RemoveCandidate& candidate,
                const StructureConfig& config) {
    if (candidate.loss - state.best_loss >= config.remove_threshold)
        return false;
    state.params = candidate.net;
    state.best_loss = candidate.loss;
    state.status_flag = 2;
    state.bases.selected[candidate.cluster_id] = false;
    state.rule_cluster.erase(state.rule_cluster.begin() +
                             static_cast<long>(candidate.rule_index));
    return true;
}

double global_optimize(LearnerState& state, const SampleSet& data,
                       const StructureConfig& config, std::size_t episode) {
    TrainConfig tc;
    tc.eta = config.eta;
    tc.iterations = config.stage2_iterations;
    tc.mode = TrainMode::Stage2Global;
    tc.seed = mix_seed(config.seed, episode, 2000);
    const double loss = train_epochs(data, state.params, tc);
    state.best_loss = loss;
    return loss;
}

LearnResult learn(const SampleSet& train, const StructureConfig& config) {
    if (!(config.remove_threshold <= config.grow_threshold))
        throw std::invalid_argument("T_r must be <= T_g");
    if (train.X.rows == 0) throw std::invalid_argument("empty training set");

    LearnerState state;
    state.params.options = config.options;
    state.params.resize(train.X.cols, 0, train.Y.cols);
    state.params.co_antecedents = init_co_antecedent(train.X, train.Y.cols);
    state.params.link = config.options.no_link ? 0.0 : config.link_init;

    FcmConfig fc;
    fc.n_clusters = config.n_clusters;
    fc.seed = mix_seed(config.seed, 0, 0xfc);
    FcmResult fr = fcm(train.X, fc);
    state.bases.clusters = std::move(fr.clusters);
    state.bases.selected.assign(state.bases.clusters.size(), false);

    LearnResult result;
    auto log = [&](std::size_t ep, const char* action) {
        result.log.push_back({ep, action, state.params.M, state.best_loss,
                              state.status_flag});
    };

    for (std::size_t ep = 1; ep <= config.episode_max; ++ep) {
        // ---- Stage 1 ----
        const GrowCandidate gc = grow_candidate(state, train, config, ep);
        bool done = false;
        if (try_grow(state, gc, config)) {
            log(ep, "grow");
        } else {
            log(ep, "grow-rejected");
            if (state.params.M <= 1) {
                if (state.status_flag == 3) {
                    done = true;
                } else {
                    state.status_flag = 3;
                    log(ep, "stall");
                }
            } else {
                const RemoveCandidate rc =
                    remove_candidate(state, train, config, ep);
                if (try_remove(state, rc, config)) {
                    log(ep, "remove");
                } else {
                    log(ep, "remove-rejected");
                    if (state.status_flag == 3) {
                        done = true;
                    } else {
                        state.status_flag = 3;
                        log(ep, "stall");
                    }
                }
            }
        }
        if (done) break;
        // ---- Stage 2 ----
        if (state.status_flag == 3) {
            global_optimize(state, train, config, ep);
            log(ep, "stage2");
        }
    }

    result.params = std::move(state.params);
    result.final_loss = state.best_loss;
    result.rule_cluster = std::move(state.rule_cluster);
    return result;
}

}  // namespace fuzzyts
