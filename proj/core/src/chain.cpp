#include "chaosbreak/chain.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <optional>
#include <string>

#include "chaosbreak/errors.hpp"
#include "chaosbreak/keyrec.hpp"
#include "chaosbreak/parallel.hpp"

namespace chaosbreak {

namespace {

using Set = std::vector<std::uint32_t>; // sorted, 1-based positions

bool member(const Set& s, std::uint32_t x) {
    return std::binary_search(s.begin(), s.end(), x);
}

Set intersect(const Set& a, const Set& b) {
    Set out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Set subtract(const Set& a, const Set& b) {
    Set out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool subset(const Set& a, const Set& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

AssociationTable AssociationTable::from_cipher_sets(std::size_t length,
                                                    std::vector<Set> c2p) {
    AssociationTable t;
    t.length = length;
    t.cipher_to_plain = std::move(c2p);
    t.plain_to_cipher.assign(length, {});
    for (std::size_t i = 0; i < length; ++i) {
        auto& s = t.cipher_to_plain[i];
        std::sort(s.begin(), s.end());
        for (std::uint32_t j : s) t.plain_to_cipher[j - 1].push_back(static_cast<std::uint32_t>(i + 1));
    }
    return t;
}

bool AssociationTable::transpose_consistent() const {
    if (cipher_to_plain.size() != length || plain_to_cipher.size() != length) return false;
    std::size_t forward = 0, backward = 0;
    for (std::size_t i = 0; i < length; ++i) {
        forward += cipher_to_plain[i].size();
        for (std::uint32_t j : cipher_to_plain[i])
            if (!member(plain_to_cipher[j - 1], static_cast<std::uint32_t>(i + 1))) return false;
    }
    for (const auto& s : plain_to_cipher) backward += s.size();
    return forward == backward;
}

std::size_t AssociationTable::max_plain_set_size() const {
    std::size_t m = 0;
    for (const auto& s : plain_to_cipher) m = std::max(m, s.size());
    return m;
}

double AssociationTable::mean_cipher_set_size() const {
    std::size_t total = 0;
    for (const auto& s : cipher_to_plain) total += s.size();
    return length ? static_cast<double>(total) / static_cast<double>(length) : 0.0;
}

ExtractionResult extract_associations(AttackOracle& oracle, std::uint8_t base_value,
                                      std::uint8_t impulse_value) {
    if (base_value == impulse_value)
        throw std::invalid_argument("extract_associations: probe values must differ");
    if (((impulse_value - base_value) & 1) == 0)
        throw std::invalid_argument(
            "extract_associations: impulse differential must be odd so doubled "
            "perturbation paths stay nonzero mod 256");

    const std::size_t n = oracle.length();
    const std::size_t w = oracle.width();
    const std::size_t h = oracle.height();

    ExtractionResult result;
    result.base_value = base_value;
    result.impulse_value = impulse_value;

    const ByteImage base = ByteImage::filled(w, h, base_value);
    result.base_plain = oracle.query_decrypt(base).data();
    result.impulse_plain.assign(n, {});

    parallel_for(n, [&](std::size_t idx) {
        ByteImage probe = base;
        probe.pixel(idx + 1) = impulse_value;
        result.impulse_plain[idx] = oracle.query_decrypt(probe).data();
    });

    std::vector<Set> c2p(n);
    for (std::size_t i = 0; i < n; ++i) {
        Set& set = c2p[i];
        for (std::size_t j = 0; j < n; ++j)
            if (result.impulse_plain[i][j] != result.base_plain[j])
                set.push_back(static_cast<std::uint32_t>(j + 1));
        if (set.empty())
            throw AttackError("extract_associations: no plaintext response at ciphertext "
                              "position " + std::to_string(i + 1) +
                              " (diffusion not sensitive)");
    }
    result.table = AssociationTable::from_cipher_sets(n, std::move(c2p));
    return result;
}

namespace {

// ---------------------------------------------------------------------------
// Pass 1: order nodes so that every node's set is exactly the union of its own
// link block (<= max_block elements) and the previous node's block. This is the
// generating structure of the association sets; the published linking rules are
// its cardinality shadows.
// ---------------------------------------------------------------------------
class BlockChainSearch {
public:
    using Callback = std::function<bool(const std::vector<std::uint32_t>& order,
                                        const std::vector<Set>& blocks)>;

    BlockChainSearch(const std::vector<Set>& sets, std::size_t universe, int max_block,
                     std::uint64_t budget, ChainSearchStats& stats)
        : sets_(sets), max_block_(max_block), budget_(budget), stats_(stats) {
        contains_.assign(universe + 1, {});
        for (std::size_t q = 0; q < sets_.size(); ++q)
            for (std::uint32_t e : sets_[q]) contains_[e].push_back(static_cast<std::uint32_t>(q));
        used_.assign(sets_.size(), false);
        elem_blocks_.assign(universe + 1, 0);
    }

    bool run(const Callback& cb) {
        const std::size_t n = sets_.size();
        if (n == 0) return false;
        std::vector<std::uint32_t> heads(n);
        for (std::size_t q = 0; q < n; ++q) heads[q] = static_cast<std::uint32_t>(q);
        std::stable_sort(heads.begin(), heads.end(), [&](std::uint32_t a, std::uint32_t b) {
            return sets_[a].size() < sets_[b].size();
        });
        for (std::uint32_t head : heads) {
            if (sets_[head].size() > static_cast<std::size_t>(max_block_)) break;
            if (!place(head, sets_[head], cb)) continue;
            return true;
        }
        return false;
    }

    bool budget_exhausted() const { return stats_.steps > budget_; }

private:
    bool place(std::uint32_t node, const Set& block, const Callback& cb) {
        for (std::uint32_t e : block)
            if (elem_blocks_[e] >= 2) return false;
        used_[node] = true;
        order_.push_back(node);
        blocks_.push_back(block);
        for (std::uint32_t e : block) ++elem_blocks_[e];

        const bool done = extend(cb);

        for (std::uint32_t e : block) --elem_blocks_[e];
        blocks_.pop_back();
        order_.pop_back();
        used_[node] = false;
        if (!done) ++stats_.backtracks;
        return done;
    }

    bool extend(const Callback& cb) {
        if (order_.size() == sets_.size()) return cb(order_, blocks_);
        if (++stats_.steps > budget_) return false;

        const Set prev = blocks_.back(); // by value: blocks_ reallocates in recursion
        // Successor must contain the whole previous block.
        for (std::uint32_t q : contains_[prev[0]]) {
            if (used_[q]) continue;
            const Set& s = sets_[q];
            bool ok = true;
            for (std::size_t i = 1; i < prev.size(); ++i)
                if (!member(s, prev[i])) { ok = false; break; }
            if (!ok) continue;

            const Set fresh = subtract(s, prev);
            if (fresh.size() > static_cast<std::size_t>(max_block_)) continue;

            // Link block = fresh elements plus optionally re-used previous ones
            // (collision cases); smallest blocks first.
            const std::size_t extra_limit = static_cast<std::size_t>(max_block_) - fresh.size();
            for (std::uint32_t mask = 0; mask < (1u << prev.size()); ++mask) {
                const auto bits = static_cast<std::size_t>(std::popcount(mask));
                if (bits > extra_limit) continue;
                Set block = fresh;
                for (std::size_t i = 0; i < prev.size(); ++i)
                    if (mask & (1u << i)) block.push_back(prev[i]);
                if (block.empty()) continue;
                std::sort(block.begin(), block.end());
                if (place(q, block, cb)) return true;
                if (budget_exhausted()) return false;
            }
        }
        return false;
    }

    const std::vector<Set>& sets_;
    const int max_block_;
    const std::uint64_t budget_;
    ChainSearchStats& stats_;
    std::vector<std::vector<std::uint32_t>> contains_;
    std::vector<bool> used_;
    std::vector<std::uint8_t> elem_blocks_;
    std::vector<std::uint32_t> order_;
    std::vector<Set> blocks_;
};

// ---------------------------------------------------------------------------
// Pass 2: nodes are 2-element windows {e(x-1), e(x)} over a hidden element
// sequence (singleton at the head). `allowed`/`required` bound each node's true
// window; `serial_sets`, when given, must be exactly regenerated by the
// reconstructed windows of serially adjacent nodes.
// ---------------------------------------------------------------------------
class WindowChainSearch {
public:
    using Callback = std::function<bool(const std::vector<std::uint32_t>& order,
                                        const std::vector<std::uint32_t>& elements)>;

    WindowChainSearch(const std::vector<Set>& allowed, const std::vector<Set>& required,
                      std::size_t universe, const std::vector<Set>* serial_sets,
                      std::uint64_t budget, ChainSearchStats& stats)
        : allowed_(allowed), required_(required), serial_sets_(serial_sets), budget_(budget),
          stats_(stats) {
        contains_.assign(universe + 1, {});
        for (std::size_t q = 0; q < allowed_.size(); ++q)
            for (std::uint32_t e : allowed_[q]) contains_[e].push_back(static_cast<std::uint32_t>(q));
        used_node_.assign(allowed_.size(), false);
        used_elem_.assign(universe + 1, false);
    }

    bool run(const Callback& cb) {
        const std::size_t n = allowed_.size();
        if (n == 0) return false;
        std::vector<std::uint32_t> heads(n);
        for (std::size_t q = 0; q < n; ++q) heads[q] = static_cast<std::uint32_t>(q);
        std::stable_sort(heads.begin(), heads.end(), [&](std::uint32_t a, std::uint32_t b) {
            return allowed_[a].size() < allowed_[b].size();
        });
        for (std::uint32_t head : heads) {
            if (required_[head].size() > 1) continue;
            if (!required_[head].empty()) {
                if (place(head, required_[head][0], cb)) return true;
            } else {
                for (std::uint32_t e : allowed_[head])
                    if (place(head, e, cb)) return true;
            }
            if (stats_.steps > budget_) return false;
        }
        return false;
    }

private:
    bool place(std::uint32_t node, std::uint32_t elem, const Callback& cb) {
        if (used_elem_[elem]) return false;
        used_node_[node] = true;
        used_elem_[elem] = true;
        order_.push_back(node);
        elems_.push_back(elem);

        const bool done = extend(cb);

        elems_.pop_back();
        order_.pop_back();
        used_elem_[elem] = false;
        used_node_[node] = false;
        if (!done) ++stats_.backtracks;
        return done;
    }

    bool extend(const Callback& cb) {
        if (order_.size() == allowed_.size()) return complete(cb);
        if (++stats_.steps > budget_) return false;

        const std::uint32_t e_prev = elems_.back();
        for (std::uint32_t q : contains_[e_prev]) {
            if (used_node_[q]) continue;
            // The node's window is {e_prev, e_next}; everything it requires beyond
            // e_prev must fit into the single free slot.
            std::uint32_t forced = 0;
            bool viable = true;
            for (std::uint32_t r : required_[q]) {
                if (r == e_prev) continue;
                if (forced != 0 && forced != r) { viable = false; break; }
                forced = r;
            }
            if (!viable) continue;

            if (forced != 0) {
                if (forced != e_prev && member(allowed_[q], forced) &&
                    place(q, forced, cb))
                    return true;
            } else {
                for (std::uint32_t e : allowed_[q]) {
                    if (e == e_prev) continue;
                    if (place(q, e, cb)) return true;
                    if (stats_.steps > budget_) return false;
                }
            }
            if (stats_.steps > budget_) return false;
        }
        return false;
    }

    bool complete(const Callback& cb) {
        if (serial_sets_) {
            const std::size_t n = order_.size();
            std::vector<Set> window(n);
            for (std::size_t x = 0; x < n; ++x) {
                Set w{elems_[x]};
                if (x > 0 && elems_[x - 1] != elems_[x]) w.push_back(elems_[x - 1]);
                std::sort(w.begin(), w.end());
                window[order_[x]] = std::move(w);
            }
            for (std::size_t s = 0; s < n; ++s) {
                Set expect = window[s];
                if (s > 0) {
                    Set merged;
                    std::set_union(expect.begin(), expect.end(), window[s - 1].begin(),
                                   window[s - 1].end(), std::back_inserter(merged));
                    expect = std::move(merged);
                }
                if (expect != (*serial_sets_)[s]) return false;
            }
        }
        return cb(order_, elems_);
    }

    const std::vector<Set>& allowed_;
    const std::vector<Set>& required_;
    const std::vector<Set>* serial_sets_;
    const std::uint64_t budget_;
    ChainSearchStats& stats_;
    std::vector<std::vector<std::uint32_t>> contains_;
    std::vector<bool> used_node_;
    std::vector<bool> used_elem_;
    std::vector<std::uint32_t> order_;
    std::vector<std::uint32_t> elems_;
};

struct WindowBounds {
    std::vector<Set> allowed;
    std::vector<Set> required;
    bool ok = false;
};

// Bounds on the true 2-element windows of a serially indexed table
// U[s] = D[s] u D[s-1]: D[s] is inside the intersection of U[s] and U[s+1], an
// element of U not explainable by a neighbour is required, |D| <= 2, and every
// element sits in at most two windows. Iterated to a fixpoint.
WindowBounds derive_window_bounds(const std::vector<Set>& u) {
    const std::size_t n = u.size();
    WindowBounds b;
    b.allowed.resize(n);
    for (std::size_t s = 0; s + 1 < n; ++s) b.allowed[s] = intersect(u[s], u[s + 1]);
    if (n > 0) b.allowed[n - 1] = u[n - 1];
    b.required.assign(n, {});

    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            Set req;
            for (std::uint32_t x : u[s])
                if (s == 0 || !member(b.allowed[s - 1], x)) req.push_back(x);
            if (s + 1 < n)
                for (std::uint32_t x : u[s + 1])
                    if (!member(b.allowed[s + 1], x)) req.push_back(x);
            std::sort(req.begin(), req.end());
            req.erase(std::unique(req.begin(), req.end()), req.end());
            if (req.size() > 2 || !subset(req, b.allowed[s])) return b; // ok = false
            if (req.size() == 2 && b.allowed[s] != req) {
                b.allowed[s] = req;
                changed = true;
            }
            if (req != b.required[s]) {
                b.required[s] = std::move(req);
                changed = true;
            }
            if (b.allowed[s].empty()) return b;
        }
        // An element required by two windows belongs to no other.
        std::vector<std::uint8_t> req_count;
        std::size_t universe = 0;
        for (const auto& s : u)
            for (std::uint32_t x : s) universe = std::max<std::size_t>(universe, x);
        req_count.assign(universe + 1, 0);
        for (const auto& r : b.required)
            for (std::uint32_t x : r) {
                if (++req_count[x] > 2) return b;
            }
        for (std::size_t s = 0; s < n; ++s) {
            Set kept;
            for (std::uint32_t x : b.allowed[s])
                if (req_count[x] < 2 || member(b.required[s], x)) kept.push_back(x);
            if (kept.size() != b.allowed[s].size()) {
                b.allowed[s] = std::move(kept);
                changed = true;
                if (b.allowed[s].empty()) return b;
            }
        }
    }
    b.ok = true;
    return b;
}

} // namespace

Chain build_chain(const AssociationTable& table, ChainSearchStats* stats) {
    ChainSearchStats local;
    ChainSearchStats& st = stats ? *stats : local;
    const std::size_t n = table.length;
    if (n == 0) throw NoChainError("build_chain: empty table");
    if (n == 1) return Chain{{1}, {table.plain_to_cipher[0]}};

    const std::size_t max_size = table.max_plain_set_size();
    if (max_size > 4)
        throw NoChainError("build_chain: association sets of size " + std::to_string(max_size) +
                           " exceed the single-tap bound of 4 (target may be "
                           "plaintext-delayed or use deeper memory)");

    Chain chain;
    bool found = false;
    auto capture = [&](const std::vector<std::uint32_t>& order, const std::vector<Set>& blocks) {
        chain.node_order.resize(order.size());
        for (std::size_t s = 0; s < order.size(); ++s) chain.node_order[s] = order[s] + 1;
        chain.link_blocks = blocks;
        found = true;
        return true;
    };

    if (max_size <= 2) {
        // Exact singleton-block windows.
        WindowChainSearch search(table.plain_to_cipher, table.plain_to_cipher, n, nullptr,
                                 50'000'000, st);
        search.run([&](const std::vector<std::uint32_t>& order,
                       const std::vector<std::uint32_t>& elems) {
            std::vector<Set> blocks(elems.size());
            for (std::size_t x = 0; x < elems.size(); ++x) blocks[x] = {elems[x]};
            return capture(order, blocks);
        });
    } else {
        BlockChainSearch search(table.plain_to_cipher, n, 2, 50'000'000, st);
        search.run(capture);
    }
    ++st.chains_tried;
    if (!found)
        throw NoChainError("build_chain: no complete chain satisfies the linking rules "
                           "(target may be plaintext-delayed or use deeper memory)");
    return chain;
}

Permutation recover_outer_permutation(const Chain& chain) {
    const std::size_t n = chain.size();
    std::vector<std::uint32_t> map(n, 0);
    for (std::size_t s = 1; s <= n; ++s) map[chain.node_order[s - 1] - 1] = static_cast<std::uint32_t>(s);
    return Permutation(std::move(map));
}

AssociationTable reindex_by_serial(const AssociationTable& table, const Permutation& outer) {
    if (outer.size() != table.length)
        throw DimensionError("reindex_by_serial: permutation size != table length");
    const Permutation to_plain = outer.inverted(); // serial -> plaintext position
    std::vector<Set> serial_sets(table.length);
    for (std::size_t s = 1; s <= table.length; ++s)
        serial_sets[s - 1] = table.plain_to_cipher[to_plain.at(s) - 1];

    AssociationTable out;
    out.length = table.length;
    out.plain_to_cipher = std::move(serial_sets);
    out.cipher_to_plain.assign(table.length, {});
    for (std::size_t s = 0; s < table.length; ++s)
        for (std::uint32_t c : out.plain_to_cipher[s])
            out.cipher_to_plain[c - 1].push_back(static_cast<std::uint32_t>(s + 1));
    return out;
}

AssociationTable reduce_layer(const AssociationTable& serial_table) {
    const std::size_t n = serial_table.length;
    std::vector<Set> reduced(n);
    for (std::size_t s = 0; s + 1 < n; ++s)
        reduced[s] = intersect(serial_table.plain_to_cipher[s], serial_table.plain_to_cipher[s + 1]);
    if (n >= 2) reduced[n - 1] = subtract(serial_table.plain_to_cipher[n - 1], reduced[n - 2]);
    else if (n == 1) reduced[0] = serial_table.plain_to_cipher[0];

    AssociationTable out;
    out.length = n;
    out.plain_to_cipher = std::move(reduced);
    out.cipher_to_plain.assign(n, {});
    for (std::size_t s = 0; s < n; ++s)
        for (std::uint32_t c : out.plain_to_cipher[s])
            out.cipher_to_plain[c - 1].push_back(static_cast<std::uint32_t>(s + 1));
    return out;
}

AssociationTable reduce_layer(const AssociationTable& table, const Permutation& recovered) {
    return reduce_layer(reindex_by_serial(table, recovered));
}

LayerPair solve_window_layer(const AssociationTable& serial_table, ChainSearchStats* stats) {
    ChainSearchStats local;
    ChainSearchStats& st = stats ? *stats : local;
    const auto& u = serial_table.plain_to_cipher;
    const WindowBounds bounds = derive_window_bounds(u);
    if (!bounds.ok)
        throw NoChainError("solve_window_layer: window bounds are inconsistent");

    LayerPair result;
    bool found = false;
    WindowChainSearch search(bounds.allowed, bounds.required, serial_table.length, &u,
                             50'000'000, st);
    search.run([&](const std::vector<std::uint32_t>& order,
                   const std::vector<std::uint32_t>& elems) {
        std::vector<std::uint32_t> order_map(order.size()), elem_map(elems.size());
        for (std::size_t x = 0; x < order.size(); ++x) order_map[x] = order[x] + 1;
        for (std::size_t x = 0; x < elems.size(); ++x) elem_map[x] = elems[x];
        result.order_map = Permutation(std::move(order_map));
        result.element_map = Permutation(std::move(elem_map));
        found = true;
        return true;
    });
    ++st.chains_tried;
    if (!found)
        throw NoChainError("solve_window_layer: no consistent window ordering");
    return result;
}

const Permutation* ChainAttackResult::layer(const std::string& role) const {
    for (const auto& l : layers)
        if (l.role == role) return &l.perm;
    return nullptr;
}

namespace {

// Rebuilds the i-th chosen ciphertext of the extraction (0 = monochrome base).
std::vector<std::uint8_t> extraction_cipher(const ExtractionResult& ex, std::size_t n,
                                            std::size_t i) {
    std::vector<std::uint8_t> c(n, ex.base_value);
    if (i >= 1) c[i - 1] = ex.impulse_value;
    return c;
}

bool matches_all_pairs(const CipherPipeline& candidate, const ExtractionResult& ex) {
    const std::size_t n = candidate.length();
    if (candidate.decrypt(extraction_cipher(ex, n, 0)) != ex.base_plain) return false;
    for (std::size_t i = 1; i <= n; ++i)
        if (candidate.decrypt(extraction_cipher(ex, n, i)) != ex.impulse_plain[i - 1])
            return false;
    return true;
}

} // namespace

ChainAttackResult chain_attack(AttackOracle& oracle, const StagePattern& pattern,
                               std::size_t width, std::size_t height,
                               const ChainAttackOptions& opts) {
    const std::size_t n = width * height;
    if (n != oracle.length())
        throw DimensionError("chain_attack: dimensions do not match the oracle");
    if (pattern.diffusion_count() < 1 || pattern.diffusion_count() > 2)
        throw AttackError("chain_attack: unsupported pattern \"" + pattern.tokens() +
                          "\" (one or two single-tap diffusions supported)");
    if (n < 2) throw DimensionError("chain_attack: need at least 2 positions");

    const std::uint64_t dec0 = oracle.decrypt_queries();
    const ExtractionResult ex =
        extract_associations(oracle, opts.base_value, opts.impulse_value);

    ChainAttackResult result;
    result.decrypt_queries = oracle.decrypt_queries() - dec0;

    std::vector<KnownPair> keyrec_pairs;
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{2}}) {
        KnownPair p;
        p.cipher = extraction_cipher(ex, n, i);
        p.plain = i == 0 ? ex.base_plain : ex.impulse_plain[i - 1];
        keyrec_pairs.push_back(std::move(p));
    }

    bool success = false;
    std::uint32_t candidates_seen = 0;

    // Assembles layers for a window-pass solution, runs key recovery and checks the
    // candidate against every stored pair. Returns true to stop the enumeration.
    auto try_candidate = [&](std::vector<RecoveredLayer> layers) {
        ++candidates_seen;
        try {
            RecoveredKeys keys = recover_diffusion_keys(pattern, layers, keyrec_pairs);
            CipherPipeline candidate =
                assemble_pipeline(pattern, layers, keys.outer_key, keys.inner_key, n);
            if (!matches_all_pairs(candidate, ex)) return false;
            result.layers = std::move(layers);
            result.outer_key = std::move(keys.outer_key);
            result.inner_key = std::move(keys.inner_key);
            result.keys_gauge_free = keys.gauge_free;
            result.assembled = std::move(candidate);
            success = true;
            return true;
        } catch (const AttackError&) {
            return false;
        }
    };

    auto window_pass = [&](const std::vector<Set>& serial_sets,
                           const std::optional<Permutation>& outer) -> bool {
        const WindowBounds bounds = derive_window_bounds(serial_sets);
        if (!bounds.ok) return false;
        WindowChainSearch search(bounds.allowed, bounds.required, n, &serial_sets,
                                 opts.step_budget, result.stats);
        return search.run([&](const std::vector<std::uint32_t>& order,
                              const std::vector<std::uint32_t>& elems) {
            if (candidates_seen >= opts.max_candidates) return true; // give up
            std::vector<std::uint32_t> order_map(n), elem_map(n);
            for (std::size_t x = 0; x < n; ++x) order_map[x] = order[x] + 1;
            for (std::size_t x = 0; x < n; ++x) elem_map[x] = elems[x];
            Permutation mid(std::move(order_map));
            Permutation post(std::move(elem_map));
            if (!pattern.trailing_permutation() && !post.is_identity()) return false;

            std::vector<RecoveredLayer> layers;
            if (outer) layers.push_back({"pre_inverse", *outer});
            layers.push_back({"mid", std::move(mid)});
            if (pattern.trailing_permutation())
                layers.push_back({"post_inverse", std::move(post)});
            return try_candidate(std::move(layers));
        });
    };

    if (pattern.diffusion_count() == 1) {
        // Single diffusion: the raw sets are exact windows; one pass recovers both
        // outer maps at once.
        WindowChainSearch search(ex.table.plain_to_cipher, ex.table.plain_to_cipher, n,
                                 nullptr, opts.step_budget, result.stats);
        search.run([&](const std::vector<std::uint32_t>& order,
                       const std::vector<std::uint32_t>& elems) {
            if (candidates_seen >= opts.max_candidates) return true;
            std::vector<std::uint32_t> order_map(n), elem_map(n);
            for (std::size_t x = 0; x < n; ++x) order_map[x] = order[x] + 1;
            for (std::size_t x = 0; x < n; ++x) elem_map[x] = elems[x];
            Permutation fwd(std::move(order_map)); // chain position -> plaintext position
            Permutation post(std::move(elem_map));
            if (!pattern.leading_permutation() && !fwd.is_identity()) return false;
            if (!pattern.trailing_permutation() && !post.is_identity()) return false;

            std::vector<RecoveredLayer> layers;
            if (pattern.leading_permutation())
                layers.push_back({"pre_inverse", fwd.inverted()});
            if (pattern.trailing_permutation())
                layers.push_back({"post_inverse", std::move(post)});
            return try_candidate(std::move(layers));
        });
    } else if (!pattern.leading_permutation()) {
        // Plaintext positions are already serial.
        window_pass(ex.table.plain_to_cipher, std::nullopt);
    } else {
        // Two diffusions behind an outer permutation: find the outer chain first,
        // then peel the reduced layer.
        if (ex.table.max_plain_set_size() > 4)
            throw NoChainError("chain_attack: association sets exceed the single-tap bound "
                               "of 4 (target may be plaintext-delayed or use deeper memory)");
        BlockChainSearch search(ex.table.plain_to_cipher, n, 2, opts.step_budget,
                                result.stats);
        search.run([&](const std::vector<std::uint32_t>& order, const std::vector<Set>&) {
            if (candidates_seen >= opts.max_candidates) return true;
            ++result.stats.chains_tried;
            std::vector<std::uint32_t> outer_map(n, 0);
            for (std::size_t s = 0; s < n; ++s) outer_map[order[s]] = static_cast<std::uint32_t>(s + 1);
            Permutation outer(std::move(outer_map));
            std::vector<Set> serial_sets(n);
            for (std::size_t s = 0; s < n; ++s)
                serial_sets[s] = ex.table.plain_to_cipher[order[s]];
            return window_pass(serial_sets, outer);
        });
    }

    if (!success) {
        if (candidates_seen == 0)
            throw NoChainError("chain_attack: no complete chain satisfies the linking rules "
                               "(target may be plaintext-delayed or use deeper memory)");
        throw AttackError("chain_attack: " + std::to_string(candidates_seen) +
                          " chain candidates found, none functionally equivalent");
    }
    return result;
}

} // namespace chaosbreak
