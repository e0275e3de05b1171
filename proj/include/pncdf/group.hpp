#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pncdf/error.hpp"
#include "pncdf/wire.hpp"

namespace pncdf {

/// String hints steering optimization. Unrecognized keys are preserved
/// and ignored. Recognized: "aggregators", "buffer_size", "record_batch".
struct HintSet {
    std::map<std::string, std::string> table;

    void set(std::string key, std::string value) { table[std::move(key)] = std::move(value); }
    std::optional<std::string> get(const std::string& key) const {
        auto it = table.find(key);
        if (it == table.end()) return std::nullopt;
        return it->second;
    }
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
};

/// Fixed-size set of cooperating in-process execution contexts; the
/// communicator stand-in. Collective calls are rendezvous points: every
/// rank must arrive with the same operation tag, in the same order.
class Group {
public:
    explicit Group(int size, std::chrono::milliseconds timeout = std::chrono::seconds(10));

    int size() const { return size_; }
    static constexpr int root = 0;

    void barrier(int rank);
    /// Returns root's bytes on every rank.
    Bytes broadcast(int rank, Bytes from_root);
    /// True iff all ranks passed byte-identical digests.
    bool all_match(int rank, const Bytes& digest);
    /// All ranks' items, in rank order, on every rank.
    std::vector<Bytes> all_gather(int rank, Bytes item);
    /// Root's shared object handed to every rank (in-process only).
    std::shared_ptr<void> share(int rank, std::shared_ptr<void> from_root);

    /// Completed rendezvous count; inquiry instrumentation.
    std::uint64_t collective_count() const;

private:
    struct Slot {
        Bytes bytes;
        std::shared_ptr<void> ptr;
    };

    // Generic rendezvous: deposit, wait for all, read everyone's slots.
    std::vector<Slot> exchange(int rank, const char* tag, Slot item);

    const int size_;
    const std::chrono::milliseconds timeout_;

    mutable std::mutex m_;
    std::condition_variable cv_;
    enum class Phase { Fill, Drain };
    Phase phase_ = Phase::Fill;
    int arrived_ = 0;
    int drain_left_ = 0;
    std::uint64_t round_ = 0;
    const char* tag_ = nullptr;
    bool tag_mismatch_ = false;
    bool poisoned_ = false;
    std::vector<Slot> slots_;
    std::vector<Slot> results_;
};

/// Runs n concurrent contexts, each receiving the shared group and its
/// rank; returns all results in rank order. A thrown body exception is
/// rethrown after all contexts finish.
template <class Body>
auto group_spawn(int n, Body body) {
    using Result = std::invoke_result_t<Body, Group&, int>;
    if (n < 1) throw Error(Err::BadId, "participant count must be >= 1");
    Group group(n);
    std::vector<Result> results;
    results.resize(std::size_t(n));
    std::vector<std::exception_ptr> errors;
    errors.resize(std::size_t(n));
    std::vector<std::thread> threads;
    threads.reserve(std::size_t(n));
    for (int r = 0; r < n; ++r) {
        threads.emplace_back([&, r] {
            try {
                results[std::size_t(r)] = body(group, r);
            } catch (...) {
                errors[std::size_t(r)] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace pncdf
