#include "pncdf/group.hpp"

#include <cstring>

namespace pncdf {

std::uint64_t HintSet::get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stoull(*v);
    } catch (...) {
        return fallback;
    }
}

Group::Group(int size, std::chrono::milliseconds timeout)
    : size_(size), timeout_(timeout), slots_(std::size_t(size)), results_(std::size_t(size)) {
    if (size < 1) throw Error(Err::BadId, "group size must be >= 1");
}

std::vector<Group::Slot> Group::exchange(int rank, const char* tag, Slot item) {
    std::unique_lock lk(m_);
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    auto wait_for = [&](auto pred) {
        if (!cv_.wait_until(lk, deadline, [&] { return poisoned_ || pred(); })) {
            poisoned_ = true;
            cv_.notify_all();
            throw Error(Err::CollectiveTimeout,
                        std::string("collective timeout in ") + tag + " on rank " +
                            std::to_string(rank));
        }
        if (poisoned_)
            throw Error(Err::CollectiveTimeout,
                        std::string("group poisoned by an earlier timeout (") + tag + ")");
    };

    // Wait for the previous round to drain before depositing.
    wait_for([&] { return phase_ == Phase::Fill; });

    if (arrived_ == 0) {
        tag_ = tag;
        tag_mismatch_ = false;
    } else if (std::strcmp(tag_, tag) != 0) {
        tag_mismatch_ = true;
    }
    slots_[std::size_t(rank)] = std::move(item);
    const std::uint64_t my_round = round_;
    if (++arrived_ == size_) {
        results_ = std::move(slots_);
        slots_.assign(std::size_t(size_), Slot{});
        arrived_ = 0;
        drain_left_ = size_;
        phase_ = Phase::Drain;
        // Count the round as soon as everyone has arrived, so the count is
        // stable by the time any rank returns from the call.
        ++round_;
        cv_.notify_all();
    } else {
        wait_for([&] { return phase_ == Phase::Drain && round_ == my_round + 1; });
    }

    const bool mismatch = tag_mismatch_;
    auto out = results_;
    if (--drain_left_ == 0) {
        phase_ = Phase::Fill;
        cv_.notify_all();
    }
    lk.unlock();

    if (mismatch)
        throw Error(Err::CollectiveMismatch,
                    std::string("ranks issued different collective operations (") + tag + ")");
    return out;
}

void Group::barrier(int rank) { exchange(rank, "barrier", {}); }

Bytes Group::broadcast(int rank, Bytes from_root) {
    Slot s;
    if (rank == root) s.bytes = std::move(from_root);
    auto all = exchange(rank, "broadcast", std::move(s));
    return std::move(all[root].bytes);
}

bool Group::all_match(int rank, const Bytes& digest) {
    auto all = exchange(rank, "all_match", Slot{digest, nullptr});
    for (const Slot& s : all)
        if (s.bytes != digest) return false;
    return true;
}

std::vector<Bytes> Group::all_gather(int rank, Bytes item) {
    auto all = exchange(rank, "all_gather", Slot{std::move(item), nullptr});
    std::vector<Bytes> out;
    out.reserve(all.size());
    for (Slot& s : all) out.push_back(std::move(s.bytes));
    return out;
}

std::shared_ptr<void> Group::share(int rank, std::shared_ptr<void> from_root) {
    Slot s;
    if (rank == root) s.ptr = std::move(from_root);
    auto all = exchange(rank, "share", std::move(s));
    return all[root].ptr;
}

std::uint64_t Group::collective_count() const {
    std::lock_guard lk(m_);
    return round_;
}

}  // namespace pncdf
