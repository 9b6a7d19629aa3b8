#pragma once

// Boolean functions f : {+-1}^n -> {+-1} under query access.
//
// A BooleanFunction is a cheap, copyable handle onto an immutable backing
// (dense truth table or opaque evaluator) plus a shared query counter. Every
// counted evaluation bumps the counter by exactly one; functions derived by
// restriction share the counter of the function they were derived from, so
// the count always equals the number of leaf evaluations of the root.

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "junta/bits.hpp"

namespace junta {

class QueryCounter {
public:
    void add(std::uint64_t n = 1) noexcept { count_.fetch_add(n, std::memory_order_relaxed); }
    std::uint64_t value() const noexcept { return count_.load(std::memory_order_relaxed); }

private:
    std::atomic<std::uint64_t> count_{0};
};

/// Largest arity for which a dense truth table is built (default 20).
int table_cap();
void set_table_cap(int cap);

/// Live set J plus the fixed assignment z on the complement of J, stored as
/// the bits of z at their original positions.
struct Restriction {
    Mask live = 0;
    Mask fixed = 0;

    /// Builds (J, z) for arity n; bits of `assignment` inside J are ignored.
    static Restriction make(int n, Mask live, Mask assignment);

    Mask apply(Mask x) const { return (x & live) | fixed; }

    /// Restricting by *this and then by `inner` (whose live set lies inside
    /// ours) is the single restriction returned here.
    Restriction then(const Restriction& inner) const;
};

class BooleanFunction {
public:
    using Evaluator = std::function<int(Mask)>;

    static BooleanFunction from_table(int n, std::vector<std::int8_t> signs);
    static BooleanFunction from_evaluator(int n, Evaluator fn);

    int arity() const { return n_; }
    bool has_table() const { return !backing_->table.empty(); }

    /// Dense table in index order; throws UnsupportedError for evaluators.
    const std::vector<std::int8_t>& table() const;

    /// Counted evaluation at a point mask.
    int eval(Mask x) const {
        counter_->add();
        return peek(x);
    }

    /// Counted evaluation at an explicit +-1 vector of length n.
    int eval(std::span<const int> x) const;

    /// Uncounted white-box read, reserved for exact reference routines and
    /// for materializing derived tables.
    int peek(Mask x) const {
        return has_table() ? backing_->table[x] : backing_->fn(x);
    }

    std::uint64_t queries() const { return counter_->value(); }
    const std::shared_ptr<QueryCounter>& counter() const { return counter_; }

    /// Same backing, new zeroed counter.
    BooleanFunction with_fresh_counter() const;

    /// f restricted by r; still of arity n but ignores bits outside r.live.
    /// Evaluations are charged to this function's counter.
    BooleanFunction restrict(const Restriction& r) const;

    /// Truth table as +-1 doubles (white-box; requires has_table()).
    std::vector<double> values() const;

private:
    struct Backing {
        std::vector<std::int8_t> table;
        Evaluator fn;
    };

    BooleanFunction(int n, std::shared_ptr<const Backing> backing,
                    std::shared_ptr<QueryCounter> counter)
        : n_(n), backing_(std::move(backing)), counter_(std::move(counter)) {}

    int n_ = 0;
    std::shared_ptr<const Backing> backing_;
    std::shared_ptr<QueryCounter> counter_;
};

// ---------------------------------------------------------------------------
// Generators. Coordinates are 1-based in these signatures.

BooleanFunction constant_function(int n, int value);
BooleanFunction dictator(int n, int i);
BooleanFunction parity(int n, Mask set);
/// Majority of the first m coordinates (m odd).
BooleanFunction majority(int n, int m);
/// Junta on `relevant`; subtable index bit j is the j-th smallest coordinate.
BooleanFunction junta_function(int n, Mask relevant, std::vector<std::int8_t> subtable);
BooleanFunction random_function(int n, std::uint64_t seed);

/// Textual generator spec used by the CLI:
///   const:+1 | dictator:<i> | parity:<i,j,..> | majority:<m> |
///   junta:<i,j,..>:<+-string> | random:<seed> | table:<path>
BooleanFunction make_function(const std::string& spec, int n);

/// Parses "1,3,4" (1-based) into a mask; validates against n.
Mask parse_coordinate_list(const std::string& text, int n);

// ---------------------------------------------------------------------------
// Planted noisy juntas.

struct PlantedInstance {
    BooleanFunction base;
    BooleanFunction realized;
    Mask relevant = 0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
};

/// Random junta on a random k-subset with each output flipped independently
/// with probability gamma. Flips are a pure function of (seed, input index).
PlantedInstance plant_noisy_junta(int n, int k, double gamma, std::uint64_t seed);

/// Same flipping applied to a caller-chosen base junta.
PlantedInstance plant_noise(const BooleanFunction& base, Mask relevant, double gamma,
                            std::uint64_t seed);

// ---------------------------------------------------------------------------
// Truth-table files: "n=<int>" then 2^n characters over {+,-} in index order.

void write_table(std::ostream& out, const BooleanFunction& f);
void write_table_file(const std::string& path, const BooleanFunction& f);
BooleanFunction read_table(std::istream& in);
BooleanFunction read_table_file(const std::string& path);

}  // namespace junta
