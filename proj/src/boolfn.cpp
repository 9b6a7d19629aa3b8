#include "junta/boolfn.hpp"

#include <atomic>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "junta/errors.hpp"

namespace junta {
namespace {

std::atomic<int> g_table_cap{20};

void check_arity(int n) {
    if (n < 0 || n > kMaxArity) {
        throw InputError("arity must lie in [0, " + std::to_string(kMaxArity) + "], got " +
                         std::to_string(n));
    }
}

void check_coordinate(int n, int i) {
    if (i < 1 || i > n) {
        throw InputError("coordinate " + std::to_string(i) + " outside [1, " + std::to_string(n) +
                         "]");
    }
}

// Builds a table when n is under the cap, otherwise wraps the rule.
BooleanFunction tabulate_or_wrap(int n, const std::function<int(Mask)>& rule) {
    check_arity(n);
    if (n <= table_cap()) {
        std::vector<std::int8_t> t(std::size_t{1} << n);
        for (Mask x = 0; x < t.size(); ++x) t[x] = static_cast<std::int8_t>(rule(x));
        return BooleanFunction::from_table(n, std::move(t));
    }
    return BooleanFunction::from_evaluator(n, rule);
}

}  // namespace

int table_cap() { return g_table_cap.load(); }

void set_table_cap(int cap) {
    if (cap < 0 || cap > 30) throw InputError("table cap must lie in [0, 30]");
    g_table_cap.store(cap);
}

Restriction Restriction::make(int n, Mask live, Mask assignment) {
    check_arity(n);
    if (live & ~low_bits(n)) throw InputError("restriction live set exceeds arity");
    return Restriction{live, assignment & ~live & low_bits(n)};
}

Restriction Restriction::then(const Restriction& inner) const {
    if (inner.live & ~live) throw InputError("inner live set must lie inside the outer live set");
    return Restriction{inner.live, (inner.fixed & live) | fixed};
}

BooleanFunction BooleanFunction::from_table(int n, std::vector<std::int8_t> signs) {
    check_arity(n);
    if (n > 30) throw UnsupportedError("truth tables are limited to arity 30");
    if (signs.size() != (std::size_t{1} << n)) {
        throw InputError("truth table for arity " + std::to_string(n) + " needs " +
                         std::to_string(std::size_t{1} << n) + " entries, got " +
                         std::to_string(signs.size()));
    }
    for (auto s : signs) {
        if (s != 1 && s != -1) throw InputError("truth table entries must be +1 or -1");
    }
    auto b = std::make_shared<Backing>();
    b->table = std::move(signs);
    return BooleanFunction(n, std::move(b), std::make_shared<QueryCounter>());
}

BooleanFunction BooleanFunction::from_evaluator(int n, Evaluator fn) {
    check_arity(n);
    if (!fn) throw InputError("empty evaluator");
    auto b = std::make_shared<Backing>();
    b->fn = std::move(fn);
    return BooleanFunction(n, std::move(b), std::make_shared<QueryCounter>());
}

const std::vector<std::int8_t>& BooleanFunction::table() const {
    if (!has_table()) throw UnsupportedError("function is evaluator-backed; no truth table");
    return backing_->table;
}

int BooleanFunction::eval(std::span<const int> x) const {
    if (static_cast<int>(x.size()) != n_) {
        throw InputError("point has " + std::to_string(x.size()) + " coordinates, function has " +
                         std::to_string(n_));
    }
    Mask m = 0;
    for (int j = 0; j < n_; ++j) {
        if (x[j] == -1) {
            m |= bit(j);
        } else if (x[j] != 1) {
            throw InputError("point coordinates must be +1 or -1");
        }
    }
    return eval(m);
}

BooleanFunction BooleanFunction::with_fresh_counter() const {
    return BooleanFunction(n_, backing_, std::make_shared<QueryCounter>());
}

BooleanFunction BooleanFunction::restrict(const Restriction& r) const {
    if ((r.live | r.fixed) & ~low_bits(n_)) throw InputError("restriction exceeds arity");
    if (r.live & r.fixed) throw InputError("restriction fixes a live coordinate");
    auto b = std::make_shared<Backing>();
    if (has_table()) {
        b->table.resize(backing_->table.size());
        for (Mask x = 0; x < b->table.size(); ++x) b->table[x] = backing_->table[r.apply(x)];
    } else {
        auto parent = backing_;
        b->fn = [parent, r](Mask x) { return parent->fn(r.apply(x)); };
    }
    return BooleanFunction(n_, std::move(b), counter_);
}

std::vector<double> BooleanFunction::values() const {
    const auto& t = table();
    return std::vector<double>(t.begin(), t.end());
}

BooleanFunction constant_function(int n, int value) {
    if (value != 1 && value != -1) throw InputError("constant must be +1 or -1");
    return tabulate_or_wrap(n, [value](Mask) { return value; });
}

BooleanFunction dictator(int n, int i) {
    check_arity(n);
    check_coordinate(n, i);
    const Mask b = bit(i - 1);
    return tabulate_or_wrap(n, [b](Mask x) { return (x & b) ? -1 : 1; });
}

BooleanFunction parity(int n, Mask set) {
    check_arity(n);
    if (set & ~low_bits(n)) throw InputError("parity set exceeds arity");
    return tabulate_or_wrap(n, [set](Mask x) { return character(set, x); });
}

BooleanFunction majority(int n, int m) {
    check_arity(n);
    if (m < 1 || m % 2 == 0) throw InputError("majority needs an odd number of inputs");
    if (m > n) throw InputError("majority width exceeds arity");
    const Mask inputs = low_bits(m);
    return tabulate_or_wrap(n, [inputs, m](Mask x) {
        return 2 * popcount(x & inputs) > m ? -1 : 1;
    });
}

BooleanFunction junta_function(int n, Mask relevant, std::vector<std::int8_t> subtable) {
    check_arity(n);
    if (relevant & ~low_bits(n)) throw InputError("junta set exceeds arity");
    const int k = popcount(relevant);
    if (subtable.size() != (std::size_t{1} << k)) {
        throw InputError("junta subtable needs 2^|T| = " + std::to_string(std::size_t{1} << k) +
                         " entries");
    }
    for (auto s : subtable) {
        if (s != 1 && s != -1) throw InputError("junta subtable entries must be +1 or -1");
    }
    auto sub = std::make_shared<const std::vector<std::int8_t>>(std::move(subtable));
    return tabulate_or_wrap(n, [sub, relevant](Mask x) {
        return static_cast<int>((*sub)[compress_bits(x, relevant)]);
    });
}

BooleanFunction random_function(int n, std::uint64_t seed) {
    check_arity(n);
    return tabulate_or_wrap(n, [seed](Mask x) {
        return (derive_seed(seed, x) >> 63) ? -1 : 1;
    });
}

Mask parse_coordinate_list(const std::string& text, int n) {
    Mask m = 0;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int i = 0;
        try {
            std::size_t used = 0;
            i = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError("bad coordinate '" + item + "'");
        }
        check_coordinate(n, i);
        m |= bit(i - 1);
    }
    return m;
}

namespace {

std::vector<std::int8_t> parse_signs(const std::string& s) {
    std::vector<std::int8_t> out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '+') {
            out.push_back(1);
        } else if (c == '-') {
            out.push_back(-1);
        } else {
            throw InputError(std::string("sign string may only contain '+' and '-', got '") + c +
                             "'");
        }
    }
    return out;
}

}  // namespace

BooleanFunction make_function(const std::string& spec, int n) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto int_arg = [&]() {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
            return v;
        } catch (const std::exception&) {
            throw InputError("generator '" + kind + "' needs an integer argument");
        }
    };
    if (kind == "const") return constant_function(n, arg == "-1" || arg == "-" ? -1 : 1);
    if (kind == "dictator") return dictator(n, static_cast<int>(int_arg()));
    if (kind == "parity") return parity(n, parse_coordinate_list(arg, n));
    if (kind == "majority") return majority(n, static_cast<int>(int_arg()));
    if (kind == "random") return random_function(n, static_cast<std::uint64_t>(int_arg()));
    if (kind == "junta") {
        const auto second = arg.find(':');
        if (second == std::string::npos) throw InputError("junta spec is junta:<coords>:<signs>");
        return junta_function(n, parse_coordinate_list(arg.substr(0, second), n),
                              parse_signs(arg.substr(second + 1)));
    }
    if (kind == "table") {
        auto f = read_table_file(arg);
        if (f.arity() != n) {
            throw InputError("table file has arity " + std::to_string(f.arity()) +
                             ", expected " + std::to_string(n));
        }
        return f;
    }
    throw InputError("unknown generator '" + kind + "'");
}

PlantedInstance plant_noise(const BooleanFunction& base, Mask relevant, double gamma,
                            std::uint64_t seed) {
    if (!(gamma >= 0.0 && gamma < 0.5)) throw InputError("corruption rate must lie in [0, 1/2)");
    const int n = base.arity();
    const std::uint64_t flip_seed = derive_seed(seed, name_tag("flips"));
    // Flip x iff its hashed uniform falls below gamma.
    auto flipped = [flip_seed, gamma](Mask x) {
        return static_cast<double>(derive_seed(flip_seed, x) >> 11) * 0x1.0p-53 < gamma;
    };
    BooleanFunction realized = [&] {
        if (gamma == 0.0) return base.with_fresh_counter();
        if (base.has_table()) {
            std::vector<std::int8_t> t = base.table();
            for (Mask x = 0; x < t.size(); ++x) {
                if (flipped(x)) t[x] = static_cast<std::int8_t>(-t[x]);
            }
            return BooleanFunction::from_table(n, std::move(t));
        }
        auto b = base.with_fresh_counter();
        return BooleanFunction::from_evaluator(n, [b, flipped](Mask x) {
            return flipped(x) ? -b.peek(x) : b.peek(x);
        });
    }();
    return PlantedInstance{base, std::move(realized), relevant, gamma, seed};
}

PlantedInstance plant_noisy_junta(int n, int k, double gamma, std::uint64_t seed) {
    check_arity(n);
    if (k < 0 || k > n) throw InputError("junta size k must lie in [0, n]");
    if (!(gamma >= 0.0 && gamma < 0.5)) throw InputError("corruption rate must lie in [0, 1/2)");
    Rng rng = make_rng(derive_seed(seed, name_tag("base")));
    // Partial Fisher-Yates for the relevant set.
    std::vector<int> coords(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) coords[i] = i;
    Mask relevant = 0;
    for (int j = 0; j < k; ++j) {
        std::uniform_int_distribution<int> pick(j, n - 1);
        std::swap(coords[j], coords[pick(rng)]);
        relevant |= bit(coords[j]);
    }
    std::vector<std::int8_t> sub(std::size_t{1} << k);
    for (auto& s : sub) s = (rng() >> 63) ? -1 : 1;
    return plant_noise(junta_function(n, relevant, std::move(sub)), relevant, gamma, seed);
}

void write_table(std::ostream& out, const BooleanFunction& f) {
    const auto& t = f.table();
    out << "n=" << f.arity() << '\n';
    std::string line(t.size(), '+');
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0) line[i] = '-';
    }
    out << line << '\n';
}

void write_table_file(const std::string& path, const BooleanFunction& f) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    write_table(out, f);
    if (!out) throw InputError("failed writing '" + path + "'");
}

BooleanFunction read_table(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw InputError("table file is empty");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header.rfind("n=", 0) != 0) throw InputError("table file must start with 'n=<int>'");
    int n = 0;
    try {
        std::size_t used = 0;
        n = std::stoi(header.substr(2), &used);
        if (used != header.size() - 2) throw std::invalid_argument(header);
    } catch (const std::exception&) {
        throw InputError("malformed table header '" + header + "'");
    }
    check_arity(n);
    if (n > 30) throw UnsupportedError("truth tables are limited to arity 30");
    std::string body;
    if (!std::getline(in, body)) throw InputError("table file has no sign line");
    if (!body.empty() && body.back() == '\r') body.pop_back();
    if (body.size() != (std::size_t{1} << n)) {
        throw InputError("sign line has " + std::to_string(body.size()) + " characters, expected " +
                         std::to_string(std::size_t{1} << n));
    }
    return BooleanFunction::from_table(n, parse_signs(body));
}

BooleanFunction read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open table file '" + path + "'");
    return read_table(in);
}

}  // namespace junta
