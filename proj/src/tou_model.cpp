#include "due/tou_model.hpp"

#include "due/text_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace due {

namespace {

int parse_clock(std::string_view text, std::size_t line) {
    const auto t = trim(text);
    const auto colon = t.find(':');
    if (colon == std::string_view::npos) throw DataError(fmt::format("diary line {}: bad time '{}'", line, text));
    const auto h = parse_int(t.substr(0, colon), fmt::format("diary line {} hour", line));
    const auto m = parse_int(t.substr(colon + 1), fmt::format("diary line {} minute", line));
    if (h < 0 || h > 24 || m < 0 || m > 59 || (h == 24 && m != 0)) {
        throw DataError(fmt::format("diary line {}: time '{}' out of range", line, text));
    }
    const auto minutes = h * 60 + m;
    if (minutes % 5 != 0) throw DataError(fmt::format("diary line {}: time '{}' is not on the 5-min grid", line, text));
    return static_cast<int>(minutes / 5);
}

std::string format_clock(int slot) { return fmt::format("{:02d}:{:02d}", slot * 5 / 60, slot * 5 % 60); }

// Events grouped by person-day, each group sorted by start slot.
std::vector<std::vector<const ActivityEvent*>> group_days(std::span<const ActivityEvent> events) {
    std::vector<const ActivityEvent*> order;
    order.reserve(events.size());
    for (const auto& e : events) order.push_back(&e);
    std::sort(order.begin(), order.end(), [](const ActivityEvent* a, const ActivityEvent* b) {
        return std::tie(a->person, a->date, a->start_slot) < std::tie(b->person, b->date, b->start_slot);
    });
    std::vector<std::vector<const ActivityEvent*>> days;
    for (const auto* e : order) {
        if (days.empty() || days.back().front()->person != e->person || days.back().front()->date != e->date) {
            days.emplace_back();
        }
        days.back().push_back(e);
    }
    return days;
}

ProbabilityVector normalise(const CountVector& c, std::uint64_t total) {
    ProbabilityVector p{};
    for (std::size_t i = 0; i < kActivityCount; ++i) p[i] = static_cast<double>(c[i]) / static_cast<double>(total);
    return p;
}

ProbabilityVector uniform_vector() {
    ProbabilityVector p{};
    p.fill(1.0 / static_cast<double>(kActivityCount));
    return p;
}

}  // namespace

Stratum Stratum::from_index(std::size_t i) {
    const auto d = i % kDayTypeCount;
    const auto g = (i / kDayTypeCount) % kAgeGroupCount;
    const auto e = i / (kDayTypeCount * kAgeGroupCount);
    return {due::from_index<Employment>(e), due::from_index<AgeGroup>(g), due::from_index<DayType>(d)};
}

std::string_view to_string(Fallback f) {
    switch (f) {
        case Fallback::Observed: return "observed";
        case Fallback::PooledDayTypes: return "pooled-day-types";
        case Fallback::Uniform: return "uniform";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Diary I/O
// ---------------------------------------------------------------------------

std::vector<ActivityEvent> parse_diary(std::istream& in) {
    std::vector<ActivityEvent> events;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = split(t, ',');
        if (!header_seen) {
            header_seen = true;
            if (cells.size() != 7 || trim(cells[0]) != "person") {
                throw DataError("diary: expected header person,employment,age_group,date,activity,start,end");
            }
            continue;
        }
        if (cells.size() != 7) throw DataError(fmt::format("diary line {}: expected 7 columns", line_no));
        ActivityEvent e;
        e.person = std::string(trim(cells[0]));
        if (e.person.empty()) throw DataError(fmt::format("diary line {}: empty person id", line_no));
        e.employment = parse_employment(trim(cells[1]));
        e.age_group = parse_age_group(trim(cells[2]));
        e.date = parse_date(trim(cells[3]));
        e.activity = parse_activity(trim(cells[4]));
        e.start_slot = parse_clock(cells[5], line_no);
        e.end_slot = parse_clock(cells[6], line_no);
        if (e.start_slot >= e.end_slot) {
            throw DataError(fmt::format("diary line {}: episode ends before it starts", line_no));
        }
        events.push_back(std::move(e));
    }
    check_tiling(events);
    return events;
}

std::vector<ActivityEvent> load_diary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open diary '{}'", path));
    return parse_diary(in);
}

void write_diary(std::ostream& out, std::span<const ActivityEvent> events) {
    out << "person,employment,age_group,date,activity,start,end\n";
    for (const auto& e : events) {
        out << e.person << ',' << to_string(e.employment) << ',' << to_string(e.age_group) << ','
            << format_date(e.date) << ',' << to_string(e.activity) << ',' << format_clock(e.start_slot) << ','
            << format_clock(e.end_slot) << '\n';
    }
}

void check_tiling(std::span<const ActivityEvent> events) {
    for (const auto& day : group_days(events)) {
        const auto& first = *day.front();
        int cursor = 0;
        for (const auto* e : day) {
            if (e->start_slot != cursor || e->end_slot <= e->start_slot) {
                throw DataError(fmt::format("diary for person '{}' on {}: {} at {}", first.person,
                                            format_date(first.date),
                                            e->start_slot > cursor ? "gap" : "overlap", format_clock(cursor)));
            }
            if (e->employment != first.employment || e->age_group != first.age_group) {
                throw DataError(fmt::format("diary for person '{}' on {}: inconsistent person attributes",
                                            first.person, format_date(first.date)));
            }
            cursor = e->end_slot;
        }
        if (cursor != kSlotsPerDay) {
            throw DataError(fmt::format("diary for person '{}' on {}: gap at {}", first.person,
                                        format_date(first.date), format_clock(cursor)));
        }
    }
}

std::vector<TransitionEvent> derive_transitions(std::span<const ActivityEvent> events) {
    check_tiling(events);
    std::vector<TransitionEvent> out;
    for (const auto& day : group_days(events)) {
        for (std::size_t i = 1; i < day.size(); ++i) {
            const auto& a = *day[i - 1];
            const auto& b = *day[i];
            out.push_back({a.employment, a.age_group, a.day_type(), a.activity, b.activity, a.end_slot});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

void InitialComponent::add(const Stratum& s, ActivityState a) {
    ++counts_[s.index()][index_of(a)];
    ++totals_[s.index()];
}

std::optional<ProbabilityVector> InitialComponent::probabilities(const Stratum& s) const {
    if (!observed(s)) return std::nullopt;
    return normalise(counts_[s.index()], totals_[s.index()]);
}

Distribution InitialComponent::resolve(const Stratum& s) const {
    if (auto p = probabilities(s)) return {*p, Fallback::Observed};
    CountVector pooled{};
    std::uint64_t total = 0;
    for (std::size_t d = 0; d < kDayTypeCount; ++d) {
        const auto other = s.with_day_type(from_index<DayType>(d));
        for (std::size_t i = 0; i < kActivityCount; ++i) pooled[i] += counts_[other.index()][i];
        total += totals_[other.index()];
    }
    if (total > 0) return {normalise(pooled, total), Fallback::PooledDayTypes};
    return {uniform_vector(), Fallback::Uniform};
}

std::uint32_t TransitionComponent::key(const Stratum& s, ActivityState from, int slot) {
    return static_cast<std::uint32_t>((s.index() * kSlotsPerDay + static_cast<std::size_t>(slot)) * kActivityCount +
                                      index_of(from));
}

void TransitionComponent::add(const Stratum& s, ActivityState from, ActivityState to, int slot) {
    if (slot <= 0 || slot >= kSlotsPerDay) throw InvariantError("transition slot outside 1..287");
    ++rows_[key(s, from, slot)][index_of(to)];
}

const CountVector* TransitionComponent::counts(const Stratum& s, ActivityState from, int slot) const {
    if (slot <= 0 || slot >= kSlotsPerDay) return nullptr;
    const auto it = rows_.find(key(s, from, slot));
    return it == rows_.end() ? nullptr : &it->second;
}

std::optional<ProbabilityVector> TransitionComponent::row(const Stratum& s, ActivityState from, int slot) const {
    const auto* c = counts(s, from, slot);
    if (c == nullptr) return std::nullopt;
    std::uint64_t total = 0;
    for (auto v : *c) total += v;
    return normalise(*c, total);
}

Distribution TransitionComponent::resolve(const Stratum& s, ActivityState from, int slot) const {
    if (auto p = row(s, from, slot)) return {*p, Fallback::Observed};
    CountVector pooled{};
    std::uint64_t total = 0;
    for (std::size_t d = 0; d < kDayTypeCount; ++d) {
        if (const auto* c = counts(s.with_day_type(from_index<DayType>(d)), from, slot)) {
            for (std::size_t i = 0; i < kActivityCount; ++i) {
                pooled[i] += (*c)[i];
                total += (*c)[i];
            }
        }
    }
    if (total > 0) return {normalise(pooled, total), Fallback::PooledDayTypes};
    return {uniform_vector(), Fallback::Uniform};
}

void DurationComponent::add(const Stratum& s, ActivityState a, int minutes) {
    auto& c = cells_[s.index()][index_of(a)];
    const auto m = static_cast<std::uint64_t>(minutes);
    ++c.count;
    c.sum += m;
    c.sum_sq += m * m;
}

DurationStats DurationComponent::finish(const Sums& s) {
    if (s.count == 0) return {};
    const double n = static_cast<double>(s.count);
    const double mean = static_cast<double>(s.sum) / n;
    // n*sum_sq - sum^2 is exact in integers for any realistic diary size.
    const auto num = static_cast<double>(s.count * s.sum_sq - s.sum * s.sum);
    const double var = std::max(0.0, num / (n * n));
    return {static_cast<std::uint32_t>(s.count), mean, std::sqrt(var)};
}

DurationStats DurationComponent::stats(const Stratum& s, ActivityState a) const {
    return finish(cells_[s.index()][index_of(a)]);
}

std::pair<DurationStats, Fallback> DurationComponent::resolve(const Stratum& s, ActivityState a) const {
    if (const auto st = stats(s, a); st.count > 0) return {st, Fallback::Observed};
    Sums pooled;
    for (std::size_t d = 0; d < kDayTypeCount; ++d) {
        const auto& c = cells_[s.with_day_type(from_index<DayType>(d)).index()][index_of(a)];
        pooled.count += c.count;
        pooled.sum += c.sum;
        pooled.sum_sq += c.sum_sq;
    }
    if (pooled.count > 0) return {finish(pooled), Fallback::PooledDayTypes};
    Sums all;
    for (const auto& cell : cells_) {
        const auto& c = cell[index_of(a)];
        all.count += c.count;
        all.sum += c.sum;
        all.sum_sq += c.sum_sq;
    }
    if (all.count > 0) return {finish(all), Fallback::Uniform};
    return {DurationStats{0, 60.0, 30.0}, Fallback::Uniform};
}

InitialComponent estimate_initial(std::span<const ActivityEvent> events) {
    InitialComponent c;
    for (const auto& e : events) {
        if (e.start_slot == 0) c.add(e.stratum(), e.activity);
    }
    return c;
}

TransitionComponent estimate_transitions(std::span<const ActivityEvent> events) {
    TransitionComponent c;
    for (const auto& t : derive_transitions(events)) c.add(t.stratum(), t.from, t.to, t.slot);
    return c;
}

DurationComponent estimate_durations(std::span<const ActivityEvent> events) {
    DurationComponent c;
    for (const auto& e : events) c.add(e.stratum(), e.activity, e.duration_minutes());
    return c;
}

// ---------------------------------------------------------------------------
// ActivityModel
// ---------------------------------------------------------------------------

ActivityModel::ActivityModel(InitialComponent initial, TransitionComponent transitions, DurationComponent durations)
    : initial_(std::move(initial)), transitions_(std::move(transitions)), durations_(std::move(durations)) {}

ActivityModel ActivityModel::estimate(std::span<const ActivityEvent> events) {
    return ActivityModel(estimate_initial(events), estimate_transitions(events), estimate_durations(events));
}

namespace {

constexpr std::string_view kModelMagic = "due-activity-model 1";

void write_stratum(std::ostream& out, const Stratum& s) {
    out << to_string(s.employment) << ' ' << to_string(s.age_group) << ' ' << to_string(s.day_type);
}

}  // namespace

void ActivityModel::save(std::ostream& out) const {
    out << kModelMagic << '\n';
    out << "# initial <employment> <age_group> <day_type> <count per activity in Table order>\n";
    out << "# transition <employment> <age_group> <day_type> <slot> <from> <count per destination>\n";
    out << "# duration <employment> <age_group> <day_type> <activity> <n> <sum_min> <sum_sq_min>\n";
    out << "activities";
    for (std::size_t i = 0; i < kActivityCount; ++i) out << ' ' << to_string(from_index<ActivityState>(i));
    out << '\n';
    for (std::size_t i = 0; i < kStratumCount; ++i) {
        const auto s = Stratum::from_index(i);
        if (!initial_.observed(s)) continue;
        out << "initial ";
        write_stratum(out, s);
        for (auto c : initial_.counts(s)) out << ' ' << c;
        out << '\n';
    }
    for (const auto& [key, counts] : transitions_.rows()) {
        const auto from = from_index<ActivityState>(key % kActivityCount);
        const auto slot = static_cast<int>((key / kActivityCount) % kSlotsPerDay);
        const auto s = Stratum::from_index(key / kActivityCount / kSlotsPerDay);
        out << "transition ";
        write_stratum(out, s);
        out << ' ' << slot << ' ' << to_string(from);
        for (auto c : counts) out << ' ' << c;
        out << '\n';
    }
    for (std::size_t i = 0; i < kStratumCount; ++i) {
        const auto s = Stratum::from_index(i);
        for (std::size_t a = 0; a < kActivityCount; ++a) {
            const auto act = from_index<ActivityState>(a);
            const auto& c = durations_.sums(s, act);
            if (c.count == 0) continue;
            out << "duration ";
            write_stratum(out, s);
            out << ' ' << to_string(act) << ' ' << c.count << ' ' << c.sum << ' ' << c.sum_sq << '\n';
        }
    }
    out << "end\n";
}

ActivityModel ActivityModel::load(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto t = trim(line);
            if (!t.empty() && t.front() != '#') return true;
        }
        return false;
    };
    if (!next_line() || trim(line) != kModelMagic) throw DataError("activity model: missing header line");
    if (!next_line()) throw DataError("activity model: truncated file");
    {
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (word != "activities") throw DataError("activity model: missing activities line");
        for (std::size_t i = 0; i < kActivityCount; ++i) {
            ss >> word;
            if (parse_activity(word) != from_index<ActivityState>(i)) {
                throw DataError("activity model: activity order does not match this build");
            }
        }
    }
    InitialComponent initial;
    TransitionComponent transitions;
    DurationComponent durations;
    bool ended = false;
    while (next_line()) {
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        if (kind == "end") {
            ended = true;
            break;
        }
        std::string e;
        std::string g;
        std::string d;
        ss >> e >> g >> d;
        if (!ss) throw DataError(fmt::format("activity model line {}: truncated record", line_no));
        const Stratum s{parse_employment(e), parse_age_group(g), parse_day_type(d)};
        auto read_counts = [&](CountVector& counts) {
            for (auto& c : counts) {
                if (!(ss >> c)) throw DataError(fmt::format("activity model line {}: bad counts", line_no));
            }
        };
        if (kind == "initial") {
            CountVector counts{};
            read_counts(counts);
            for (std::size_t a = 0; a < kActivityCount; ++a) {
                for (std::uint32_t k = 0; k < counts[a]; ++k) initial.add(s, from_index<ActivityState>(a));
            }
        } else if (kind == "transition") {
            int slot = 0;
            std::string from;
            ss >> slot >> from;
            CountVector counts{};
            read_counts(counts);
            const auto f = parse_activity(from);
            for (std::size_t a = 0; a < kActivityCount; ++a) {
                for (std::uint32_t k = 0; k < counts[a]; ++k) transitions.add(s, f, from_index<ActivityState>(a), slot);
            }
        } else if (kind == "duration") {
            std::string act;
            DurationComponent::Sums sums;
            ss >> act >> sums.count >> sums.sum >> sums.sum_sq;
            if (!ss) throw DataError(fmt::format("activity model line {}: bad duration record", line_no));
            durations.set_sums(s, parse_activity(act), sums);
        } else {
            throw DataError(fmt::format("activity model line {}: unknown record '{}'", line_no, kind));
        }
    }
    if (!ended) throw DataError("activity model: missing end marker");
    return ActivityModel(std::move(initial), std::move(transitions), std::move(durations));
}

void ActivityModel::save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError(fmt::format("cannot write activity model '{}'", path));
    save(out);
}

ActivityModel ActivityModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot open activity model '{}'", path));
    return load(in);
}

}  // namespace due
