#pragma once

#include "gazerunner/events.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gazerunner {

/// Canonical single-line JSON for an event: `{"data":{...},"id":N,"kind":"...","t":T}`
/// with keys sorted and absent fields omitted.
std::string canonical_line(const Event& event);

/// Parses one line written by canonical_line. Throws std::invalid_argument.
Event parse_event_line(const std::string& line, double timestep);

/// Append-only event record. The digest is FNV-1a over the canonical lines,
/// updated as events arrive, so it depends only on what was appended.
class EventLog {
public:
    void append(Event event);

    const std::vector<Event>& events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    std::uint64_t digest() const { return digest_; }
    std::string digest_hex() const;

    void write_ndjson(std::ostream& out) const;

private:
    std::vector<Event> events_;
    std::uint64_t digest_ = 0xcbf29ce484222325ULL;
};

std::string to_hex64(std::uint64_t value);

}  // namespace gazerunner
