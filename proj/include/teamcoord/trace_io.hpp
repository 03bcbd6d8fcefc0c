#pragma once

#include <charconv>
#include <ostream>
#include <sstream>
#include <string>

#include "teamcoord/simulator.hpp"

namespace teamcoord {

// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline void write_trace_csv(std::ostream& out, const std::vector<StepRecord>& records) {
  out << "t,robot,from,to,cost,support_role,partner,group_id\n";
  for (const auto& rec : records) {
    for (const auto& m : rec.moves) {
      out << rec.t << ',' << m.robot << ',' << m.from << ',' << m.to << ',' << format_double(m.cost) << ','
          << m.support_role << ',';
      if (m.partner == kNone) out << -1;
      else out << m.partner;
      out << ',' << m.group_id << '\n';
    }
  }
}

inline std::string trace_csv(const std::vector<StepRecord>& records) {
  std::ostringstream out;
  write_trace_csv(out, records);
  return out.str();
}

inline HandshakeLog collect_handshakes(const std::vector<StepRecord>& records) {
  HandshakeLog log;
  for (const auto& rec : records) log.insert(log.end(), rec.handshakes.begin(), rec.handshakes.end());
  return log;
}

}  // namespace teamcoord
