#include "emailnet/ingest.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "emailnet/error.hpp"

namespace emailnet {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::optional<Timestamp> parse_ts(std::string_view s) {
  Timestamp v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

enum class LineVerb { mail_from, rcpt_to, data, data_end, label };

std::optional<LineVerb> parse_verb(std::string_view s) {
  if (s == "MAIL_FROM") return LineVerb::mail_from;
  if (s == "RCPT_TO") return LineVerb::rcpt_to;
  if (s == "DATA") return LineVerb::data;
  if (s == "DATA_END") return LineVerb::data_end;
  if (s == "LABEL") return LineVerb::label;
  return std::nullopt;
}

void check_stream(std::istream& in) {
  if (in.bad()) throw IoError("read error on input stream");
}

}  // namespace

std::string_view to_string(Label l) {
  switch (l) {
    case Label::ham: return "ham";
    case Label::spam: return "spam";
    case Label::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::accepted: return "accepted";
    case Status::rejected: return "rejected";
    case Status::incomplete: return "incomplete";
  }
  return "incomplete";
}

std::optional<Label> parse_label(std::string_view s) {
  if (s == "ham") return Label::ham;
  if (s == "spam") return Label::spam;
  if (s == "unknown") return Label::unknown;
  return std::nullopt;
}

std::optional<Status> parse_status(std::string_view s) {
  if (s == "accepted") return Status::accepted;
  if (s == "rejected") return Status::rejected;
  if (s == "incomplete") return Status::incomplete;
  return std::nullopt;
}

SessionLogResult parse_session_log(std::istream& in) {
  if (!in.good() && !in.eof()) throw IoError("input stream is not readable");
  SessionLogResult result;
  std::optional<SmtpSession> current;
  bool mail_open = false;

  auto flush = [&] {
    if (current) {
      result.sessions.push_back(std::move(*current));
      ++result.records;
      current.reset();
    }
  };

  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty()) continue;

    auto fields = split(view, '\t');
    if (fields.size() < 3 || fields.size() > 4) {
      ++result.malformed;
      ++result.records;
      continue;
    }
    auto ts = parse_ts(fields[0]);
    auto verb = parse_verb(fields[2]);
    std::string_view sid = fields[1];
    std::string_view arg = fields.size() == 4 ? fields[3] : std::string_view{};
    bool needs_arg = verb == LineVerb::rcpt_to || verb == LineVerb::label;
    if (!ts || !verb || sid.empty() || (needs_arg && trim(arg).empty())) {
      ++result.malformed;
      ++result.records;
      continue;
    }

    if (!current || current->session_id != sid) {
      flush();
      current = SmtpSession{std::string(sid), *ts, {}, Label::unknown};
      mail_open = false;
    }

    bool ok = true;
    switch (*verb) {
      case LineVerb::mail_from:
        current->commands.push_back({Verb::mail_from, std::string(arg)});
        mail_open = true;
        break;
      case LineVerb::rcpt_to:
        if (!mail_open) {
          ok = false;
          break;
        }
        current->commands.push_back({Verb::rcpt_to, std::string(arg)});
        break;
      case LineVerb::data:
        current->commands.push_back({Verb::data, {}});
        break;
      case LineVerb::data_end:
        current->commands.push_back({Verb::data_end, {}});
        mail_open = false;
        break;
      case LineVerb::label: {
        auto l = parse_label(trim(arg));
        if (!l || *l == Label::unknown) {
          ok = false;
          break;
        }
        current->label = *l;
        break;
      }
    }
    if (!ok) {
      ++result.malformed;
      ++result.records;
    }
  }
  check_stream(in);
  flush();
  return result;
}

EventLogResult parse_event_log(std::istream& in) {
  if (!in.good() && !in.eof()) throw IoError("input stream is not readable");
  EventLogResult result;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty()) continue;
    ++result.records;

    auto fields = split(view, '\t');
    if (fields.size() != 5) {
      ++result.malformed;
      continue;
    }
    auto ts = parse_ts(fields[0]);
    auto status = parse_status(fields[3]);
    auto label = parse_label(fields[4]);
    if (!ts || !status || !label) {
      ++result.malformed;
      continue;
    }
    bool consistent = *status == Status::accepted ? *label != Label::unknown
                                                  : *label == Label::unknown;
    EmailEvent e{*ts, std::string(trim(fields[1])), {}, *status, *label};
    for (auto r : split(fields[2], ',')) {
      r = trim(r);
      if (!r.empty()) e.recipients.emplace_back(r);
    }
    if (!consistent || e.recipients.empty()) {
      ++result.malformed;
      continue;
    }
    if (e.sender.empty() || e.sender == "<>") {
      ++result.null_sender;
      continue;
    }
    result.events.push_back(std::move(e));
  }
  check_stream(in);
  return result;
}

void write_event(std::ostream& out, const EmailEvent& e) {
  out << e.timestamp << '\t' << e.sender << '\t';
  for (std::size_t i = 0; i < e.recipients.size(); ++i) {
    if (i) out << ',';
    out << e.recipients[i];
  }
  out << '\t' << to_string(e.status) << '\t' << to_string(e.label) << '\n';
}

void write_event_log(std::ostream& out, const std::vector<EmailEvent>& events) {
  for (const auto& e : events) write_event(out, e);
  if (!out) throw IoError("write error on output stream");
}

ClassifyStats& ClassifyStats::operator+=(const ClassifyStats& o) {
  accepted += o.accepted;
  rejected += o.rejected;
  incomplete += o.incomplete;
  null_sender += o.null_sender;
  unlabeled += o.unlabeled;
  return *this;
}

std::string extract_address(std::string_view argument) {
  auto a = trim(argument);
  if (!a.empty() && a.front() == '<') {
    auto close = a.find('>');
    a = close == std::string_view::npos ? a.substr(1) : a.substr(1, close - 1);
  } else {
    // bare address, possibly followed by ESMTP parameters
    auto space = a.find(' ');
    if (space != std::string_view::npos) a = a.substr(0, space);
  }
  return std::string(trim(a));
}

std::vector<EmailEvent> classify_session(const SmtpSession& s, ClassifyStats* stats) {
  ClassifyStats local;
  std::vector<EmailEvent> events;

  struct Cycle {
    std::string sender;
    std::vector<std::string> recipients;
    bool data = false;
  };
  std::optional<Cycle> cycle;
  bool any_mail = false;

  auto finish = [&](Cycle& c, bool completed) {
    if (c.sender.empty()) {
      ++local.null_sender;
      return;
    }
    if (c.recipients.empty()) {
      ++local.incomplete;
      return;
    }
    if (completed) {
      if (s.label == Label::unknown) {
        ++local.unlabeled;
        return;
      }
      ++local.accepted;
      events.push_back({s.timestamp, std::move(c.sender), std::move(c.recipients),
                        Status::accepted, s.label});
    } else {
      ++local.rejected;
      events.push_back({s.timestamp, std::move(c.sender), std::move(c.recipients),
                        Status::rejected, Label::unknown});
    }
  };

  for (const auto& cmd : s.commands) {
    switch (cmd.verb) {
      case Verb::mail_from:
        if (cycle) finish(*cycle, false);
        cycle = Cycle{extract_address(cmd.argument), {}, false};
        any_mail = true;
        break;
      case Verb::rcpt_to:
        if (cycle) {
          auto r = extract_address(cmd.argument);
          if (!r.empty()) cycle->recipients.push_back(std::move(r));
        }
        break;
      case Verb::data:
        if (cycle) cycle->data = true;
        break;
      case Verb::data_end:
        if (cycle) {
          finish(*cycle, cycle->data);
          cycle.reset();
        }
        break;
    }
  }
  if (cycle) finish(*cycle, false);
  if (!any_mail) ++local.incomplete;

  if (stats) *stats += local;
  return events;
}

std::vector<Transmission> expand_recipients(const EmailEvent& e) {
  std::vector<Transmission> out;
  out.reserve(e.recipients.size());
  for (const auto& r : e.recipients)
    out.push_back({e.sender, r, e.timestamp, e.status, e.label});
  return out;
}

}  // namespace emailnet
